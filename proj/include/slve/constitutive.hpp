#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace slve {

enum class ResponseKind { linear, saturating, arctan, custom };

std::string_view to_string(ResponseKind k);
ResponseKind parse_response_kind(std::string_view name);

/// Scalar stress response (h for the stress-rate model, g for the
/// strain-rate model) with its derivative and the antiderivative that
/// vanishes at zero stress.
///
/// Catalog members:
///   linear      beta*T
///   saturating  beta*T / (1 + |beta*T|^a)^(1/a),  |value| < 1
///   arctan      (2/pi) atan(pi*beta*T/2),         |value| < 1
/// All have value(0) = 0, derivative(0) = beta and derivative > 0.
class ConstitutiveFunction {
 public:
  using Fn = std::function<double(double)>;

  static ConstitutiveFunction linear(double beta);
  static ConstitutiveFunction saturating(double beta, double a);
  static ConstitutiveFunction arctan(double beta);
  /// Custom response. `lower`/`upper` bound the range of value() (use
  /// +-infinity when unbounded). Only value(0) = 0 is enforced here;
  /// monotonicity is checked by the consumers that need it.
  static ConstitutiveFunction custom(Fn value, Fn derivative, Fn antiderivative,
                                     double lower = -std::numeric_limits<double>::infinity(),
                                     double upper = std::numeric_limits<double>::infinity());

  double value(double T) const;
  double derivative(double T) const;
  double antiderivative(double T) const;

  ResponseKind kind() const noexcept { return kind_; }
  double beta() const noexcept { return beta_; }
  double exponent() const noexcept { return a_; }
  /// Open interval containing the range of value().
  std::pair<double, double> range() const noexcept { return {lower_, upper_}; }

  /// True when derivative > 0 at `samples` points spread over [lo, hi].
  bool strictly_increasing_on(double lo, double hi, int samples = 1001) const;

 private:
  ConstitutiveFunction() = default;

  ResponseKind kind_ = ResponseKind::linear;
  double beta_ = 1.0;
  double a_ = 1.0;
  double lower_ = 0.0;
  double upper_ = 0.0;
  Fn value_;
  Fn derivative_;
  Fn antiderivative_;
};

ConstitutiveFunction make_constitutive(ResponseKind kind, double beta, double a = 1.0);

/// Complementary free energy and Gibbs energy per unit mass, with the
/// density that multiplies them.
struct PotentialPair {
  std::function<double(double)> phi_c;
  std::function<double(double)> gibbs;
  double rho = 1.0;
  /// Set when the pair was generated from a known response; lets
  /// response_from_potential skip numerical differentiation.
  std::optional<ConstitutiveFunction> source;

  /// rho*phi_c = antiderivative of `response`, and G = -phi_c (elastic case).
  static PotentialPair from_response(const ConstitutiveFunction& response, double rho);
};

/// h(T) = rho * dphi_c/dT. Analytic for catalog-generated pairs, otherwise
/// centered differences with step cbrt(eps)*max(1,|T|).
ConstitutiveFunction response_from_potential(const PotentialPair& p);

/// max over `stresses` of |phi_c(T) + G(T)|.
double elastic_limit_gap(const PotentialPair& p, std::span<const double> stresses);

/// Instantaneous elastic compliance dh/dT.
double compliance(const ConstitutiveFunction& h, double T);

struct DissipationSample {
  double t;
  double stress;
  double stress_rate;
  double rate;  ///< gamma * stress_rate^2
};

struct DissipationAudit {
  std::vector<DissipationSample> samples;
  double min_rate = 0.0;
  double total_dissipation = 0.0;
  bool passed = false;
};

struct StressSample {
  double t;
  double stress;
};

DissipationAudit audit_dissipation(double gamma, std::span<const StressSample> history);

/// Solve h(T) = y. Throws out_of_range when y is not strictly inside the
/// range of h.
double invert(const ConstitutiveFunction& h, double y);
double invert(const ConstitutiveFunction& h, double y, double guess);

}  // namespace slve
