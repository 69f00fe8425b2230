#pragma once

#include <string>
#include <vector>

#include "slve/constitutive.hpp"
#include "slve/core.hpp"
#include "slve/pde.hpp"

namespace slve {

/// Speed and second integration constant of a kink joining two equilibria.
struct WaveSpeed {
  double c_squared;
  double A2;
};

/// c^2 = (T+ - T-)/(f(T+) - f(T-)), A2 = T- - c^2 f(T-).
WaveSpeed wave_speed(const ConstitutiveFunction& f, double T_minus, double T_plus);

struct KappaReduction {
  double kappa;
  /// kappa = 0: the first-order traveling-wave ODE degenerates (elastic limit).
  bool singular;
};

/// kappa = gamma c^3 (stress-rate) or nu c (strain-rate); elastic gives 0.
KappaReduction unified_reduction_check(Variant variant, double coeff, double c);

/// Traveling-wave problem kappa T' = T - c^2 f(T) - A2 in xi = x - c t.
struct TravelingWaveProblem {
  ConstitutiveFunction f;
  double T_minus;
  double T_plus;
  double kappa;
  double c;
  double A2;

  /// Speed from the equilibria; c takes the sign of `direction`.
  static TravelingWaveProblem make(const ConstitutiveFunction& f, double T_minus, double T_plus,
                                   double kappa, double direction = 1.0);
  /// Speed from the equilibria, kappa from the variant's coefficient.
  static TravelingWaveProblem for_variant(const ConstitutiveFunction& f, double T_minus,
                                          double T_plus, Variant variant, double coeff,
                                          double direction = 1.0);

  /// T - c^2 f(T) - A2
  double balance(double T) const { return T - c * c * f.value(T) - A2; }
  /// dT/dxi on the reduced ODE.
  double slope(double T) const { return balance(T) / kappa; }
};

enum class KinkOrientation { increasing, decreasing, none };

struct KinkExistence {
  bool exists = false;
  bool degenerate = false;
  KinkOrientation orientation = KinkOrientation::none;
  std::vector<double> interior_zeros;
  std::string diagnostic;
};

/// Scans T - c^2 f(T) - A2 on 10^4 subintervals strictly between the
/// equilibria, refining sign changes by bisection to 1e-12.
KinkExistence kink_exists(const TravelingWaveProblem& p);

/// Kink sampled on a uniform xi grid, with the integrator's dense output
/// available between samples.
class KinkProfile {
 public:
  const TravelingWaveProblem& problem() const { return problem_; }
  const std::vector<double>& xi() const { return xi_; }
  const std::vector<double>& stress() const { return T_; }
  double center() const { return center_; }

  /// Dense output: T, T' and T'' at any xi (constant beyond the integrated span).
  double at(double xi) const;
  double derivative(double xi) const;
  double second_derivative(double xi) const;

  /// max over samples of |kappa T' - (T - c^2 f(T) - A2)|, T' from dense output.
  double max_first_order_residual() const;
  /// max over samples of |T' - kappa T'' - c^2 f'(T) T'|.
  double max_second_order_residual() const;

 private:
  friend KinkProfile kink_profile(const TravelingWaveProblem&, double, double, int, double);

  struct Node {
    double xi, T, d1, d2;
  };
  const Node* segment(double xi) const;

  TravelingWaveProblem problem_;
  double center_ = 0.0;
  std::vector<Node> nodes_;
  std::vector<double> xi_;
  std::vector<double> T_;

  explicit KinkProfile(TravelingWaveProblem p) : problem_(std::move(p)) {}
};

/// Integrates kappa T' = T - c^2 f(T) - A2 from T(center) = (T- + T+)/2 in
/// both directions with adaptive Dormand-Prince steps, holding T at an
/// equilibrium once within 1e-10 of it. Throws span_too_short if either end
/// is more than 1e-6 from its equilibrium.
KinkProfile kink_profile(const TravelingWaveProblem& p, double xi_min, double xi_max,
                         int n_samples, double center = 0.0);

/// Largest gap between two profiles of the same equilibria under different
/// kappa, after rescaling xi by the kappa ratio: T_a(xi) vs T_b(xi kb/ka).
double rescaled_profile_gap(const KinkProfile& a, const KinkProfile& b);

/// PDE state that carries the kink at time t: T = profile(x - c t),
/// eps = (T - A2)/c^2, v = -(T - T_downstream)/c. Needs rho = 1.
SimState kink_state(const KinkProfile& profile, const Grid1D& grid, const MaterialModel& m,
                    double t = 0.0);

}  // namespace slve
