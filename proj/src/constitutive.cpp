#include "slve/constitutive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/log1p.hpp>

#include "slve/error.hpp"

namespace slve {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void invalid(const std::string& msg) {
  throw Error(ErrorKind::invalid_parameter, msg);
}

// Integral of u / (1 + u^a)^(1/a) over [0, U].
double saturating_integral(double U, double a) {
  if (U == 0.0) return 0.0;
  if (a == 1.0) return -boost::math::log1pmx(U);
  if (a == 2.0) return U * U / (std::sqrt(1.0 + U * U) + 1.0);
  auto integrand = [a](double u) { return u / std::pow(1.0 + std::pow(u, a), 1.0 / a); };
  // u^(1+a) makes the integrand non-smooth at 0 for non-integer a; tanh-sinh
  // copes with that endpoint, Gauss-Kronrod does not.
  thread_local boost::math::quadrature::tanh_sinh<double> ts;
  const double head = ts.integrate(integrand, 0.0, std::min(U, 1.0), 1e-14);
  if (U <= 1.0) return head;
  // On [1, U] integrate (integrand - 1) in log coordinates: u = e^s.
  auto tail = [&](double s) {
    const double u = std::exp(s);
    return (integrand(u) - 1.0) * u;
  };
  using boost::math::quadrature::gauss_kronrod;
  return head + (U - 1.0) + gauss_kronrod<double, 31>::integrate(tail, 0.0, std::log(U), 10, 1e-13);
}

}  // namespace

std::string_view to_string(ResponseKind k) {
  switch (k) {
    case ResponseKind::linear: return "linear";
    case ResponseKind::saturating: return "saturating";
    case ResponseKind::arctan: return "arctan";
    case ResponseKind::custom: return "custom";
  }
  return "unknown";
}

ResponseKind parse_response_kind(std::string_view name) {
  if (name == "linear") return ResponseKind::linear;
  if (name == "saturating") return ResponseKind::saturating;
  if (name == "arctan") return ResponseKind::arctan;
  if (name == "custom") return ResponseKind::custom;
  invalid("unknown constitutive kind '" + std::string(name) + "'");
}

ConstitutiveFunction ConstitutiveFunction::linear(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) invalid("beta must be positive");
  ConstitutiveFunction f;
  f.kind_ = ResponseKind::linear;
  f.beta_ = beta;
  f.lower_ = -kInf;
  f.upper_ = kInf;
  return f;
}

ConstitutiveFunction ConstitutiveFunction::saturating(double beta, double a) {
  if (!(beta > 0.0) || !std::isfinite(beta)) invalid("beta must be positive");
  if (!(a > 0.0) || !std::isfinite(a)) invalid("saturation exponent a must be positive");
  ConstitutiveFunction f;
  f.kind_ = ResponseKind::saturating;
  f.beta_ = beta;
  f.a_ = a;
  f.lower_ = -1.0;
  f.upper_ = 1.0;
  return f;
}

ConstitutiveFunction ConstitutiveFunction::arctan(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) invalid("beta must be positive");
  ConstitutiveFunction f;
  f.kind_ = ResponseKind::arctan;
  f.beta_ = beta;
  f.lower_ = -1.0;
  f.upper_ = 1.0;
  return f;
}

ConstitutiveFunction ConstitutiveFunction::custom(Fn value, Fn derivative, Fn antiderivative,
                                                  double lower, double upper) {
  if (!value || !derivative || !antiderivative)
    invalid("custom response needs value, derivative and antiderivative");
  if (!(lower < 0.0 && upper > 0.0)) invalid("custom response range must contain 0");
  const double v0 = value(0.0);
  if (!(std::abs(v0) <= 1e-10)) invalid("custom response must satisfy value(0) = 0");
  ConstitutiveFunction f;
  f.kind_ = ResponseKind::custom;
  f.beta_ = derivative(0.0);
  f.a_ = 0.0;
  f.lower_ = lower;
  f.upper_ = upper;
  f.value_ = std::move(value);
  f.derivative_ = std::move(derivative);
  f.antiderivative_ = std::move(antiderivative);
  return f;
}

double ConstitutiveFunction::value(double T) const {
  switch (kind_) {
    case ResponseKind::linear:
      return beta_ * T;
    case ResponseKind::saturating: {
      const double s = beta_ * std::abs(T);
      const double d = a_ == 1.0 ? 1.0 + s : 1.0 + std::pow(s, a_);
      return a_ == 1.0 ? beta_ * T / d : beta_ * T / std::pow(d, 1.0 / a_);
    }
    case ResponseKind::arctan:
      return 2.0 / std::numbers::pi * std::atan(0.5 * std::numbers::pi * beta_ * T);
    case ResponseKind::custom:
      return value_(T);
  }
  return 0.0;
}

double ConstitutiveFunction::derivative(double T) const {
  switch (kind_) {
    case ResponseKind::linear:
      return beta_;
    case ResponseKind::saturating: {
      const double s = beta_ * std::abs(T);
      if (a_ == 1.0) return beta_ / ((1.0 + s) * (1.0 + s));
      return beta_ * std::pow(1.0 + std::pow(s, a_), -1.0 / a_ - 1.0);
    }
    case ResponseKind::arctan: {
      const double b = 0.5 * std::numbers::pi * beta_ * T;
      return beta_ / (1.0 + b * b);
    }
    case ResponseKind::custom:
      return derivative_(T);
  }
  return 0.0;
}

double ConstitutiveFunction::antiderivative(double T) const {
  switch (kind_) {
    case ResponseKind::linear:
      return 0.5 * beta_ * T * T;
    case ResponseKind::saturating:
      return saturating_integral(beta_ * std::abs(T), a_) / beta_;
    case ResponseKind::arctan: {
      const double b = 0.5 * std::numbers::pi * beta_;
      return 2.0 / std::numbers::pi *
             (T * std::atan(b * T) - std::log1p(b * b * T * T) / (2.0 * b));
    }
    case ResponseKind::custom:
      return antiderivative_(T);
  }
  return 0.0;
}

bool ConstitutiveFunction::strictly_increasing_on(double lo, double hi, int samples) const {
  if (samples < 2) samples = 2;
  for (int i = 0; i < samples; ++i) {
    const double T = lo + (hi - lo) * i / (samples - 1);
    if (!(derivative(T) > 0.0)) return false;
  }
  return true;
}

ConstitutiveFunction make_constitutive(ResponseKind kind, double beta, double a) {
  switch (kind) {
    case ResponseKind::linear: return ConstitutiveFunction::linear(beta);
    case ResponseKind::saturating: return ConstitutiveFunction::saturating(beta, a);
    case ResponseKind::arctan: return ConstitutiveFunction::arctan(beta);
    case ResponseKind::custom: break;
  }
  invalid("custom responses are built with ConstitutiveFunction::custom");
}

PotentialPair PotentialPair::from_response(const ConstitutiveFunction& response, double rho) {
  if (!(rho > 0.0)) invalid("rho must be positive");
  PotentialPair p;
  p.rho = rho;
  p.phi_c = [response, rho](double T) { return response.antiderivative(T) / rho; };
  p.gibbs = [response, rho](double T) { return -response.antiderivative(T) / rho; };
  p.source = response;
  return p;
}

ConstitutiveFunction response_from_potential(const PotentialPair& p) {
  if (p.source) return *p.source;
  if (!p.phi_c) invalid("potential pair has no complementary free energy");
  if (!(p.rho > 0.0)) invalid("rho must be positive");

  const auto phi = p.phi_c;
  const double rho = p.rho;
  auto value = [phi, rho](double T) {
    const double step = std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::abs(T));
    auto one_sided_jump = [&](double d) {
      const double f0 = phi(T), fp = phi(T + d), fm = phi(T - d);
      if (!std::isfinite(f0) || !std::isfinite(fp) || !std::isfinite(fm))
        throw Error(ErrorKind::numerical_derivative_failure,
                    "potential is not finite near T = " + std::to_string(T));
      return std::pair{std::abs((fp - f0) / d - (f0 - fm) / d), (fp - fm) / (2.0 * d)};
    };
    const auto [jump, central] = one_sided_jump(step);
    const auto [jump_fine, unused] = one_sided_jump(step / 8.0);
    (void)unused;
    // Smooth potentials shrink the one-sided slope gap with the step; a kink does not.
    if (jump > 1e-6 * (1.0 + std::abs(central)) && jump_fine > 0.5 * jump)
      throw Error(ErrorKind::numerical_derivative_failure,
                  "potential is not differentiable at T = " + std::to_string(T));
    return rho * central;
  };
  auto derivative = [phi, rho](double T) {
    const double step = std::pow(std::numeric_limits<double>::epsilon(), 0.25) * std::max(1.0, std::abs(T));
    return rho * (phi(T + step) - 2.0 * phi(T) + phi(T - step)) / (step * step);
  };
  const double phi0 = phi(0.0);
  auto antiderivative = [phi, rho, phi0](double T) { return rho * (phi(T) - phi0); };
  return ConstitutiveFunction::custom(value, derivative, antiderivative);
}

double elastic_limit_gap(const PotentialPair& p, std::span<const double> stresses) {
  double gap = 0.0;
  for (double T : stresses) gap = std::max(gap, std::abs(p.phi_c(T) + p.gibbs(T)));
  return gap;
}

double compliance(const ConstitutiveFunction& h, double T) { return h.derivative(T); }

DissipationAudit audit_dissipation(double gamma, std::span<const StressSample> history) {
  const std::size_t n = history.size();
  if (n < 3) throw Error(ErrorKind::invalid_history, "dissipation audit needs at least 3 samples");
  for (std::size_t i = 1; i < n; ++i)
    if (!(history[i].t > history[i - 1].t))
      throw Error(ErrorKind::invalid_history,
                  "time stamps must be strictly increasing (sample " + std::to_string(i) + ")");

  auto f = [&](std::size_t i) { return history[i].stress; };
  auto t = [&](std::size_t i) { return history[i].t; };

  DissipationAudit audit;
  audit.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Three-point derivatives written in divided differences, so a constant
    // history gives exactly zero.
    double rate;
    if (i == 0) {
      const double h1 = t(1) - t(0), h2 = t(2) - t(1);
      const double d1 = (f(1) - f(0)) / h1, d2 = (f(2) - f(1)) / h2;
      rate = d1 - h1 * (d2 - d1) / (h1 + h2);
    } else if (i == n - 1) {
      const double h1 = t(n - 1) - t(n - 2), h2 = t(n - 2) - t(n - 3);
      const double d1 = (f(n - 1) - f(n - 2)) / h1, d2 = (f(n - 2) - f(n - 3)) / h2;
      rate = d1 + h1 * (d1 - d2) / (h1 + h2);
    } else {
      const double h1 = t(i) - t(i - 1), h2 = t(i + 1) - t(i);
      const double d1 = (f(i) - f(i - 1)) / h1, d2 = (f(i + 1) - f(i)) / h2;
      rate = (h2 * d1 + h1 * d2) / (h1 + h2);
    }
    audit.samples.push_back({t(i), f(i), rate, gamma * rate * rate});
  }

  audit.min_rate = audit.samples.front().rate;
  for (std::size_t i = 0; i < n; ++i) {
    audit.min_rate = std::min(audit.min_rate, audit.samples[i].rate);
    if (i > 0)
      audit.total_dissipation +=
          0.5 * (t(i) - t(i - 1)) * (audit.samples[i].rate + audit.samples[i - 1].rate);
  }
  audit.passed = audit.min_rate >= -1e-12;
  return audit;
}

double invert(const ConstitutiveFunction& h, double y) { return invert(h, y, 0.0); }

double invert(const ConstitutiveFunction& h, double y, double guess) {
  const auto [lower, upper] = h.range();
  if (!std::isfinite(y) || !(y > lower && y < upper))
    throw Error(ErrorKind::out_of_range,
                "value " + std::to_string(y) + " is outside the range of the response");
  const double tol = 1e-12 * std::max(1.0, std::abs(y));
  if (!std::isfinite(guess)) guess = 0.0;

  // Newton steps past the residual tolerance while they still reduce it, so
  // flat responses do not leave an amplified error in T.
  auto polish = [&](double x, double r) {
    for (int it = 0; it < 4 && r != 0.0; ++it) {
      const double slope = h.derivative(x);
      if (!(slope > 0.0)) break;
      const double nx = x - r / slope;
      const double nr = h.value(nx) - y;
      if (!(std::abs(nr) < std::abs(r))) break;
      x = nx;
      r = nr;
    }
    return x;
  };

  double x = guess;
  double r = h.value(x) - y;
  if (std::abs(r) < tol) return polish(x, r);

  // Bracket the root by stepping away from the guess with doubling steps.
  double lo, hi;
  {
    const double dir = r < 0.0 ? 1.0 : -1.0;
    double step = std::max(1.0, std::abs(y) / h.beta());
    double prev = x;
    double cur = x;
    int k = 0;
    for (;; ++k) {
      cur = prev + dir * step;
      const double rc = h.value(cur) - y;
      if (!std::isfinite(rc) || k > 2000 || std::abs(cur) > 1e300)
        throw Error(ErrorKind::out_of_range,
                    "could not bracket a preimage of " + std::to_string(y));
      if ((rc < 0.0) != (r < 0.0) || rc == 0.0) break;
      prev = cur;
      step *= 2.0;
    }
    lo = std::min(prev, cur);
    hi = std::max(prev, cur);
    x = prev;
    r = h.value(x) - y;
  }

  for (int it = 0; it < 300; ++it) {
    if (std::abs(r) < tol) return polish(x, r);
    if (r < 0.0) lo = x;
    else hi = x;
    const double slope = h.derivative(x);
    double next = slope > 0.0 ? x - r / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x)))
      return x;
    x = next;
    r = h.value(x) - y;
  }
  throw Error(ErrorKind::out_of_range, "inversion did not converge for " + std::to_string(y));
}

}  // namespace slve
