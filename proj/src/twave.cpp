#include "slve/twave.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "slve/error.hpp"

namespace slve {

namespace {

constexpr int kScanIntervals = 10000;
constexpr double kClampDistance = 1e-10;
constexpr double kEndTolerance = 1e-6;

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Node {
  double tau, T;
};

// Integrates dT/dtau = sign * slope(T) from T0 over tau in [0, span]. Stops
// early (and snaps to `target`) once within kClampDistance of it.
template <class Rhs>
std::vector<Node> integrate(Rhs rhs, double T0, double span, double target, double h_max) {
  constexpr double rtol = 1e-13, atol = 1e-14;
  std::vector<Node> out{{0.0, T0}};
  double tau = 0.0, T = T0, h = std::min(h_max, 0.01 * h_max + 1e-3);
  double k1 = rhs(T);
  int guard = 0;
  while (tau < span) {
    if (++guard > 2000000) throw Error(ErrorKind::span_too_short, "kink integration did not finish");
    h = std::min(h, span - tau);
    const double k2 = rhs(T + h * a21 * k1);
    const double k3 = rhs(T + h * (a31 * k1 + a32 * k2));
    const double k4 = rhs(T + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const double k5 = rhs(T + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const double k6 = rhs(T + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const double Tn = T + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double k7 = rhs(Tn);
    const double err_abs = std::abs(h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7));
    const double err = err_abs / (atol + rtol * std::max(std::abs(T), std::abs(Tn)));
    if (err <= 1.0 || h < 1e-14) {
      tau += h;
      T = Tn;
      k1 = k7;
      if (std::abs(T - target) < kClampDistance) {
        out.push_back({tau, target});
        if (tau < span) out.push_back({span, target});
        return out;
      }
      out.push_back({tau, T});
    }
    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h = std::min(h * factor, h_max);
  }
  return out;
}

}  // namespace

WaveSpeed wave_speed(const ConstitutiveFunction& f, double T_minus, double T_plus) {
  if (T_minus == T_plus)
    throw Error(ErrorKind::degenerate_equilibria, "equilibria must be distinct");
  const double df = f.value(T_plus) - f.value(T_minus);
  if (df == 0.0)
    throw Error(ErrorKind::degenerate_equilibria, "response takes equal values at both equilibria");
  const double c2 = (T_plus - T_minus) / df;
  if (!(c2 > 0.0) || !std::isfinite(c2))
    throw Error(ErrorKind::no_real_speed, "jump ratio gives c^2 <= 0: no real wave speed");
  return {c2, T_minus - c2 * f.value(T_minus)};
}

KappaReduction unified_reduction_check(Variant variant, double coeff, double c) {
  double kappa = 0.0;
  switch (variant) {
    case Variant::stress_rate: kappa = coeff * c * c * c; break;
    case Variant::strain_rate: kappa = coeff * c; break;
    case Variant::elastic: kappa = 0.0; break;
  }
  return {kappa, kappa == 0.0};
}

TravelingWaveProblem TravelingWaveProblem::make(const ConstitutiveFunction& f, double T_minus,
                                                double T_plus, double kappa, double direction) {
  const WaveSpeed s = wave_speed(f, T_minus, T_plus);
  if (!(kappa != 0.0) || !std::isfinite(kappa))
    throw Error(ErrorKind::invalid_parameter, "kappa must be finite and nonzero");
  const double c = std::copysign(std::sqrt(s.c_squared), direction);
  return {f, T_minus, T_plus, kappa, c, s.A2};
}

TravelingWaveProblem TravelingWaveProblem::for_variant(const ConstitutiveFunction& f,
                                                       double T_minus, double T_plus,
                                                       Variant variant, double coeff,
                                                       double direction) {
  const WaveSpeed s = wave_speed(f, T_minus, T_plus);
  const double c = std::copysign(std::sqrt(s.c_squared), direction);
  const KappaReduction k = unified_reduction_check(variant, coeff, c);
  if (k.singular)
    throw Error(ErrorKind::invalid_parameter, "kappa = 0: traveling-wave reduction is singular");
  return {f, T_minus, T_plus, k.kappa, c, s.A2};
}

KinkExistence kink_exists(const TravelingWaveProblem& p) {
  KinkExistence out;
  const double lo = std::min(p.T_minus, p.T_plus), hi = std::max(p.T_minus, p.T_plus);
  const double scale = 1.0 + std::max(std::abs(lo), std::abs(hi));
  const double dT = (hi - lo) / kScanIntervals;

  std::vector<double> Ts(kScanIntervals - 1), G(kScanIntervals - 1);
  double max_abs = 0.0;
  for (int j = 1; j < kScanIntervals; ++j) {
    Ts[j - 1] = lo + j * dT;
    G[j - 1] = p.balance(Ts[j - 1]);
    max_abs = std::max(max_abs, std::abs(G[j - 1]));
  }
  std::ostringstream diag;
  if (max_abs <= 1e-12 * scale) {
    out.degenerate = true;
    out.diagnostic = "T - c^2 f(T) - A2 vanishes identically between the equilibria: "
                     "every state is an equilibrium, no strict heteroclinic connection";
    return out;
  }

  for (std::size_t j = 0; j < G.size(); ++j) {
    if (G[j] == 0.0) {
      out.interior_zeros.push_back(Ts[j]);
      continue;
    }
    if (j + 1 < G.size() && G[j + 1] != 0.0 && (G[j] < 0.0) != (G[j + 1] < 0.0)) {
      double a = Ts[j], b = Ts[j + 1], ga = G[j];
      while (b - a > 1e-12) {
        const double m = 0.5 * (a + b);
        const double gm = p.balance(m);
        if ((gm < 0.0) == (ga < 0.0)) {
          a = m;
          ga = gm;
        } else {
          b = m;
        }
      }
      out.interior_zeros.push_back(0.5 * (a + b));
    }
  }

  if (!out.interior_zeros.empty()) {
    diag << "interior equilibria at T =";
    for (double z : out.interior_zeros) diag << ' ' << z;
    out.diagnostic = diag.str();
    return out;
  }

  const double slope = G[G.size() / 2] / p.kappa;
  out.exists = true;
  out.orientation = slope > 0.0 ? KinkOrientation::increasing : KinkOrientation::decreasing;
  const double from = slope > 0.0 ? lo : hi, to = slope > 0.0 ? hi : lo;
  diag << "connection from T = " << from << " at xi -> -inf to T = " << to << " at xi -> +inf ("
       << (slope > 0.0 ? "increasing" : "decreasing") << " in xi)";
  out.diagnostic = diag.str();
  return out;
}

KinkProfile kink_profile(const TravelingWaveProblem& p, double xi_min, double xi_max,
                         int n_samples, double center) {
  if (!(xi_min < center && center < xi_max))
    throw Error(ErrorKind::invalid_parameter, "need xi_min < center < xi_max");
  if (n_samples < 2) throw Error(ErrorKind::invalid_parameter, "need at least 2 samples");
  const KinkExistence ex = kink_exists(p);
  if (!ex.exists)
    throw Error(ErrorKind::invalid_parameter, "no heteroclinic connection: " + ex.diagnostic);

  const double lo = std::min(p.T_minus, p.T_plus), hi = std::max(p.T_minus, p.T_plus);
  const bool increasing = ex.orientation == KinkOrientation::increasing;
  const double right_eq = increasing ? hi : lo;
  const double left_eq = increasing ? lo : hi;
  const double mid = 0.5 * (p.T_minus + p.T_plus);
  const double h_max = 0.05 * std::abs(p.kappa);

  auto fwd = [&](double T) { return p.slope(T); };
  auto bwd = [&](double T) { return -p.slope(T); };
  const auto right = integrate(fwd, mid, xi_max - center, right_eq, h_max);
  const auto left = integrate(bwd, mid, center - xi_min, left_eq, h_max);

  auto end_check = [&](double got, double want, const char* side) {
    if (std::abs(got - want) > kEndTolerance)
      throw Error(ErrorKind::span_too_short,
                  std::string("profile has not reached the equilibrium at the ") + side +
                      " end (distance " + std::to_string(std::abs(got - want)) + ")");
  };
  end_check(right.back().T, right_eq, "right");
  end_check(left.back().T, left_eq, "left");

  KinkProfile prof(p);
  prof.center_ = center;
  auto make_node = [&](double xi, double T, bool clamped) {
    if (clamped) return KinkProfile::Node{xi, T, 0.0, 0.0};
    const double d1 = p.slope(T);
    const double d2 = (1.0 - p.c * p.c * p.f.derivative(T)) / p.kappa * d1;
    return KinkProfile::Node{xi, T, d1, d2};
  };
  auto is_clamped = [](const std::vector<Node>& path, std::size_t i, double eq) {
    return path[i].T == eq && i > 0;
  };
  for (std::size_t i = left.size(); i-- > 1;)
    prof.nodes_.push_back(make_node(center - left[i].tau, left[i].T, is_clamped(left, i, left_eq)));
  for (std::size_t i = 0; i < right.size(); ++i)
    prof.nodes_.push_back(make_node(center + right[i].tau, right[i].T, is_clamped(right, i, right_eq)));

  prof.xi_.resize(static_cast<std::size_t>(n_samples));
  prof.T_.resize(static_cast<std::size_t>(n_samples));
  for (int j = 0; j < n_samples; ++j) {
    const double xi = j == n_samples - 1 ? xi_max : xi_min + (xi_max - xi_min) * j / (n_samples - 1);
    prof.xi_[j] = xi;
    prof.T_[j] = prof.at(xi);
  }
  return prof;
}

const KinkProfile::Node* KinkProfile::segment(double xi) const {
  if (xi <= nodes_.front().xi || xi >= nodes_.back().xi) return nullptr;
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), xi,
                             [](double x, const Node& n) { return x < n.xi; });
  return &*(it - 1);
}

// Quintic Hermite interpolation on the step [n0, n1] from value, first and
// second derivative at both ends.
double KinkProfile::at(double xi) const {
  const Node* n0 = segment(xi);
  if (!n0) return xi <= nodes_.front().xi ? nodes_.front().T : nodes_.back().T;
  const Node* n1 = n0 + 1;
  const double h = n1->xi - n0->xi, s = (xi - n0->xi) / h;
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  const double H0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
  const double H1 = s - 6 * s3 + 8 * s4 - 3 * s5;
  const double H2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
  const double H3 = 0.5 * s3 - s4 + 0.5 * s5;
  const double H4 = -4 * s3 + 7 * s4 - 3 * s5;
  const double H5 = 10 * s3 - 15 * s4 + 6 * s5;
  return n0->T * H0 + h * n0->d1 * H1 + h * h * n0->d2 * H2 + h * h * n1->d2 * H3 +
         h * n1->d1 * H4 + n1->T * H5;
}

double KinkProfile::derivative(double xi) const {
  const Node* n0 = segment(xi);
  if (!n0) return 0.0;
  const Node* n1 = n0 + 1;
  const double h = n1->xi - n0->xi, s = (xi - n0->xi) / h;
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s;
  const double H0 = -30 * s2 + 60 * s3 - 30 * s4;
  const double H1 = 1 - 18 * s2 + 32 * s3 - 15 * s4;
  const double H2 = s - 4.5 * s2 + 6 * s3 - 2.5 * s4;
  const double H3 = 1.5 * s2 - 4 * s3 + 2.5 * s4;
  const double H4 = -12 * s2 + 28 * s3 - 15 * s4;
  const double H5 = 30 * s2 - 60 * s3 + 30 * s4;
  return (n0->T * H0 + n1->T * H5) / h + n0->d1 * H1 + n1->d1 * H4 +
         h * (n0->d2 * H2 + n1->d2 * H3);
}

double KinkProfile::second_derivative(double xi) const {
  const Node* n0 = segment(xi);
  if (!n0) return 0.0;
  const Node* n1 = n0 + 1;
  const double h = n1->xi - n0->xi, s = (xi - n0->xi) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double H0 = -60 * s + 180 * s2 - 120 * s3;
  const double H1 = -36 * s + 96 * s2 - 60 * s3;
  const double H2 = 1 - 9 * s + 18 * s2 - 10 * s3;
  const double H3 = 3 * s - 12 * s2 + 10 * s3;
  const double H4 = -24 * s + 84 * s2 - 60 * s3;
  const double H5 = 60 * s - 180 * s2 + 120 * s3;
  return (n0->T * H0 + n1->T * H5) / (h * h) + (n0->d1 * H1 + n1->d1 * H4) / h + n0->d2 * H2 +
         n1->d2 * H3;
}

double KinkProfile::max_first_order_residual() const {
  double r = 0.0;
  for (double xi : xi_)
    r = std::max(r, std::abs(problem_.kappa * derivative(xi) - problem_.balance(at(xi))));
  return r;
}

double KinkProfile::max_second_order_residual() const {
  const double c2 = problem_.c * problem_.c;
  double r = 0.0;
  for (double xi : xi_) {
    const double d1 = derivative(xi);
    r = std::max(r, std::abs(d1 - problem_.kappa * second_derivative(xi) -
                             c2 * problem_.f.derivative(at(xi)) * d1));
  }
  return r;
}

double rescaled_profile_gap(const KinkProfile& a, const KinkProfile& b) {
  const double ratio = b.problem().kappa / a.problem().kappa;
  double gap = 0.0;
  for (std::size_t j = 0; j < a.xi().size(); ++j) {
    const double xi = a.xi()[j];
    gap = std::max(gap, std::abs(a.stress()[j] - b.at(b.center() + (xi - a.center()) * ratio)));
  }
  return gap;
}

SimState kink_state(const KinkProfile& profile, const Grid1D& grid, const MaterialModel& m,
                    double t) {
  if (m.rho != 1.0)
    throw Error(ErrorKind::invalid_parameter, "traveling-wave states are built for rho = 1");
  const auto& p = profile.problem();
  const double downstream = p.c > 0.0 ? profile.stress().back() : profile.stress().front();
  SimState s{t, Field(grid), Field(grid), Field(grid)};
  for (std::size_t i = 0; i < s.v.size(); ++i) {
    const double T = profile.at(grid.x(i) - p.c * t);
    s.stress[i] = T;
    s.eps[i] = (T - p.A2) / (p.c * p.c);
    s.v[i] = -(T - downstream) / p.c;
  }
  return s;
}

}  // namespace slve
