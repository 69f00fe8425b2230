#include "slve/dispersion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "slve/error.hpp"

namespace slve {

namespace {

using cld = std::complex<long double>;

cld poly(LinearModel model, long double coeff, long double k, cld r) {
  const long double k2 = k * k;
  if (model == LinearModel::strain_rate) return (r + coeff * k2) * r + k2;
  return (coeff * r - 1.0L) * r * r - k2;
}

cld poly_derivative(LinearModel model, long double coeff, long double k, cld r) {
  if (model == LinearModel::strain_rate) return 2.0L * r + coeff * k * k;
  return (3.0L * coeff * r - 2.0L) * r;
}

// A few Newton iterations in extended precision; a step is kept only if it
// lowers the residual, which protects double roots where p' vanishes.
std::complex<double> polish(LinearModel model, double coeff, double k, std::complex<double> r0) {
  cld r(r0.real(), r0.imag());
  long double res = std::abs(poly(model, coeff, k, r));
  for (int it = 0; it < 4 && res > 0.0L; ++it) {
    const cld d = poly_derivative(model, coeff, k, r);
    if (std::abs(d) == 0.0L) break;
    const cld next = r - poly(model, coeff, k, r) / d;
    const long double next_res = std::abs(poly(model, coeff, k, next));
    if (!(next_res < res)) break;
    r = next;
    res = next_res;
  }
  return {static_cast<double>(r.real()), static_cast<double>(r.imag())};
}

Stability classify(const std::vector<std::complex<double>>& roots) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& r : roots) m = std::max(m, r.real());
  if (m > 0.0) return Stability::unstable;
  if (m == 0.0) return Stability::marginally_stable;
  return Stability::stable;
}

void require_k(double k) {
  if (!(k >= 0.0) || !std::isfinite(k))
    throw Error(ErrorKind::invalid_parameter, "wavenumber must be finite and nonnegative");
}

}  // namespace

std::string_view to_string(LinearModel m) {
  return m == LinearModel::stress_rate ? "stress_rate" : "strain_rate";
}

std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::marginally_stable: return "marginally_stable";
    case Stability::unstable: return "unstable";
  }
  return "unknown";
}

LinearModel parse_linear_model(std::string_view name) {
  if (name == "stress_rate") return LinearModel::stress_rate;
  if (name == "strain_rate") return LinearModel::strain_rate;
  throw Error(ErrorKind::invalid_parameter,
              "dispersion analysis needs variant stress_rate or strain_rate, got '" +
                  std::string(name) + "'");
}

double DispersionResult::max_real_part() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& r : roots) m = std::max(m, r.real());
  return m;
}

double dispersion_residual(LinearModel model, double coeff, double k, std::complex<double> r) {
  return static_cast<double>(std::abs(poly(model, coeff, k, cld(r.real(), r.imag()))));
}

DispersionResult strain_rate_dispersion(double nu, double k) {
  if (!(nu > 0.0) || !std::isfinite(nu))
    throw Error(ErrorKind::invalid_parameter, "strain-rate dispersion requires nu > 0");
  require_k(k);

  DispersionResult out;
  out.model = LinearModel::strain_rate;
  out.k = k;
  out.k_critical = 2.0 / nu;
  const double k2 = k * k;
  out.discriminant = k2 * (nu * k - 2.0) * (nu * k + 2.0);

  if (k == 0.0) {
    out.roots = {0.0, 0.0};
  } else if (out.discriminant < 0.0) {
    const double re = -0.5 * nu * k2;
    const double im = 0.5 * std::sqrt(-out.discriminant);
    const auto upper = polish(LinearModel::strain_rate, nu, k, {re, im});
    out.roots = {std::conj(upper), upper};
    out.complex_pair = true;
  } else {
    // Cancellation-free pair: the larger-magnitude root first, the other from the product.
    const double q = -0.5 * (nu * k2 + std::sqrt(out.discriminant));
    out.roots = {polish(LinearModel::strain_rate, nu, k, {q, 0.0}),
                 polish(LinearModel::strain_rate, nu, k, {k2 / q, 0.0})};
  }
  out.classification = classify(out.roots);
  return out;
}

DispersionResult stress_rate_dispersion(double gamma, double k) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw Error(ErrorKind::invalid_parameter,
                "stress-rate dispersion requires gamma > 0 (gamma = 0 is not a cubic)");
  require_k(k);

  DispersionResult out;
  out.model = LinearModel::stress_rate;
  out.k = k;
  const double k2 = k * k;
  out.discriminant = -k2 * (4.0 + 27.0 * gamma * gamma * k2);

  if (k == 0.0) {
    out.roots = {1.0 / gamma, 0.0, 0.0};
    out.positive_real_root = 1.0 / gamma;
    out.classification = Stability::unstable;
    return out;
  }

  // Companion matrix of r^3 - r^2/gamma - k^2/gamma.
  Eigen::Matrix3d companion;
  companion << 1.0 / gamma, 0.0, k2 / gamma,
               1.0, 0.0, 0.0,
               0.0, 1.0, 0.0;
  Eigen::EigenSolver<Eigen::Matrix3d> solver(companion, false);
  std::array<std::complex<double>, 3> eig;
  for (int i = 0; i < 3; ++i) eig[i] = solver.eigenvalues()[i];
  std::sort(eig.begin(), eig.end(), [](auto a, auto b) { return std::abs(a.imag()) < std::abs(b.imag()); });

  std::vector<std::complex<double>> roots;
  roots.push_back(polish(LinearModel::stress_rate, gamma, k, {eig[0].real(), 0.0}));
  const auto upper_guess = eig[1].imag() >= 0.0 ? eig[1] : eig[2];
  const auto upper = polish(LinearModel::stress_rate, gamma, k, upper_guess);
  if (std::abs(upper.imag()) >= kRealRootTolerance) {
    roots.push_back(std::conj(upper));
    roots.push_back(upper);
    out.complex_pair = true;
  } else {
    roots.push_back(polish(LinearModel::stress_rate, gamma, k, {eig[1].real(), 0.0}));
    roots.push_back(polish(LinearModel::stress_rate, gamma, k, {eig[2].real(), 0.0}));
  }
  out.roots = std::move(roots);
  if (out.complex_pair && out.roots[0].real() > 0.0) out.positive_real_root = out.roots[0].real();
  out.classification = classify(out.roots);
  return out;
}

DispersionResult dispersion(LinearModel model, double coeff, double k) {
  return model == LinearModel::strain_rate ? strain_rate_dispersion(coeff, k)
                                           : stress_rate_dispersion(coeff, k);
}

std::vector<GrowthPoint> growth_rate_curve(LinearModel model, double coeff,
                                           std::span<const double> ks, Exec exec) {
  if (!(coeff > 0.0)) throw Error(ErrorKind::invalid_parameter, "growth curve requires coeff > 0");
  for (double k : ks) require_k(k);
  std::vector<GrowthPoint> out(ks.size());
  const auto n = static_cast<std::ptrdiff_t>(ks.size());
  if (exec == Exec::serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i)
      out[i] = {ks[i], dispersion(model, coeff, ks[i]).max_real_part()};
  } else {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i)
      out[i] = {ks[i], dispersion(model, coeff, ks[i]).max_real_part()};
  }
  return out;
}

std::vector<ModeSample> evolve_single_mode(const FourierMode& mode, double coeff,
                                           double t_final, double dt) {
  if (!(coeff > 0.0)) throw Error(ErrorKind::invalid_parameter, "mode evolution requires coeff > 0");
  if (!(t_final > 0.0)) throw Error(ErrorKind::invalid_step, "t_final must be positive");
  if (!(dt > 0.0) || dt > t_final) throw Error(ErrorKind::invalid_step, "dt must lie in (0, t_final]");
  require_k(mode.k);

  using C = std::complex<double>;
  using State = std::array<C, 3>;  // a, a', a''
  const double k2 = mode.k * mode.k;
  const bool strain = mode.model == LinearModel::strain_rate;
  auto rhs = [&](const State& s) -> State {
    if (strain) return {s[1], -coeff * k2 * s[1] - k2 * s[0], 0.0};
    return {s[1], s[2], (s[2] + k2 * s[0]) / coeff};
  };
  auto add = [](const State& a, double h, const State& b) {
    return State{a[0] + h * b[0], a[1] + h * b[1], a[2] + h * b[2]};
  };

  State s{mode.amplitude, 0.0, 0.0};
  std::vector<ModeSample> out;
  const auto steps = static_cast<long>(std::ceil(t_final / dt - 1e-9));
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back({0.0, s[0]});
  for (long n = 0; n < steps; ++n) {
    const double t = n * dt;
    const double h = std::min(dt, t_final - t);
    const State k1 = rhs(s);
    const State k2s = rhs(add(s, 0.5 * h, k1));
    const State k3 = rhs(add(s, 0.5 * h, k2s));
    const State k4 = rhs(add(s, h, k3));
    for (int i = 0; i < 3; ++i) s[i] += h / 6.0 * (k1[i] + 2.0 * k2s[i] + 2.0 * k3[i] + k4[i]);
    out.push_back({n + 1 == steps ? t_final : (n + 1) * dt, s[0]});
  }
  return out;
}

}  // namespace slve
