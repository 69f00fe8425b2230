// Reference implementations: one node at a time, neighbours found by index
// arithmetic. Kept deliberately plain; the OpenMP versions are checked
// against these.

#include <cstddef>

#include "slve/error.hpp"
#include "slve/kernels.hpp"

namespace slve::kernels::serial {

namespace {

double d1_at(std::span<const double> f, std::size_t i, double h, bool periodic) {
  const std::size_t n = f.size();
  if (periodic) return (f[(i + 1) % n] - f[(i + n - 1) % n]) / (2.0 * h);
  if (i == 0) return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  if (i == n - 1) return (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  return (f[i + 1] - f[i - 1]) / (2.0 * h);
}

double d2_at(std::span<const double> f, std::size_t i, double h, bool periodic) {
  const std::size_t n = f.size();
  if (periodic) return (f[(i + 1) % n] - 2.0 * f[i] + f[(i + n - 1) % n]) / (h * h);
  if (i == 0) return (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / (h * h);
  if (i == n - 1) return (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / (h * h);
  return (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (h * h);
}

}  // namespace

void first_derivative(std::span<const double> f, double h, bool periodic,
                      std::span<double> out) {
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = d1_at(f, i, h, periodic);
}

void second_derivative(std::span<const double> f, double h, bool periodic,
                       std::span<double> out) {
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = d2_at(f, i, h, periodic);
}

void stress_rate_rhs(std::span<const double> v, std::span<const double> eps,
                     std::span<const double> T, const ConstitutiveFunction& h,
                     const RhsParams& p, std::span<double> dv,
                     std::span<double> deps, std::span<double> dT) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    dv[i] = d1_at(T, i, p.spacing, p.periodic) / p.rho;
    deps[i] = d1_at(v, i, p.spacing, p.periodic);
    dT[i] = (h.value(T[i]) - eps[i]) / p.coeff;
  }
}

void reconstruct_stress(std::span<const double> v, std::span<const double> eps,
                        const ConstitutiveFunction& g, const RhsParams& p,
                        std::span<double> T) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double target = eps[i] + p.coeff * d1_at(v, i, p.spacing, p.periodic);
    try {
      T[i] = invert(g, target, T[i]);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::out_of_range) throw StrainLimitError(i, target);
      throw;
    }
  }
}

void strain_rate_rhs(std::span<const double> v, std::span<const double> eps,
                     std::span<const double> T, const ConstitutiveFunction& g,
                     const RhsParams& p, std::span<double> dv,
                     std::span<double> deps) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    dv[i] = d1_at(T, i, p.spacing, p.periodic) / p.rho;
    deps[i] = p.coeff > 0.0 ? (g.value(T[i]) - eps[i]) / p.coeff
                            : d1_at(v, i, p.spacing, p.periodic);
  }
}

void axpy(std::span<const double> y, double a, std::span<const double> x,
          std::span<double> out) {
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + a * x[i];
}

void rk4_combine(std::span<double> y, double dt, std::span<const double> k1,
                 std::span<const double> k2, std::span<const double> k3,
                 std::span<const double> k4) {
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace slve::kernels::serial
