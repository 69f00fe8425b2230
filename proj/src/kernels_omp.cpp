// OpenMP kernels. Interior nodes run in a parallel loop without index
// wrapping; the two boundary nodes are handled outside the loop. Arithmetic
// matches the serial reference expression for expression.

#include <algorithm>
#include <cstddef>
#include <limits>

#include "slve/error.hpp"
#include "slve/kernels.hpp"

namespace slve::kernels::omp {

namespace {

using Index = std::ptrdiff_t;

// Value of f' at the two end nodes.
double d1_left(std::span<const double> f, double h, bool periodic) {
  const std::size_t n = f.size();
  return periodic ? (f[1] - f[n - 1]) / (2.0 * h)
                  : (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
}

double d1_right(std::span<const double> f, double h, bool periodic) {
  const std::size_t n = f.size();
  return periodic ? (f[0] - f[n - 2]) / (2.0 * h)
                  : (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
}

}  // namespace

void first_derivative(std::span<const double> f, double h, bool periodic,
                      std::span<double> out) {
  const Index n = static_cast<Index>(f.size());
  const double* in = f.data();
  double* o = out.data();
#pragma omp parallel for schedule(static)
  for (Index i = 1; i < n - 1; ++i) o[i] = (in[i + 1] - in[i - 1]) / (2.0 * h);
  out[0] = d1_left(f, h, periodic);
  out[n - 1] = d1_right(f, h, periodic);
}

void second_derivative(std::span<const double> f, double h, bool periodic,
                       std::span<double> out) {
  const Index n = static_cast<Index>(f.size());
  const double* in = f.data();
  double* o = out.data();
#pragma omp parallel for schedule(static)
  for (Index i = 1; i < n - 1; ++i) o[i] = (in[i + 1] - 2.0 * in[i] + in[i - 1]) / (h * h);
  if (periodic) {
    o[0] = (in[1] - 2.0 * in[0] + in[n - 1]) / (h * h);
    o[n - 1] = (in[0] - 2.0 * in[n - 1] + in[n - 2]) / (h * h);
  } else {
    o[0] = (2.0 * in[0] - 5.0 * in[1] + 4.0 * in[2] - in[3]) / (h * h);
    o[n - 1] = (2.0 * in[n - 1] - 5.0 * in[n - 2] + 4.0 * in[n - 3] - in[n - 4]) / (h * h);
  }
}

void stress_rate_rhs(std::span<const double> v, std::span<const double> eps,
                     std::span<const double> T, const ConstitutiveFunction& h,
                     const RhsParams& p, std::span<double> dv,
                     std::span<double> deps, std::span<double> dT) {
  const Index n = static_cast<Index>(v.size());
  const double dx = p.spacing;
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    if (i > 0 && i < n - 1) {
      dv[i] = (T[i + 1] - T[i - 1]) / (2.0 * dx) / p.rho;
      deps[i] = (v[i + 1] - v[i - 1]) / (2.0 * dx);
    }
    dT[i] = (h.value(T[i]) - eps[i]) / p.coeff;
  }
  dv[0] = d1_left(T, dx, p.periodic) / p.rho;
  dv[n - 1] = d1_right(T, dx, p.periodic) / p.rho;
  deps[0] = d1_left(v, dx, p.periodic);
  deps[n - 1] = d1_right(v, dx, p.periodic);
}

void reconstruct_stress(std::span<const double> v, std::span<const double> eps,
                        const ConstitutiveFunction& g, const RhsParams& p,
                        std::span<double> T) {
  const Index n = static_cast<Index>(v.size());
  const double dx = p.spacing;
  // Exceptions cannot leave a parallel region; remember the first bad node.
  Index bad = n;
#pragma omp parallel for schedule(static) reduction(min : bad)
  for (Index i = 0; i < n; ++i) {
    double vx;
    if (i == 0) vx = d1_left(v, dx, p.periodic);
    else if (i == n - 1) vx = d1_right(v, dx, p.periodic);
    else vx = (v[i + 1] - v[i - 1]) / (2.0 * dx);
    const double target = eps[i] + p.coeff * vx;
    try {
      T[i] = invert(g, target, T[i]);
    } catch (const Error&) {
      bad = std::min(bad, i);
    }
  }
  if (bad < n) {
    // Re-run the failing node serially to surface the precise error.
    const auto i = static_cast<std::size_t>(bad);
    double vx;
    if (bad == 0) vx = d1_left(v, dx, p.periodic);
    else if (bad == n - 1) vx = d1_right(v, dx, p.periodic);
    else vx = (v[i + 1] - v[i - 1]) / (2.0 * dx);
    const double target = eps[i] + p.coeff * vx;
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
  const Index n = static_cast<Index>(v.size());
  const double dx = p.spacing;
  const bool viscous = p.coeff > 0.0;
#pragma omp parallel for schedule(static)
  for (Index i = 1; i < n - 1; ++i) {
    dv[i] = (T[i + 1] - T[i - 1]) / (2.0 * dx) / p.rho;
    deps[i] = viscous ? (g.value(T[i]) - eps[i]) / p.coeff : (v[i + 1] - v[i - 1]) / (2.0 * dx);
  }
  dv[0] = d1_left(T, dx, p.periodic) / p.rho;
  dv[n - 1] = d1_right(T, dx, p.periodic) / p.rho;
  deps[0] = viscous ? (g.value(T[0]) - eps[0]) / p.coeff : d1_left(v, dx, p.periodic);
  deps[n - 1] = viscous ? (g.value(T[n - 1]) - eps[n - 1]) / p.coeff : d1_right(v, dx, p.periodic);
}

void axpy(std::span<const double> y, double a, std::span<const double> x,
          std::span<double> out) {
  const Index n = static_cast<Index>(y.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) out[i] = y[i] + a * x[i];
}

void rk4_combine(std::span<double> y, double dt, std::span<const double> k1,
                 std::span<const double> k2, std::span<const double> k3,
                 std::span<const double> k4) {
  const Index n = static_cast<Index>(y.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i)
    y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace slve::kernels::omp
