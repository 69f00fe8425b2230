#pragma once

// Grid kernels used by the time stepper. Each kernel exists twice: a plain
// serial reference in slve::kernels::serial and an OpenMP version in
// slve::kernels::omp. The two must agree bit for bit; the unit tests and the
// benchmark target compare them.

#include <span>

#include "slve/constitutive.hpp"

namespace slve::kernels {

/// Everything a right-hand-side kernel needs besides the fields.
struct RhsParams {
  double spacing;
  bool periodic;
  double rho;
  double coeff;  ///< gamma (stress-rate) or nu (strain-rate)
};

namespace serial {

void first_derivative(std::span<const double> f, double h, bool periodic,
                      std::span<double> out);
void second_derivative(std::span<const double> f, double h, bool periodic,
                       std::span<double> out);

/// v_t = T_x/rho, eps_t = v_x, T_t = (h(T) - eps)/gamma.
void stress_rate_rhs(std::span<const double> v, std::span<const double> eps,
                     std::span<const double> T, const ConstitutiveFunction& h,
                     const RhsParams& p, std::span<double> dv,
                     std::span<double> deps, std::span<double> dT);

/// T = g^{-1}(eps + nu*v_x) node by node; `T` holds the Newton guesses on
/// entry. Throws StrainLimitError for the first node that cannot be inverted.
void reconstruct_stress(std::span<const double> v, std::span<const double> eps,
                        const ConstitutiveFunction& g, const RhsParams& p,
                        std::span<double> T);

/// v_t = T_x/rho, eps_t = (g(T) - eps)/nu; with nu = 0 (elastic) eps_t = v_x.
void strain_rate_rhs(std::span<const double> v, std::span<const double> eps,
                     std::span<const double> T, const ConstitutiveFunction& g,
                     const RhsParams& p, std::span<double> dv,
                     std::span<double> deps);

/// out = y + a*x
void axpy(std::span<const double> y, double a, std::span<const double> x,
          std::span<double> out);

/// y += dt/6 * (k1 + 2 k2 + 2 k3 + k4)
void rk4_combine(std::span<double> y, double dt, std::span<const double> k1,
                 std::span<const double> k2, std::span<const double> k3,
                 std::span<const double> k4);

}  // namespace serial

namespace omp {

void first_derivative(std::span<const double> f, double h, bool periodic,
                      std::span<double> out);
void second_derivative(std::span<const double> f, double h, bool periodic,
                       std::span<double> out);
void stress_rate_rhs(std::span<const double> v, std::span<const double> eps,
                     std::span<const double> T, const ConstitutiveFunction& h,
                     const RhsParams& p, std::span<double> dv,
                     std::span<double> deps, std::span<double> dT);
void reconstruct_stress(std::span<const double> v, std::span<const double> eps,
                        const ConstitutiveFunction& g, const RhsParams& p,
                        std::span<double> T);
void strain_rate_rhs(std::span<const double> v, std::span<const double> eps,
                     std::span<const double> T, const ConstitutiveFunction& g,
                     const RhsParams& p, std::span<double> dv,
                     std::span<double> deps);
void axpy(std::span<const double> y, double a, std::span<const double> x,
          std::span<double> out);
void rk4_combine(std::span<double> y, double dt, std::span<const double> k1,
                 std::span<const double> k2, std::span<const double> k3,
                 std::span<const double> k4);

}  // namespace omp

}  // namespace slve::kernels
