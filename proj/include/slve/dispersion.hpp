#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "slve/core.hpp"

namespace slve {

/// Linearized models with unit small-stress slope h'(0) = g'(0) = 1.
///   strain_rate: r^2 + nu k^2 r + k^2 = 0
///   stress_rate: gamma r^3 - r^2 - k^2 = 0
enum class LinearModel { stress_rate, strain_rate };

enum class Stability { stable, marginally_stable, unstable };

std::string_view to_string(LinearModel m);
std::string_view to_string(Stability s);
LinearModel parse_linear_model(std::string_view name);

struct FourierMode {
  double k = 1.0;
  std::complex<double> amplitude = 1.0;
  LinearModel model = LinearModel::strain_rate;
};

struct DispersionResult {
  LinearModel model;
  double k = 0.0;
  std::vector<std::complex<double>> roots;
  Stability classification = Stability::stable;
  /// Two of the roots form a complex-conjugate pair.
  bool complex_pair = false;
  /// Strain-rate only: 2/nu.
  std::optional<double> k_critical;
  /// Strain-rate: k^2 (nu^2 k^2 - 4). Stress-rate: -k^2 (4 + 27 gamma^2 k^2).
  double discriminant = 0.0;
  /// Stress-rate only: the real root.
  std::optional<double> positive_real_root;

  double max_real_part() const;
};

/// Imaginary parts below this are treated as real roots.
inline constexpr double kRealRootTolerance = 1e-12;

DispersionResult strain_rate_dispersion(double nu, double k);
DispersionResult stress_rate_dispersion(double gamma, double k);
DispersionResult dispersion(LinearModel model, double coeff, double k);

/// |p(r)| for the model polynomial, evaluated in extended precision.
double dispersion_residual(LinearModel model, double coeff, double k, std::complex<double> r);

struct GrowthPoint {
  double k;
  double max_real_part;
};

/// Maximum real part of the roots for each k. The parallel path fans out
/// over k and writes results by index, so output order is that of `ks`.
std::vector<GrowthPoint> growth_rate_curve(LinearModel model, double coeff,
                                           std::span<const double> ks,
                                           Exec exec = Exec::parallel);

struct ModeSample {
  double t;
  std::complex<double> amplitude;
};

/// Integrates the single-mode ODE (strain-rate: a'' + nu k^2 a' + k^2 a = 0,
/// stress-rate: gamma a''' - a'' - k^2 a = 0) with classical RK4 from
/// a(0) = amplitude and zero higher derivatives.
std::vector<ModeSample> evolve_single_mode(const FourierMode& mode, double coeff,
                                           double t_final, double dt);

}  // namespace slve
