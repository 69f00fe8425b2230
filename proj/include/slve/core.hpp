#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace slve {

enum class Boundary {
  periodic,
  dirichlet_zero,
  /// End nodes held at whatever values they start with.
  clamped,
};

enum class Variant { stress_rate, strain_rate, elastic };

/// Execution policy for the grid kernels.
enum class Exec { serial, parallel };

std::string_view to_string(Boundary b);
std::string_view to_string(Variant v);
Boundary parse_boundary(std::string_view name);
Variant parse_variant(std::string_view name);

/// Uniform 1D grid. Periodic grids have n_cells nodes at origin + i*spacing;
/// the other boundaries have n_cells + 1 nodes including both ends.
class Grid1D {
 public:
  Grid1D(double length, int n_cells, Boundary boundary = Boundary::periodic,
         double origin = 0.0);

  double length() const noexcept { return length_; }
  int n_cells() const noexcept { return n_cells_; }
  double spacing() const noexcept { return spacing_; }
  Boundary boundary() const noexcept { return boundary_; }
  double origin() const noexcept { return origin_; }
  bool periodic() const noexcept { return boundary_ == Boundary::periodic; }

  std::size_t node_count() const noexcept {
    return periodic() ? static_cast<std::size_t>(n_cells_)
                      : static_cast<std::size_t>(n_cells_) + 1;
  }
  double x(std::size_t i) const noexcept {
    return origin_ + static_cast<double>(i) * spacing_;
  }

  friend bool operator==(const Grid1D&, const Grid1D&) = default;

 private:
  double length_;
  int n_cells_;
  double spacing_;
  Boundary boundary_;
  double origin_;
};

/// Nodal values on a grid. The grid is stored by value; it is five scalars.
class Field {
 public:
  explicit Field(const Grid1D& grid);
  Field(const Grid1D& grid, std::vector<double> values);
  static Field sample(const Grid1D& grid, const std::function<double(double)>& f);

  const Grid1D& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  bool all_finite() const noexcept;
  double max_abs() const noexcept;

 private:
  Grid1D grid_;
  std::vector<double> values_;
};

struct ModelParams {
  double rho = 1.0;
  double mu = 1.0;
  double length_scale = 1.0;
  double nu = 0.0;
  double gamma = 0.0;
  Variant variant = Variant::elastic;

  /// Throws invalid_parameter naming the violated condition.
  void validate() const;
};

struct NondimScales {
  double x_scale;       ///< L
  double t_scale;       ///< L sqrt(rho/mu)
  double stress_scale;  ///< mu
  double nu_bar;
  double gamma_bar;
};

NondimScales nondimensionalize(const ModelParams& params);

/// Inverse map of the viscous coefficients: dimensional (nu, gamma) from
/// the dimensionless ones and the scales.
double dimensional_nu(const NondimScales& s);
double dimensional_gamma(const NondimScales& s);

/// Trapezoidal rule; on periodic grids this is the plain uniform sum.
double integrate_field(const Field& f);

/// Second-order central differences, one-sided second-order at non-periodic ends.
Field spatial_derivative(const Field& f, int order, Exec exec = Exec::parallel);

}  // namespace slve
