#include "slve/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slve/error.hpp"
#include "slve/kernels.hpp"

namespace slve {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_parameter: return "invalid_parameter";
    case ErrorKind::numerical_derivative_failure: return "numerical_derivative_failure";
    case ErrorKind::invalid_history: return "invalid_history";
    case ErrorKind::out_of_range: return "out_of_range";
    case ErrorKind::strain_limit_exceeded: return "strain_limit_exceeded";
    case ErrorKind::invalid_step: return "invalid_step";
    case ErrorKind::blow_up: return "blow_up";
    case ErrorKind::invalid_window: return "invalid_window";
    case ErrorKind::degenerate_equilibria: return "degenerate_equilibria";
    case ErrorKind::no_real_speed: return "no_real_speed";
    case ErrorKind::span_too_short: return "span_too_short";
    case ErrorKind::parse_error: return "parse_error";
    case ErrorKind::validation_error: return "validation_error";
    case ErrorKind::io_error: return "io_error";
  }
  return "unknown";
}

BlowUpError::BlowUpError(double t, double max_abs_stress)
    : Error(ErrorKind::blow_up, "solution blew up at t = " + std::to_string(t) +
                                    " (max |T| = " + std::to_string(max_abs_stress) + ")"),
      t_(t),
      max_abs_stress_(max_abs_stress) {}

StrainLimitError::StrainLimitError(std::size_t node, double target)
    : Error(ErrorKind::strain_limit_exceeded,
            "strain limit exceeded at node " + std::to_string(node) +
                ": g(T) = " + std::to_string(target) + " is outside the range of g"),
      node_(node),
      target_(target) {}

std::string_view to_string(Boundary b) {
  switch (b) {
    case Boundary::periodic: return "periodic";
    case Boundary::dirichlet_zero: return "dirichlet_zero";
    case Boundary::clamped: return "clamped";
  }
  return "unknown";
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::stress_rate: return "stress_rate";
    case Variant::strain_rate: return "strain_rate";
    case Variant::elastic: return "elastic";
  }
  return "unknown";
}

Boundary parse_boundary(std::string_view name) {
  if (name == "periodic") return Boundary::periodic;
  if (name == "dirichlet_zero") return Boundary::dirichlet_zero;
  if (name == "clamped") return Boundary::clamped;
  throw Error(ErrorKind::invalid_parameter, "unknown boundary '" + std::string(name) + "'");
}

Variant parse_variant(std::string_view name) {
  if (name == "stress_rate") return Variant::stress_rate;
  if (name == "strain_rate") return Variant::strain_rate;
  if (name == "elastic") return Variant::elastic;
  throw Error(ErrorKind::invalid_parameter, "unknown variant '" + std::string(name) + "'");
}

Grid1D::Grid1D(double length, int n_cells, Boundary boundary, double origin)
    : length_(length), n_cells_(n_cells), spacing_(0.0), boundary_(boundary), origin_(origin) {
  if (!(length > 0.0) || !std::isfinite(length))
    throw Error(ErrorKind::invalid_parameter, "grid length must be positive");
  if (n_cells < 4)
    throw Error(ErrorKind::invalid_parameter, "grid needs at least 4 cells");
  if (!std::isfinite(origin))
    throw Error(ErrorKind::invalid_parameter, "grid origin must be finite");
  spacing_ = length / n_cells;
}

Field::Field(const Grid1D& grid) : grid_(grid), values_(grid.node_count(), 0.0) {}

Field::Field(const Grid1D& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.node_count())
    throw Error(ErrorKind::invalid_parameter, "field size does not match grid node count");
  if (!all_finite()) throw Error(ErrorKind::invalid_parameter, "field values must be finite");
}

Field Field::sample(const Grid1D& grid, const std::function<double(double)>& f) {
  Field out(grid);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(grid.x(i));
  return out;
}

bool Field::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

double Field::max_abs() const noexcept {
  double m = 0.0;
  for (double x : values_) m = std::max(m, std::abs(x));
  return m;
}

void ModelParams::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::invalid_parameter, msg); };
  if (!(rho > 0.0)) fail("rho must be positive");
  if (!(mu > 0.0)) fail("mu must be positive");
  if (!(length_scale > 0.0)) fail("length_scale must be positive");
  if (!(nu >= 0.0)) fail("nu must be nonnegative");
  if (!(gamma >= 0.0))
    fail("gamma must be nonnegative: gamma >= 0 is necessary and sufficient for "
         "the dissipation inequality A_d * dT/dt >= 0");
  switch (variant) {
    case Variant::stress_rate:
      if (!(gamma > 0.0)) fail("stress_rate variant requires gamma > 0");
      break;
    case Variant::strain_rate:
      if (!(nu > 0.0)) fail("strain_rate variant requires nu > 0");
      break;
    case Variant::elastic:
      if (gamma != 0.0 || nu != 0.0) fail("elastic variant requires gamma = nu = 0");
      break;
  }
}

NondimScales nondimensionalize(const ModelParams& params) {
  params.validate();
  const double root = std::sqrt(params.mu / params.rho);
  NondimScales s{};
  s.x_scale = params.length_scale;
  s.t_scale = params.length_scale * std::sqrt(params.rho / params.mu);
  s.stress_scale = params.mu;
  s.nu_bar = params.nu / params.length_scale * root;
  s.gamma_bar = params.gamma * params.mu / params.length_scale * root;
  return s;
}

// nu_bar = nu / t_scale, gamma_bar = gamma * mu / t_scale.
double dimensional_nu(const NondimScales& s) { return s.nu_bar * s.t_scale; }
double dimensional_gamma(const NondimScales& s) {
  return s.gamma_bar * s.t_scale / s.stress_scale;
}

double integrate_field(const Field& f) {
  const auto v = f.values();
  const double h = f.grid().spacing();
  double sum = 0.0;
  for (double x : v) sum += x;
  if (!f.grid().periodic()) sum -= 0.5 * (v.front() + v.back());
  return sum * h;
}

Field spatial_derivative(const Field& f, int order, Exec exec) {
  if (order != 1 && order != 2)
    throw Error(ErrorKind::invalid_parameter, "derivative order must be 1 or 2");
  Field out(f.grid());
  const double h = f.grid().spacing();
  const bool periodic = f.grid().periodic();
  if (exec == Exec::serial) {
    if (order == 1) kernels::serial::first_derivative(f.values(), h, periodic, out.values());
    else kernels::serial::second_derivative(f.values(), h, periodic, out.values());
  } else {
    if (order == 1) kernels::omp::first_derivative(f.values(), h, periodic, out.values());
    else kernels::omp::second_derivative(f.values(), h, periodic, out.values());
  }
  return out;
}

}  // namespace slve
