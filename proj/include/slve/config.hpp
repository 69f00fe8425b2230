#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "slve/constitutive.hpp"
#include "slve/core.hpp"
#include "slve/pde.hpp"

namespace slve {

enum class Command { simulate, dispersion, twave, audit, energy };
enum class OutputFormat { csv, json };

std::string_view to_string(Command c);
Command parse_command(std::string_view name);

/// Everything one invocation needs. Model coefficients are dimensional and
/// are converted with nondimensionalize(); grid, time and stress values are
/// already dimensionless.
struct RunConfig {
  Command command = Command::simulate;

  ModelParams model;
  ResponseKind kind = ResponseKind::linear;
  double beta = 1.0;
  double a = 1.0;

  double length = 6.283185307179586;
  int n_cells = 128;
  Boundary boundary = Boundary::periodic;
  double origin = 0.0;

  double dt = 1e-2;
  double t_final = 1.0;
  int output_stride = 10;
  double blowup_threshold = 1e10;

  InitialData initial;

  std::vector<double> k_values;

  double T_minus = 0.0;
  double T_plus = 1.0;
  double xi_min = -60.0;
  double xi_max = 60.0;
  int n_samples = 1201;

  std::filesystem::path out_dir = "out";
  OutputFormat format = OutputFormat::csv;
};

/// Parses INI-style text: `key = value` lines, `[section]` headers, `#` or
/// `;` comments. `command` may appear before the first section. Unknown
/// sections or keys are rejected with their line number.
RunConfig parse_config_unchecked(std::string_view text);

/// Checks every numeric field against the preconditions of the module the
/// command dispatches to. Throws validation_error.
void validate_config(const RunConfig& cfg);

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path, bool validate = true);

/// Dimensionless material for the configured variant and response.
MaterialModel material_model(const RunConfig& cfg);
ConstitutiveFunction response(const RunConfig& cfg);

}  // namespace slve
