#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "slve/config.hpp"

namespace slve {

/// Process exit statuses of the command-line tool.
enum ExitCode : int {
  exit_ok = 0,
  exit_error = 1,
  exit_config = 2,
  exit_blow_up = 3,
};

struct RunOutcome {
  int exit_code = exit_ok;
  /// "ok", "blow_up" or "error"
  std::string status = "ok";
  std::string error_kind;
  std::string message;
  double blow_up_time = 0.0;
  double blow_up_max_stress = 0.0;
  std::vector<std::filesystem::path> files;
  /// One-line JSON status record (also written to status.json).
  std::string record;
};

/// Dispatches to the module behind cfg.command and writes its output files
/// plus status.json into cfg.out_dir. Never throws for module errors; they
/// become a nonzero exit code and an error record.
RunOutcome run(const RunConfig& cfg);

/// printf("%.17g"), which round-trips every double.
std::string format_number(double x);

}  // namespace slve
