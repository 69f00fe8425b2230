#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace slve {

enum class ErrorKind {
  invalid_parameter,
  numerical_derivative_failure,
  invalid_history,
  out_of_range,
  strain_limit_exceeded,
  invalid_step,
  blow_up,
  invalid_window,
  degenerate_equilibria,
  no_real_speed,
  span_too_short,
  parse_error,
  validation_error,
  io_error,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by the time stepper when the solution stops being finite or
/// exceeds the configured magnitude ceiling.
class BlowUpError : public Error {
 public:
  BlowUpError(double t, double max_abs_stress);
  double time() const noexcept { return t_; }
  double max_abs_stress() const noexcept { return max_abs_stress_; }

 private:
  double t_;
  double max_abs_stress_;
};

/// Raised when the strain-rate solver cannot invert g at a grid node.
class StrainLimitError : public Error {
 public:
  StrainLimitError(std::size_t node, double target);
  std::size_t node() const noexcept { return node_; }
  double target() const noexcept { return target_; }

 private:
  std::size_t node_;
  double target_;
};

}  // namespace slve
