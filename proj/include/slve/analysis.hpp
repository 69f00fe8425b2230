#pragma once

#include <complex>
#include <span>

#include "slve/core.hpp"

namespace slve {

/// Complex Fourier coefficient (2/L) * integral of f(x) exp(-i k x) dx, so a
/// field A cos(kx) on a periodic box returns A.
std::complex<double> mode_amplitude(const Field& f, double k);

/// Least-squares slope of log|y| against t over samples with t in [t0, t1].
double fit_log_slope(std::span<const double> t, std::span<const double> y, double t0, double t1);

/// Exponential rate of the envelope of an oscillating signal: local maxima of
/// |y| are located by parabolic refinement and log-linearly fitted. Needs at
/// least two interior maxima.
double fit_envelope_rate(std::span<const double> t, std::span<const double> y);

}  // namespace slve
