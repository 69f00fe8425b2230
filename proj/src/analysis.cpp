#include "slve/analysis.hpp"

#include <cmath>
#include <vector>

#include "slve/error.hpp"

namespace slve {

namespace {

double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

std::complex<double> mode_amplitude(const Field& f, double k) {
  const Grid1D& g = f.grid();
  std::complex<double> sum = 0.0;
  const std::size_t n = f.size();
  for (std::size_t i = 0; i < n; ++i) {
    double w = 1.0;
    if (!g.periodic() && (i == 0 || i == n - 1)) w = 0.5;
    sum += w * f[i] * std::exp(std::complex<double>(0.0, -k * g.x(i)));
  }
  return 2.0 * sum * g.spacing() / g.length();
}

double fit_log_slope(std::span<const double> t, std::span<const double> y, double t0, double t1) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t0 || t[i] > t1) continue;
    if (!(std::abs(y[i]) > 0.0)) continue;
    xs.push_back(t[i]);
    ys.push_back(std::log(std::abs(y[i])));
  }
  if (xs.size() < 2) throw Error(ErrorKind::invalid_window, "not enough samples to fit a slope");
  return regression_slope(xs, ys);
}

double fit_envelope_rate(std::span<const double> t, std::span<const double> y) {
  std::vector<double> tp, lp;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    const double a = std::abs(y[i - 1]), b = std::abs(y[i]), c = std::abs(y[i + 1]);
    if (!(b > a && b >= c)) continue;
    // Parabola through the three samples (uniform spacing assumed locally).
    const double h = t[i + 1] - t[i];
    const double la = std::log(a), lb = std::log(b), lc = std::log(c);
    const double denom = la - 2.0 * lb + lc;
    double off = 0.0, peak = lb;
    if (denom < 0.0) {
      off = 0.5 * (la - lc) / denom;
      peak = lb - 0.25 * (la - lc) * off;
    }
    tp.push_back(t[i] + off * h);
    lp.push_back(peak);
  }
  if (tp.size() < 2) throw Error(ErrorKind::invalid_window, "need at least two envelope maxima");
  return regression_slope(tp, lp);
}

}  // namespace slve
