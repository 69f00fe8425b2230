#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "slve/analysis.hpp"
#include "slve/dispersion.hpp"
#include "slve/error.hpp"

using namespace slve;
using cd = std::complex<double>;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::io_error;
}

// Real root of gamma r^3 - r^2 - k^2 by bisection: p(0) < 0 and p -> +inf.
double cubic_root_bisection(double gamma, double k) {
  auto p = [&](long double r) { return gamma * r * r * r - r * r - (long double)k * k; };
  long double lo = 0.0L, hi = 1.0L;
  while (p(hi) < 0) hi *= 2;
  for (int i = 0; i < 200; ++i) {
    const long double mid = 0.5L * (lo + hi);
    (p(mid) < 0 ? lo : hi) = mid;
  }
  return static_cast<double>(0.5L * (lo + hi));
}

// Discriminant of a x^3 + b x^2 + c x + d, all terms kept.
long double generic_cubic_discriminant(long double a, long double b, long double c, long double d) {
  return 18 * a * b * c * d - 4 * b * b * b * d + b * b * c * c - 4 * a * c * c * c - 27 * a * a * d * d;
}

}  // namespace

TEST_CASE("strain-rate examples") {
  auto r = strain_rate_dispersion(2.0, 1.0);
  CHECK(r.discriminant == 0.0);
  REQUIRE(r.roots.size() == 2);
  CHECK(r.roots[0] == cd(-1.0, 0.0));
  CHECK(r.roots[1] == cd(-1.0, 0.0));
  CHECK(*r.k_critical == 1.0);

  r = strain_rate_dispersion(1.0, 1.0);
  CHECK(r.discriminant == -3.0);
  CHECK(r.complex_pair);
  CHECK(r.classification == Stability::stable);
  for (const auto& z : r.roots) {
    CHECK(z.real() == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(std::abs(z.imag()) == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-15));
  }

  r = strain_rate_dispersion(1.0, 4.0);
  CHECK_FALSE(r.complex_pair);
  CHECK(r.classification == Stability::stable);
  CHECK(r.roots[0].real() == doctest::Approx(-8 - std::sqrt(48.0)).epsilon(1e-14));
  CHECK(r.roots[1].real() == doctest::Approx(-8 + std::sqrt(48.0)).epsilon(1e-14));
  CHECK(r.roots[1].real() == doctest::Approx(-1.0718).epsilon(1e-4));
  CHECK(r.roots[0].real() == doctest::Approx(-14.9282).epsilon(1e-5));

  r = strain_rate_dispersion(1.5, 0.0);
  CHECK(r.classification == Stability::marginally_stable);
  CHECK(r.roots[0] == cd(0.0));
  CHECK(r.roots[1] == cd(0.0));

  CHECK(kind_of([] { strain_rate_dispersion(0.0, 1.0); }) == ErrorKind::invalid_parameter);
  CHECK(kind_of([] { strain_rate_dispersion(1.0, -1.0); }) == ErrorKind::invalid_parameter);
}

TEST_CASE("stress-rate examples") {
  auto r = stress_rate_dispersion(1.0, 1.0);
  const double oracle = cubic_root_bisection(1.0, 1.0);
  CHECK(oracle == doctest::Approx(1.465571).epsilon(1e-6));
  REQUIRE(r.positive_real_root);
  CHECK(*r.positive_real_root == doctest::Approx(oracle).epsilon(1e-14));
  CHECK(r.discriminant == -31.0);
  CHECK(r.classification == Stability::unstable);
  CHECK(r.complex_pair);

  // Descartes: signs (+, -, 0, -) change once, so one positive real root.
  for (double k : {0.1, 1.0, 10.0}) {
    const auto s = stress_rate_dispersion(1.0, k);
    int positive_real = 0;
    for (const auto& z : s.roots)
      if (std::abs(z.imag()) < kRealRootTolerance && z.real() > 0) ++positive_real;
    CHECK(positive_real == 1);
  }

  r = stress_rate_dispersion(0.5, 2.0);
  CHECK(r.discriminant == -124.0);
  CHECK(r.complex_pair);

  r = stress_rate_dispersion(2.0, 0.0);
  CHECK(r.classification == Stability::unstable);
  CHECK(r.max_real_part() == doctest::Approx(0.5));

  CHECK(kind_of([] { stress_rate_dispersion(0.0, 1.0); }) == ErrorKind::invalid_parameter);
}

TEST_CASE("root residuals and Vieta relations over random parameters") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> logu(-3.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const double coeff = std::pow(10.0, logu(rng));
    const double k = std::pow(10.0, logu(rng));

    const auto s = strain_rate_dispersion(coeff, k);
    for (const auto& r : s.roots)
      CHECK(dispersion_residual(LinearModel::strain_rate, coeff, k, r) < 1e-10 * (1 + std::pow(std::abs(r), 3)));
    const cd sum_s = s.roots[0] + s.roots[1], prod_s = s.roots[0] * s.roots[1];
    CHECK(std::abs(sum_s - cd(-coeff * k * k)) <= 1e-9 * coeff * k * k);
    CHECK(std::abs(prod_s - cd(k * k)) <= 1e-9 * k * k);
    CHECK(s.max_real_part() < 0.0);

    const auto c = stress_rate_dispersion(coeff, k);
    for (const auto& r : c.roots)
      CHECK(dispersion_residual(LinearModel::stress_rate, coeff, k, r) < 1e-10 * (1 + std::pow(std::abs(r), 3)));
    const cd sum_c = c.roots[0] + c.roots[1] + c.roots[2];
    const cd prod_c = c.roots[0] * c.roots[1] * c.roots[2];
    CHECK(std::abs(sum_c - cd(1.0 / coeff)) <= 1e-9 * (std::abs(c.roots[0]) + 2 * std::abs(c.roots[1])));
    CHECK(std::abs(prod_c - cd(k * k / coeff)) <= 1e-9 * k * k / coeff);

    int real_roots = 0;
    for (const auto& r : c.roots)
      if (std::abs(r.imag()) < kRealRootTolerance) {
        ++real_roots;
        CHECK(r.real() > 0.0);
      }
    CHECK(real_roots == 1);
    CHECK(*c.positive_real_root == doctest::Approx(cubic_root_bisection(coeff, k)).epsilon(1e-12));
    const long double g = generic_cubic_discriminant(coeff, -1.0L, 0.0L, -(long double)k * k);
    CHECK(std::abs(c.discriminant - static_cast<double>(g)) <= 1e-9 * std::abs(static_cast<double>(g)));
  }
}

TEST_CASE("strain-rate transition at the critical wavenumber") {
  for (double nu : {0.5, 1.0, 2.0, 4.0, 0.01, 100.0}) {
    const double kc = 2.0 / nu;
    CHECK(strain_rate_dispersion(nu, kc * (1 - 1e-6)).complex_pair);
    const auto above = strain_rate_dispersion(nu, kc * (1 + 1e-6));
    CHECK_FALSE(above.complex_pair);
    CHECK(above.roots[0].real() != above.roots[1].real());
  }
}

TEST_CASE("growth_rate_curve examples") {
  const std::vector<double> ks{0.5, 1, 2, 3};
  for (Exec ex : {Exec::serial, Exec::parallel}) {
    for (const auto& p : growth_rate_curve(LinearModel::strain_rate, 1.0, ks, ex)) CHECK(p.max_real_part <= 0.0);
    const auto up = growth_rate_curve(LinearModel::stress_rate, 1.0, ks, ex);
    for (const auto& p : up) CHECK(p.max_real_part > 0.0);
    CHECK(up[1].k == 1.0);
    CHECK(up[1].max_real_part == doctest::Approx(1.465571).epsilon(1e-6));
  }
  const auto a = growth_rate_curve(LinearModel::stress_rate, 0.3, ks, Exec::serial);
  const auto b = growth_rate_curve(LinearModel::stress_rate, 0.3, ks, Exec::parallel);
  for (std::size_t i = 0; i < ks.size(); ++i) CHECK(a[i].max_real_part == b[i].max_real_part);
}

TEST_CASE("evolve_single_mode examples") {
  std::vector<double> t, y;
  for (const auto& s : evolve_single_mode({1.0, 1.0, LinearModel::strain_rate}, 1.0, 10.0, 1e-3)) {
    t.push_back(s.t);
    y.push_back(s.amplitude.real());
  }
  CHECK(t.back() == doctest::Approx(10.0));
  CHECK(fit_envelope_rate(t, y) == doctest::Approx(-0.5).epsilon(0.01));

  t.clear();
  y.clear();
  for (const auto& s : evolve_single_mode({1.0, 1.0, LinearModel::stress_rate}, 1.0, 10.0, 1e-3)) {
    t.push_back(s.t);
    y.push_back(std::abs(s.amplitude));
  }
  CHECK(fit_log_slope(t, y, 5.0, 10.0) == doctest::Approx(cubic_root_bisection(1.0, 1.0)).epsilon(0.01));

  for (LinearModel m : {LinearModel::strain_rate, LinearModel::stress_rate})
    for (const auto& s : evolve_single_mode({1.0, 0.0, m}, 1.0, 5.0, 1e-2)) CHECK(s.amplitude == cd(0.0));

  CHECK(kind_of([] { evolve_single_mode({}, 1.0, 1.0, 0.0); }) == ErrorKind::invalid_step);
  CHECK(kind_of([] { evolve_single_mode({}, 1.0, 1.0, 2.0); }) == ErrorKind::invalid_step);
}

TEST_CASE("single-mode exponent matches the dominant root over long horizons") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.3, 3.0);
  for (int i = 0; i < 10; ++i) {
    const double gamma = u(rng), k = u(rng);
    const double root = *stress_rate_dispersion(gamma, k).positive_real_root;
    const double horizon = 20.0 / root;
    std::vector<double> t, y;
    for (const auto& s : evolve_single_mode({k, 1.0, LinearModel::stress_rate}, gamma, horizon, horizon / 20000)) {
      t.push_back(s.t);
      y.push_back(std::abs(s.amplitude));
    }
    CHECK(fit_log_slope(t, y, 0.5 * horizon, horizon) == doctest::Approx(root).epsilon(0.01));

    const double nu = u(rng);
    const double re = strain_rate_dispersion(nu, k).max_real_part();
    if (nu * k < 1.2) {
      const double h2 = 20.0 / std::abs(re);
      t.clear();
      y.clear();
      for (const auto& s : evolve_single_mode({k, 1.0, LinearModel::strain_rate}, nu, h2, h2 / 40000)) {
        t.push_back(s.t);
        y.push_back(s.amplitude.real());
      }
      CHECK(fit_envelope_rate(t, y) == doctest::Approx(re).epsilon(0.01));
    }
  }
}
