#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "slve/constitutive.hpp"
#include "slve/error.hpp"
#include "slve/kernels.hpp"

using namespace slve;
namespace k = slve::kernels;

namespace {

std::vector<double> noise(std::size_t n, double scale, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> out(n);
  for (auto& x : out) x = u(rng);
  return out;
}

}  // namespace

// The OpenMP kernels must reproduce the serial reference bit for bit.
TEST_CASE("serial and parallel kernels agree bitwise") {
  for (bool periodic : {true, false}) {
    for (std::size_t n : {5u, 17u, 1000u}) {
      const auto f = noise(n, 1.0, n);
      const double h = 0.013;
      std::vector<double> a(n), b(n);
      k::serial::first_derivative(f, h, periodic, a);
      k::omp::first_derivative(f, h, periodic, b);
      CHECK(a == b);
      k::serial::second_derivative(f, h, periodic, a);
      k::omp::second_derivative(f, h, periodic, b);
      CHECK(a == b);

      const auto v = noise(n, 0.1, n + 1), T = noise(n, 2.0, n + 2);
      std::vector<double> eps(n);
      const auto sat = ConstitutiveFunction::saturating(1.0, 1.0);
      for (std::size_t i = 0; i < n; ++i) eps[i] = sat.value(T[i]) * 0.9;
      const k::RhsParams p{h, periodic, 1.3, 0.2};
      std::vector<double> dv1(n), de1(n), dT1(n), dv2(n), de2(n), dT2(n);
      k::serial::stress_rate_rhs(v, eps, T, sat, p, dv1, de1, dT1);
      k::omp::stress_rate_rhs(v, eps, T, sat, p, dv2, de2, dT2);
      CHECK(dv1 == dv2);
      CHECK(de1 == de2);
      CHECK(dT1 == dT2);

      k::serial::strain_rate_rhs(v, eps, T, sat, p, dv1, de1);
      k::omp::strain_rate_rhs(v, eps, T, sat, p, dv2, de2);
      CHECK(dv1 == dv2);
      CHECK(de1 == de2);

      const auto small_v = noise(n, 1e-3, n + 3);
      std::vector<double> T1(n, 0.0), T2(n, 0.0);
      k::serial::reconstruct_stress(small_v, eps, sat, p, T1);
      k::omp::reconstruct_stress(small_v, eps, sat, p, T2);
      CHECK(T1 == T2);

      std::vector<double> y1 = f, y2 = f;
      k::serial::rk4_combine(y1, 0.1, v, T, eps, f);
      k::omp::rk4_combine(y2, 0.1, v, T, eps, f);
      CHECK(y1 == y2);
      k::serial::axpy(f, 0.3, T, a);
      k::omp::axpy(f, 0.3, T, b);
      CHECK(a == b);
    }
  }
}

TEST_CASE("parallel reconstruction reports the first failing node") {
  const std::size_t n = 200;
  std::vector<double> v(n, 0.0), eps(n, 0.5), T1(n, 0.0), T2(n, 0.0);
  eps[150] = 1.2;
  eps[40] = 1.0;
  const auto sat = ConstitutiveFunction::saturating(1.0, 1.0);
  const k::RhsParams p{0.01, true, 1.0, 0.5};
  std::size_t serial_node = 0, omp_node = 1;
  try {
    k::serial::reconstruct_stress(v, eps, sat, p, T1);
  } catch (const StrainLimitError& e) {
    serial_node = e.node();
  }
  try {
    k::omp::reconstruct_stress(v, eps, sat, p, T2);
  } catch (const StrainLimitError& e) {
    omp_node = e.node();
  }
  CHECK(serial_node == 40);
  CHECK(omp_node == 40);
}
