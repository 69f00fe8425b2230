#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "slve/analysis.hpp"
#include "slve/dispersion.hpp"
#include "slve/error.hpp"
#include "slve/pde.hpp"

using namespace slve;

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

MaterialModel stress_rate(double gamma, ConstitutiveFunction h = ConstitutiveFunction::linear(1.0)) {
  return {Variant::stress_rate, 1.0, 0.0, gamma, std::move(h)};
}
MaterialModel strain_rate(double nu, ConstitutiveFunction g = ConstitutiveFunction::linear(1.0)) {
  return {Variant::strain_rate, 1.0, nu, 0.0, std::move(g)};
}
MaterialModel elastic(ConstitutiveFunction h = ConstitutiveFunction::linear(1.0)) {
  return {Variant::elastic, 1.0, 0.0, 0.0, std::move(h)};
}

SimState uniform(const Grid1D& g, double T0, const ConstitutiveFunction& f) {
  return {0.0, Field(g), Field::sample(g, [&](double) { return f.value(T0); }),
          Field::sample(g, [&](double) { return T0; })};
}

double max_diff(const Field& a, const Field& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("stress-rate right-hand side examples") {
  const Grid1D g(2 * std::numbers::pi, 32);
  const auto m = stress_rate(1.0);
  const SimState zero{0.0, Field(g), Field(g), Field(g)};
  auto r = rhs_stress_rate(zero, m);
  CHECK(r.dv.max_abs() == 0.0);
  CHECK(r.deps.max_abs() == 0.0);
  CHECK(r.dstress.max_abs() == 0.0);

  const auto sat = stress_rate(0.3, ConstitutiveFunction::saturating(1, 1));
  r = rhs_stress_rate(uniform(g, 0.8, sat.response), sat);
  CHECK(r.dv.max_abs() == 0.0);
  CHECK(r.deps.max_abs() == 0.0);
  CHECK(r.dstress.max_abs() == 0.0);

  const SimState s{0.0, Field(g), Field(g), Field::sample(g, [](double) { return 0.4; })};
  r = rhs_stress_rate(s, m);
  for (std::size_t i = 0; i < g.node_count(); ++i) CHECK(r.dstress[i] == doctest::Approx(0.4));
  CHECK(r.deps.max_abs() == 0.0);
  CHECK(r.dv.max_abs() == 0.0);
}

TEST_CASE("strain-rate right-hand side examples") {
  const Grid1D g(2 * std::numbers::pi, 32);
  const auto m = strain_rate(0.5, ConstitutiveFunction::saturating(1, 1));
  const SimState zero{0.0, Field(g), Field(g), Field(g)};
  auto r = rhs_strain_rate(zero, m);
  CHECK(r.dv.max_abs() == 0.0);
  CHECK(r.deps.max_abs() == 0.0);

  r = rhs_strain_rate(uniform(g, 1.7, m.response), m);
  CHECK(r.dv.max_abs() < 1e-15);
  CHECK(r.deps.max_abs() < 1e-15);

  SimState over = zero;
  over.eps[5] = 1.0;
  try {
    rhs_strain_rate(over, m);
    FAIL("no strain-limit error");
  } catch (const StrainLimitError& e) {
    CHECK(e.kind() == ErrorKind::strain_limit_exceeded);
    CHECK(e.node() == 5);
  }
}

TEST_CASE("solver configuration ceilings") {
  const Grid1D g(10.0, 100);
  SolverConfig c;
  c.model = stress_rate(0.01);
  CHECK(c.max_stable_dt(g) == doctest::Approx(0.005));
  c.model = stress_rate(1.0);
  CHECK(c.max_stable_dt(g) == doctest::Approx(0.05));
  c.model = strain_rate(1.0);
  CHECK(c.max_stable_dt(g) == doctest::Approx(0.0025));
  c.dt = 0.003;
  CHECK(kind_of([&] { c.validate(g); }) == ErrorKind::invalid_step);
  c.dt = 0.002;
  c.validate(g);
  c.t_final = -1.0;
  CHECK(kind_of([&] { c.validate(g); }) == ErrorKind::invalid_step);
}

TEST_CASE("equilibria are fixed points") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const Grid1D g(5.0, 40);
  for (const MaterialModel& m : {stress_rate(0.5, ConstitutiveFunction::saturating(1, 2)),
                                 strain_rate(0.2, ConstitutiveFunction::arctan(1.0)),
                                 elastic(ConstitutiveFunction::saturating(2, 1))}) {
    const double T0 = u(rng);
    SolverConfig c;
    c.model = m;
    c.dt = 0.25 * c.max_stable_dt(g);
    c.t_final = 1000 * c.dt;
    c.exec = Exec::serial;
    const SimState s0 = uniform(g, T0, m.response);
    const SimState one = step(s0, c);
    CHECK(max_diff(one.stress, s0.stress) <= 1e-14);
    const SimState end = simulate(s0, c);
    CHECK(end.t == doctest::Approx(c.t_final));
    CHECK(max_diff(end.v, s0.v) <= 1e-12);
    CHECK(max_diff(end.eps, s0.eps) <= 1e-12);
    CHECK(max_diff(end.stress, s0.stress) <= 1e-12);
  }
}

TEST_CASE("serial and parallel runs are bitwise identical") {
  const Grid1D g(20.0, 128, Boundary::periodic, -10.0);
  for (const MaterialModel& m : {stress_rate(0.5, ConstitutiveFunction::saturating(1, 2)),
                                 strain_rate(0.5, ConstitutiveFunction::saturating(1, 1))}) {
    SolverConfig c;
    c.model = m;
    c.dt = 0.01;
    c.t_final = 2.0;
    const SimState s0 = make_initial_state(g, {InitialKind::gaussian_bump, 0.0, 1.0, 0.5, 1.0}, m);
    c.exec = Exec::serial;
    const SimState a = simulate(s0, c);
    c.exec = Exec::parallel;
    const SimState b = simulate(s0, c);
    CHECK(std::vector<double>(a.stress.values().begin(), a.stress.values().end()) ==
          std::vector<double>(b.stress.values().begin(), b.stress.values().end()));
    CHECK(std::vector<double>(a.v.values().begin(), a.v.values().end()) ==
          std::vector<double>(b.v.values().begin(), b.v.values().end()));
  }
}

TEST_CASE("trajectory strides and final state") {
  const Grid1D g(2 * std::numbers::pi, 16);
  SolverConfig c;
  c.model = strain_rate(0.1);
  c.dt = 0.01;
  c.t_final = 0.255;
  c.output_stride = 5;
  const auto traj = simulate_trajectory(make_initial_state(g, {InitialKind::single_mode, 0, 1, 1e-2, 1}, c.model), c);
  REQUIRE(traj.size() == 7);
  CHECK(traj[1].t == doctest::Approx(0.05));
  CHECK(traj.back().t == doctest::Approx(0.255).epsilon(1e-14));
}

TEST_CASE("blow-up of the linear stress-rate model is reported") {
  const Grid1D g(2 * std::numbers::pi, 64);
  SolverConfig c;
  c.model = stress_rate(1.0);
  c.dt = 0.01;
  c.t_final = 30.0;
  try {
    simulate(make_initial_state(g, {InitialKind::single_mode, 0, 1, 1e-3, 1}, c.model), c);
    FAIL("no blow-up");
  } catch (const BlowUpError& e) {
    CHECK(e.kind() == ErrorKind::blow_up);
    CHECK(e.time() > 0.0);
    CHECK(e.time() < 30.0);
    CHECK(e.max_abs_stress() > c.blowup_threshold);
  }
}

TEST_CASE("single-mode growth follows the dispersion relation") {
  const Grid1D g(2 * std::numbers::pi, 128);
  SolverConfig c;
  c.model = stress_rate(1.0);
  c.dt = 1e-3;
  c.t_final = 5.0;
  const double amp = 1e-6;
  std::vector<double> t, a;
  simulate(make_initial_state(g, {InitialKind::single_mode, 0, 1, amp, 1}, c.model), c,
           [&](const SimState& s, long n) {
             if (n % 10) return;
             t.push_back(s.t);
             a.push_back(mode_amplitude(s.stress, 1.0).real());
           });
  // Pointwise against the per-mode ODE.
  const auto ref = evolve_single_mode({1.0, amp, LinearModel::stress_rate}, 1.0, 5.0, 1e-3);
  double worst = 0.0;
  for (std::size_t j = 0; j < t.size(); ++j) {
    const double r = ref[10 * j].amplitude.real();
    worst = std::max(worst, std::abs(a[j] - r) / std::abs(r));
  }
  CHECK(worst < 0.01);
  CHECK(fit_log_slope(t, a, 3.0, 5.0) == doctest::Approx(1.465571).epsilon(0.01));
}

TEST_CASE("single-mode decay in the strain-rate model") {
  const Grid1D g(2 * std::numbers::pi, 64);
  SolverConfig c;
  c.model = strain_rate(1.0);
  c.dt = 2e-3;
  c.t_final = 20.0;
  std::vector<double> t, a;
  simulate(make_initial_state(g, {InitialKind::single_mode, 0, 1, 1e-6, 1}, c.model), c,
           [&](const SimState& s, long n) {
             if (n % 5) return;
             t.push_back(s.t);
             a.push_back(mode_amplitude(s.stress, 1.0).real());
           });
  CHECK(fit_envelope_rate(t, a) == doctest::Approx(-0.5).epsilon(0.01));
}

TEST_CASE("stored energy density examples") {
  const auto lin = ConstitutiveFunction::linear(1.0);
  CHECK(stored_energy_density(Variant::stress_rate, lin, 0, 0) == 0.0);
  CHECK(stored_energy_density(Variant::strain_rate, lin, 0, 0) == 0.0);
  CHECK(stored_energy_density(Variant::strain_rate, lin, 2, 0) == 2.0);
  CHECK(stored_energy_density(Variant::stress_rate, lin, 2, 1) == 0.0);
}

TEST_CASE("strain-rate stored energy is nonnegative for monotone responses") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (const auto& g : {ConstitutiveFunction::linear(2), ConstitutiveFunction::saturating(1, 1),
                        ConstitutiveFunction::saturating(3, 0.5), ConstitutiveFunction::arctan(2)})
    for (int i = 0; i < 200; ++i) CHECK(stored_energy_density(Variant::strain_rate, g, u(rng), 0.0) >= 0.0);
}

TEST_CASE("energy report edge cases") {
  const Grid1D g(4.0, 16);
  const auto m = strain_rate(1.0);
  std::vector<SimState> zeros;
  for (int i = 0; i < 3; ++i) zeros.push_back({0.1 * i, Field(g), Field(g), Field(g)});
  const EnergyReport r = energy_report(zeros, m);
  CHECK(r.kinetic == 0.0);
  CHECK(r.internal == 0.0);
  CHECK(r.total == 0.0);
  CHECK(r.dissipation_rate == 0.0);
  CHECK(r.balance_residual == 0.0);
  CHECK(kind_of([&] { energy_report(std::span(zeros).first(2), m); }) == ErrorKind::invalid_window);
  zeros[2].t = 0.5;
  CHECK(kind_of([&] { energy_report(zeros, m); }) == ErrorKind::invalid_window);
}

TEST_CASE("strain-rate energy balance at mid-trajectory") {
  const Grid1D g(20.0, 256, Boundary::periodic, -10.0);
  SolverConfig c;
  c.model = strain_rate(0.5);
  c.dt = 1e-3;
  c.t_final = 2.0;
  const auto traj = simulate_trajectory(make_initial_state(g, {InitialKind::gaussian_bump, 0, 1, 0.5, 1}, c.model), c);
  const auto reports = energy_reports(traj, c.model);
  const EnergyReport& mid = reports[reports.size() / 2];
  CHECK(mid.dissipation_rate > 0.0);
  CHECK(mid.balance_residual / mid.dissipation_rate < 1e-3);
  for (std::size_t i = 1; i < reports.size(); ++i) CHECK(reports[i].total <= reports[i - 1].total);
}

TEST_CASE("stress-rate energy is nonincreasing") {
  const Grid1D g(20.0, 256, Boundary::periodic, -10.0);
  SolverConfig c;
  c.model = stress_rate(0.5, ConstitutiveFunction::saturating(1, 2));
  c.dt = 1e-3;
  c.t_final = 2.0;
  c.output_stride = 10;
  const auto traj = simulate_trajectory(make_initial_state(g, {InitialKind::gaussian_bump, 0, 1, 0.5, 1}, c.model), c);
  const auto reports = energy_reports(traj, c.model);
  for (const auto& r : reports) CHECK(r.dissipation_rate >= 0.0);
  for (std::size_t i = 1; i < reports.size(); ++i) CHECK(reports[i].total <= reports[i - 1].total + 1e-6);
  const EnergyReport& mid = reports[reports.size() / 2];
  CHECK(mid.balance_residual / mid.dissipation_rate < 1e-3);
}

TEST_CASE("frozen-strain relaxation") {
  const auto h = ConstitutiveFunction::saturating(1, 1);
  // Starting on h(T*) = eps the node stays put.
  const double T_star = invert(h, 0.3);
  CHECK(relax_at_frozen_strain(h, 1e-2, 0.3, T_star, 1.0, 1e-3) == doctest::Approx(T_star).epsilon(1e-12));
  // A small offset grows at rate h'(T*)/gamma: the equilibrium repels.
  const double d0 = 1e-12, gamma = 0.5, t = 2.0;
  const double T = relax_at_frozen_strain(h, gamma, 0.3, T_star + d0, t, 1e-3);
  const double expected = d0 * std::exp(h.derivative(T_star) / gamma * t);
  CHECK((T - T_star) == doctest::Approx(expected).epsilon(1e-3));
  CHECK(kind_of([&] { relax_at_frozen_strain(h, 0.0, 0.3, 0.0, 1.0, 0.1); }) == ErrorKind::invalid_parameter);
}

TEST_CASE("elastic variant enforces eps = h(T) exactly") {
  const Grid1D g(20.0, 200, Boundary::periodic, -10.0);
  SolverConfig c;
  c.model = elastic(ConstitutiveFunction::saturating(1, 2));
  c.dt = 0.02;
  c.t_final = 1.0;
  c.output_stride = 10;
  for (const auto& s : simulate_trajectory(make_initial_state(g, {InitialKind::gaussian_bump, 0, 1, 0.5, 1}, c.model), c))
    for (std::size_t i = 0; i < s.eps.size(); ++i)
      CHECK(std::abs(c.model.response.value(s.stress[i]) - s.eps[i]) <= 1e-12 * std::max(1.0, std::abs(s.eps[i])));
}
