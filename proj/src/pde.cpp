#include "slve/pde.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slve/error.hpp"
#include "slve/kernels.hpp"

namespace slve {

namespace {

kernels::RhsParams rhs_params(const Grid1D& g, const MaterialModel& m) {
  const double coeff = m.variant == Variant::stress_rate   ? m.gamma
                       : m.variant == Variant::strain_rate ? m.nu
                                                           : 0.0;
  return {g.spacing(), g.periodic(), m.rho, coeff};
}

// Flat layout [v | eps | T]; the stress block is only integrated for the
// stress-rate variant.
struct Flat {
  std::size_t n;
  std::size_t blocks;
  std::vector<double> data;

  std::span<double> block(std::size_t b) { return {data.data() + b * n, n}; }
  std::span<const double> block(std::size_t b) const { return {data.data() + b * n, n}; }
};

Flat pack(const SimState& s, std::size_t blocks) {
  const std::size_t n = s.v.size();
  Flat f{n, blocks, std::vector<double>(blocks * n)};
  std::copy_n(s.v.values().begin(), n, f.block(0).begin());
  std::copy_n(s.eps.values().begin(), n, f.block(1).begin());
  if (blocks == 3) std::copy_n(s.stress.values().begin(), n, f.block(2).begin());
  return f;
}

class Stepper {
 public:
  Stepper(const SolverConfig& c, const Grid1D& g)
      : cfg_(c), grid_(g), p_(rhs_params(g, c.model)),
        blocks_(c.model.variant == Variant::stress_rate ? 3 : 2) {}

  std::size_t blocks() const { return blocks_; }

  // k = f(y). `stress` carries Newton guesses in and the rebuilt stress out.
  void eval(const Flat& y, std::span<double> stress, Flat& k) const {
    const bool par = cfg_.exec == Exec::parallel;
    const auto& resp = cfg_.model.response;
    if (blocks_ == 3) {
      if (par)
        kernels::omp::stress_rate_rhs(y.block(0), y.block(1), y.block(2), resp, p_, k.block(0),
                                      k.block(1), k.block(2));
      else
        kernels::serial::stress_rate_rhs(y.block(0), y.block(1), y.block(2), resp, p_,
                                         k.block(0), k.block(1), k.block(2));
    } else {
      if (par) {
        kernels::omp::reconstruct_stress(y.block(0), y.block(1), resp, p_, stress);
        kernels::omp::strain_rate_rhs(y.block(0), y.block(1), stress, resp, p_, k.block(0),
                                      k.block(1));
      } else {
        kernels::serial::reconstruct_stress(y.block(0), y.block(1), resp, p_, stress);
        kernels::serial::strain_rate_rhs(y.block(0), y.block(1), stress, resp, p_, k.block(0),
                                         k.block(1));
      }
    }
    if (!grid_.periodic()) {
      for (std::size_t b = 0; b < blocks_; ++b) {
        k.block(b).front() = 0.0;
        k.block(b).back() = 0.0;
      }
    }
  }

  void axpy(const Flat& y, double a, const Flat& x, Flat& out) const {
    if (cfg_.exec == Exec::parallel) kernels::omp::axpy(y.data, a, x.data, out.data);
    else kernels::serial::axpy(y.data, a, x.data, out.data);
  }

  void combine(Flat& y, double dt, const Flat& k1, const Flat& k2, const Flat& k3,
               const Flat& k4) const {
    if (cfg_.exec == Exec::parallel)
      kernels::omp::rk4_combine(y.data, dt, k1.data, k2.data, k3.data, k4.data);
    else
      kernels::serial::rk4_combine(y.data, dt, k1.data, k2.data, k3.data, k4.data);
  }

  const kernels::RhsParams& params() const { return p_; }

 private:
  const SolverConfig& cfg_;
  const Grid1D& grid_;
  kernels::RhsParams p_;
  std::size_t blocks_;
};

void check_blow_up(const SimState& s, double threshold) {
  const bool finite = s.v.all_finite() && s.eps.all_finite() && s.stress.all_finite();
  const double m = s.stress.all_finite() ? s.stress.max_abs()
                                         : std::numeric_limits<double>::infinity();
  if (!finite || m > threshold) throw BlowUpError(s.t, m);
}

}  // namespace

void MaterialModel::validate() const {
  ModelParams p;
  p.rho = rho;
  p.nu = nu;
  p.gamma = gamma;
  p.variant = variant;
  p.validate();
}

StateRate rhs_stress_rate(const SimState& s, const MaterialModel& m, Exec exec) {
  if (!(m.gamma > 0.0)) throw Error(ErrorKind::invalid_parameter, "stress-rate model requires gamma > 0");
  StateRate r{Field(s.v.grid()), Field(s.v.grid()), Field(s.v.grid())};
  kernels::RhsParams p{s.v.grid().spacing(), s.v.grid().periodic(), m.rho, m.gamma};
  if (exec == Exec::parallel)
    kernels::omp::stress_rate_rhs(s.v.values(), s.eps.values(), s.stress.values(), m.response, p,
                                  r.dv.values(), r.deps.values(), r.dstress.values());
  else
    kernels::serial::stress_rate_rhs(s.v.values(), s.eps.values(), s.stress.values(), m.response,
                                     p, r.dv.values(), r.deps.values(), r.dstress.values());
  return r;
}

StateRate rhs_strain_rate(const SimState& s, const MaterialModel& m, Exec exec) {
  if (m.variant == Variant::strain_rate && !(m.nu > 0.0))
    throw Error(ErrorKind::invalid_parameter, "strain-rate model requires nu > 0");
  StateRate r{Field(s.v.grid()), Field(s.v.grid()), Field(s.v.grid())};
  const double coeff = m.variant == Variant::strain_rate ? m.nu : 0.0;
  kernels::RhsParams p{s.v.grid().spacing(), s.v.grid().periodic(), m.rho, coeff};
  std::vector<double> T(s.stress.values().begin(), s.stress.values().end());
  if (exec == Exec::parallel) {
    kernels::omp::reconstruct_stress(s.v.values(), s.eps.values(), m.response, p, T);
    kernels::omp::strain_rate_rhs(s.v.values(), s.eps.values(), T, m.response, p, r.dv.values(),
                                  r.deps.values());
  } else {
    kernels::serial::reconstruct_stress(s.v.values(), s.eps.values(), m.response, p, T);
    kernels::serial::strain_rate_rhs(s.v.values(), s.eps.values(), T, m.response, p,
                                     r.dv.values(), r.deps.values());
  }
  return r;
}

void reconstruct_stress(SimState& s, const MaterialModel& m, Exec exec) {
  if (m.variant == Variant::stress_rate) return;
  const double coeff = m.variant == Variant::strain_rate ? m.nu : 0.0;
  kernels::RhsParams p{s.v.grid().spacing(), s.v.grid().periodic(), m.rho, coeff};
  if (exec == Exec::parallel)
    kernels::omp::reconstruct_stress(s.v.values(), s.eps.values(), m.response, p, s.stress.values());
  else
    kernels::serial::reconstruct_stress(s.v.values(), s.eps.values(), m.response, p, s.stress.values());
}

double SolverConfig::max_stable_dt(const Grid1D& grid) const {
  const double dx = grid.spacing();
  double ceiling = 0.5 * dx;
  if (model.variant == Variant::stress_rate) ceiling = std::min(ceiling, 0.5 * model.gamma);
  if (model.variant == Variant::strain_rate) ceiling = std::min(ceiling, 0.25 * dx * dx / model.nu);
  return ceiling;
}

void SolverConfig::validate(const Grid1D& grid) const {
  model.validate();
  if (!(dt > 0.0)) throw Error(ErrorKind::invalid_step, "dt must be positive");
  if (!(t_final > 0.0)) throw Error(ErrorKind::invalid_step, "t_final must be positive");
  if (output_stride < 1) throw Error(ErrorKind::invalid_step, "output_stride must be >= 1");
  if (!(blowup_threshold > 0.0)) throw Error(ErrorKind::invalid_step, "blowup_threshold must be positive");
  const double ceiling = max_stable_dt(grid);
  if (dt > ceiling * (1.0 + 1e-12))
    throw Error(ErrorKind::invalid_step, "dt = " + std::to_string(dt) +
                                             " exceeds the stability ceiling " +
                                             std::to_string(ceiling));
}

SimState step(const SimState& s, const SolverConfig& config) { return step(s, config, config.dt); }

SimState step(const SimState& s, const SolverConfig& config, double dt) {
  const Grid1D& grid = s.v.grid();
  Stepper st(config, grid);
  const std::size_t nb = st.blocks();
  const std::size_t n = s.v.size();

  const Flat y0 = pack(s, nb);
  Flat k1{n, nb, std::vector<double>(nb * n)}, k2 = k1, k3 = k1, k4 = k1, tmp = k1;
  std::vector<double> stress(s.stress.values().begin(), s.stress.values().end());

  st.eval(y0, stress, k1);
  st.axpy(y0, 0.5 * dt, k1, tmp);
  st.eval(tmp, stress, k2);
  st.axpy(y0, 0.5 * dt, k2, tmp);
  st.eval(tmp, stress, k3);
  st.axpy(y0, dt, k3, tmp);
  st.eval(tmp, stress, k4);

  Flat y = y0;
  st.combine(y, dt, k1, k2, k3, k4);

  SimState out{s.t + dt, Field(grid, std::vector<double>(y.block(0).begin(), y.block(0).end())),
               Field(grid, std::vector<double>(y.block(1).begin(), y.block(1).end())),
               Field(grid)};
  if (nb == 3) {
    std::copy(y.block(2).begin(), y.block(2).end(), out.stress.values().begin());
  } else {
    std::copy(stress.begin(), stress.end(), out.stress.values().begin());
    if (out.v.all_finite() && out.eps.all_finite()) reconstruct_stress(out, config.model, config.exec);
  }
  check_blow_up(out, config.blowup_threshold);
  return out;
}

SimState simulate(SimState s, const SolverConfig& config, const StepObserver& observer) {
  config.validate(s.v.grid());
  reconstruct_stress(s, config.model, config.exec);
  if (observer) observer(s, 0);
  const double t0 = s.t;
  const auto steps = static_cast<long>(std::ceil(config.t_final / config.dt - 1e-9));
  for (long n = 0; n < steps; ++n) {
    const double t_next = n + 1 == steps ? t0 + config.t_final : t0 + (n + 1) * config.dt;
    s = step(s, config, t_next - s.t);
    s.t = t_next;
    if (observer) observer(s, n + 1);
  }
  return s;
}

std::vector<SimState> simulate_trajectory(const SimState& s, const SolverConfig& config) {
  std::vector<SimState> out;
  const auto steps = static_cast<long>(std::ceil(config.t_final / config.dt - 1e-9));
  simulate(s, config, [&](const SimState& st, long n) {
    if (n % config.output_stride == 0 || n == steps) out.push_back(st);
  });
  return out;
}

SimState make_initial_state(const Grid1D& grid, const InitialData& init, const MaterialModel& m) {
  m.validate();
  std::function<double(double)> profile;
  switch (init.kind) {
    case InitialKind::zero:
      profile = [](double) { return 0.0; };
      break;
    case InitialKind::gaussian_bump:
      if (!(init.width > 0.0)) throw Error(ErrorKind::invalid_parameter, "bump width must be positive");
      profile = [init](double x) {
        const double z = (x - init.center) / init.width;
        return init.amplitude * std::exp(-z * z);
      };
      break;
    case InitialKind::single_mode:
      if (!(init.k > 0.0)) throw Error(ErrorKind::invalid_parameter, "mode wavenumber must be positive");
      profile = [init](double x) { return init.amplitude * std::cos(init.k * x); };
      break;
  }
  SimState s{0.0, Field(grid), Field(grid), Field::sample(grid, profile)};
  for (std::size_t i = 0; i < s.eps.size(); ++i) s.eps[i] = m.response.value(s.stress[i]);
  return s;
}

double stored_energy_density(Variant variant, const ConstitutiveFunction& f, double T, double eps) {
  if (variant == Variant::stress_rate) return T * eps - f.antiderivative(T);
  return T * f.value(T) - f.antiderivative(T);
}

EnergyReport energy_at(const SimState& s, const MaterialModel& m) {
  const Grid1D& g = s.v.grid();
  Field kin(g), inner(g), diss(g);
  for (std::size_t i = 0; i < kin.size(); ++i) {
    kin[i] = 0.5 * m.rho * s.v[i] * s.v[i];
    inner[i] = stored_energy_density(m.variant, m.response, s.stress[i], s.eps[i]);
  }
  if (m.variant == Variant::stress_rate) {
    for (std::size_t i = 0; i < diss.size(); ++i) {
      const double rate = (m.response.value(s.stress[i]) - s.eps[i]) / m.gamma;
      diss[i] = m.gamma * rate * rate;
    }
  } else if (m.variant == Variant::strain_rate) {
    const Field Tx = spatial_derivative(s.stress, 1, Exec::serial);
    for (std::size_t i = 0; i < diss.size(); ++i) diss[i] = m.nu / m.rho * Tx[i] * Tx[i];
  }
  EnergyReport r;
  r.t = s.t;
  r.kinetic = integrate_field(kin);
  r.internal = integrate_field(inner);
  r.total = r.kinetic + r.internal;
  r.dissipation_rate = integrate_field(diss);
  return r;
}

EnergyReport energy_report(std::span<const SimState> window, const MaterialModel& m) {
  if (window.size() < 3)
    throw Error(ErrorKind::invalid_window, "energy report needs at least 3 consecutive states");
  const std::size_t mid = window.size() / 2;
  const SimState& a = window[mid - 1];
  const SimState& b = window[mid];
  const SimState& c = window[mid + 1];
  const double h1 = b.t - a.t, h2 = c.t - b.t;
  if (!(h1 > 0.0) || std::abs(h1 - h2) > 1e-9 * std::max(h1, h2))
    throw Error(ErrorKind::invalid_window, "energy window must be equally spaced in time");
  EnergyReport r = energy_at(b, m);
  const double rate = (energy_at(c, m).total - energy_at(a, m).total) / (c.t - a.t);
  r.balance_residual = std::abs(rate + r.dissipation_rate);
  return r;
}

std::vector<EnergyReport> energy_reports(std::span<const SimState> trajectory, const MaterialModel& m) {
  std::vector<EnergyReport> out;
  if (trajectory.size() < 3) return out;
  std::vector<EnergyReport> at;
  at.reserve(trajectory.size());
  for (const auto& s : trajectory) at.push_back(energy_at(s, m));
  for (std::size_t i = 1; i + 1 < trajectory.size(); ++i) {
    const double h1 = trajectory[i].t - trajectory[i - 1].t;
    const double h2 = trajectory[i + 1].t - trajectory[i].t;
    if (std::abs(h1 - h2) > 1e-9 * std::max(h1, h2)) continue;
    EnergyReport r = at[i];
    r.balance_residual =
        std::abs((at[i + 1].total - at[i - 1].total) / (h1 + h2) + r.dissipation_rate);
    out.push_back(r);
  }
  return out;
}

double relax_at_frozen_strain(const ConstitutiveFunction& h, double gamma, double eps, double T0,
                              double t_final, double dt) {
  if (!(gamma > 0.0)) throw Error(ErrorKind::invalid_parameter, "relaxation requires gamma > 0");
  if (!(dt > 0.0) || !(t_final > 0.0) || dt > t_final)
    throw Error(ErrorKind::invalid_step, "dt must lie in (0, t_final]");
  auto f = [&](double T) { return (h.value(T) - eps) / gamma; };
  double T = T0;
  const auto steps = static_cast<long>(std::ceil(t_final / dt - 1e-9));
  for (long n = 0; n < steps; ++n) {
    const double step = std::min(dt, t_final - n * dt);
    const double k1 = f(T), k2 = f(T + 0.5 * step * k1), k3 = f(T + 0.5 * step * k2),
                 k4 = f(T + step * k3);
    T += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return T;
}

}  // namespace slve
