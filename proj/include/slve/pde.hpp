#pragma once

#include <functional>
#include <span>
#include <vector>

#include "slve/constitutive.hpp"
#include "slve/core.hpp"

namespace slve {

/// Dimensionless material: variant, density and the active viscous
/// coefficient, with the response (h or g).
struct MaterialModel {
  Variant variant = Variant::elastic;
  double rho = 1.0;
  double nu = 0.0;
  double gamma = 0.0;
  ConstitutiveFunction response = ConstitutiveFunction::linear(1.0);

  void validate() const;
};

/// Velocity, linearized strain and stress on one grid at time t.
struct SimState {
  double t = 0.0;
  Field v;
  Field eps;
  Field stress;
};

struct StateRate {
  Field dv;
  Field deps;
  Field dstress;  ///< zero for the strain-rate and elastic variants
};

/// v_t = T_x/rho, eps_t = v_x, T_t = (h(T) - eps)/gamma.
StateRate rhs_stress_rate(const SimState& s, const MaterialModel& m, Exec exec = Exec::parallel);

/// Stress rebuilt as T = g^{-1}(eps + nu v_x), then v_t = T_x/rho,
/// eps_t = (g(T) - eps)/nu. With nu = 0 this is the elastic model eps = h(T).
/// `s.stress` supplies the Newton guesses.
StateRate rhs_strain_rate(const SimState& s, const MaterialModel& m, Exec exec = Exec::parallel);

/// Overwrites s.stress with g^{-1}(eps + nu v_x). No-op for stress-rate.
void reconstruct_stress(SimState& s, const MaterialModel& m, Exec exec = Exec::parallel);

struct SolverConfig {
  double dt = 1e-3;
  double t_final = 1.0;
  int output_stride = 1;
  MaterialModel model;
  Exec exec = Exec::parallel;
  /// max |T| above this counts as blow-up, as does any non-finite value.
  double blowup_threshold = 1e10;

  /// Largest admissible dt on `grid` for this model.
  double max_stable_dt(const Grid1D& grid) const;
  void validate(const Grid1D& grid) const;
};

/// One classical RK4 step of size `dt` (defaults to config.dt). Non-periodic
/// end nodes are held fixed. Throws BlowUpError.
SimState step(const SimState& s, const SolverConfig& config);
SimState step(const SimState& s, const SolverConfig& config, double dt);

using StepObserver = std::function<void(const SimState&, long step)>;

/// Runs from s.t to s.t + t_final; `observer` sees the initial state and
/// every state after a step. Returns the final state.
SimState simulate(SimState s, const SolverConfig& config, const StepObserver& observer = {});

/// States at steps 0, stride, 2*stride, ... plus the final state.
std::vector<SimState> simulate_trajectory(const SimState& s, const SolverConfig& config);

enum class InitialKind { zero, gaussian_bump, single_mode };

struct InitialData {
  InitialKind kind = InitialKind::zero;
  double center = 0.0;
  double width = 1.0;
  double amplitude = 1.0;
  double k = 1.0;
};

/// Stress profile T0 with v = 0 and eps = f(T0), so the stress starts at rest.
SimState make_initial_state(const Grid1D& grid, const InitialData& init, const MaterialModel& m);

/// rho*omega. Stress-rate: T eps - H(T). Strain-rate and elastic: T f(T) - F(T),
/// with H, F the antiderivatives of the response.
double stored_energy_density(Variant variant, const ConstitutiveFunction& f, double T, double eps);

struct EnergyReport {
  double t = 0.0;
  double kinetic = 0.0;
  double internal = 0.0;
  double total = 0.0;
  double dissipation_rate = 0.0;
  double balance_residual = 0.0;
};

/// Energies at one state (no residual).
EnergyReport energy_at(const SimState& s, const MaterialModel& m);

/// Report at the middle state of `window`; the residual uses a centered
/// difference of total energy over its two neighbours, which must be
/// equally spaced in time.
EnergyReport energy_report(std::span<const SimState> window, const MaterialModel& m);

/// Reports for every interior state of a uniformly spaced trajectory.
std::vector<EnergyReport> energy_reports(std::span<const SimState> trajectory, const MaterialModel& m);

/// Integrates the nodewise stress ODE T_t = (h(T) - eps)/gamma with eps held
/// fixed, from T0 over [0, t_final] by RK4 with step dt.
double relax_at_frozen_strain(const ConstitutiveFunction& h, double gamma, double eps, double T0,
                              double t_final, double dt);

}  // namespace slve
