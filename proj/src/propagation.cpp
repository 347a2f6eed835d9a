#include "shuttle/propagation.hpp"

#include <cmath>
#include <stdexcept>

#include "shuttle/threading.hpp"

namespace shuttle {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_pulses(const PulseTable& pulses) {
  if (pulses.k_steps < 1 || pulses.dt <= 0.0 ||
      pulses.omega12.size() != pulses.k_steps ||
      pulses.omega23.size() != pulses.k_steps) {
    throw std::invalid_argument("invalid pulse table");
  }
}

Matrix3c propagator_from_eig(const StepEig& eig, double dt, double hbar) {
  Matrix3c phases = Matrix3c::Zero();
  for (int a = 0; a < 3; ++a) {
    phases(a, a) = std::exp(-kI * (eig.gamma[a] * dt / hbar));
  }
  return eig.t * phases * eig.t.adjoint();
}

}  // namespace

StepEig step_eigensystem(const HamiltonianParams& params) {
  if (auto closed = closed_form_eig(params)) {
    return {closed->gamma, closed->t_matrix};
  }
  const auto generic = eig_hermitian3(hamiltonian(params, HamiltonianForm::kTraceless));
  return {generic.eigenvalues, generic.eigenvectors};
}

Matrix3c step_propagator(const HamiltonianParams& params, double dt,
                         double hbar) {
  if (dt <= 0.0) {
    throw std::invalid_argument("step_propagator: dt must be positive");
  }
  return propagator_from_eig(step_eigensystem(params), dt, hbar);
}

Trajectory evolve(const PulseTable& pulses, double delta, double hbar) {
  check_pulses(pulses);
  const int k_steps = pulses.k_steps;

  Trajectory traj;
  traj.detuning = delta;
  traj.dt = pulses.dt;
  traj.hbar = hbar;
  traj.pulse_hash = pulses.content_hash();
  traj.states.resize(k_steps + 1);
  traj.propagators.units.resize(k_steps);
  traj.eigs.resize(k_steps);

  traj.states[0] = boundary_states().first;
  for (int k = 0; k < k_steps; ++k) {
    const HamiltonianParams params{delta, pulses.omega12[k], pulses.omega23[k]};
    traj.eigs[k] = step_eigensystem(params);
    const Matrix3c u = propagator_from_eig(traj.eigs[k], pulses.dt, hbar);
    traj.propagators.units[k] = u;
    traj.states[k + 1].value = u * traj.states[k].value * u.adjoint();
  }
  return traj;
}

Costates backward_costates(const Trajectory& traj) {
  const int k_steps = static_cast<int>(traj.propagators.units.size());
  Costates costates;
  costates.detuning = traj.detuning;
  costates.hbar = traj.hbar;
  costates.pulse_hash = traj.pulse_hash;
  costates.lambdas.resize(k_steps + 1);
  costates.lambdas[k_steps] = boundary_states().second.value;
  for (int k = k_steps - 1; k >= 0; --k) {
    const Matrix3c& u = traj.propagators.units[k];
    costates.lambdas[k] = u.adjoint() * costates.lambdas[k + 1] * u;
  }
  return costates;
}

Costates backward_costates(const PulseTable& pulses, double delta,
                           double hbar) {
  check_pulses(pulses);
  const int k_steps = pulses.k_steps;
  Costates costates;
  costates.detuning = delta;
  costates.hbar = hbar;
  costates.pulse_hash = pulses.content_hash();
  costates.lambdas.resize(k_steps + 1);
  costates.lambdas[k_steps] = boundary_states().second.value;
  for (int k = k_steps - 1; k >= 0; --k) {
    const HamiltonianParams params{delta, pulses.omega12[k], pulses.omega23[k]};
    const Matrix3c u = propagator_from_eig(step_eigensystem(params), pulses.dt, hbar);
    costates.lambdas[k] = u.adjoint() * costates.lambdas[k + 1] * u;
  }
  return costates;
}

double fidelity(const DensityMatrix& rho_final) {
  // tr(rho_target rho) picks out the site-3 population.
  return rho_final.value(2, 2).real();
}

double aggregate_fidelity(const UncertaintyEnsemble& ensemble,
                          const PulseTable& pulses, double hbar) {
  check_pulses(pulses);
  std::vector<double> member(ensemble.grid.size());
  parallel_for_index(static_cast<int>(ensemble.grid.size()), [&](int n) {
    member[n] = fidelity(evolve(pulses, ensemble.grid[n], hbar).states.back());
  });
  double total = 0.0;
  for (double j_n : member) total += j_n;  // fixed ascending order
  return total;
}

}  // namespace shuttle
