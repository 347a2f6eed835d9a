#pragma once

#include <cstdint>
#include <vector>

#include "shuttle/controls.hpp"
#include "shuttle/model.hpp"

namespace shuttle {

// Per-step eigensystem of the traceless Hamiltonian: closed form when the
// parameters are non-degenerate, generic Jacobi solver otherwise.
struct StepEig {
  std::array<double, 3> gamma;  // meV
  Matrix3c t;                   // unitary eigenvector columns
};

StepEig step_eigensystem(const HamiltonianParams& params);

struct StepPropagators {
  std::vector<Matrix3c> units;  // one unitary per step
};

struct Trajectory {
  std::vector<DensityMatrix> states;  // K+1 entries, states[0] = initial state
  StepPropagators propagators;        // K entries
  std::vector<StepEig> eigs;          // K entries, reused by the gradient pass
  double detuning = 0.0;
  double dt = 0.0;
  double hbar = kHbarMevNs;
  std::uint64_t pulse_hash = 0;
};

struct Costates {
  std::vector<Matrix3c> lambdas;  // K+1 entries, lambdas[K] = target state
  double detuning = 0.0;
  double hbar = kHbarMevNs;
  std::uint64_t pulse_hash = 0;
};

// exp(-i H dt / hbar) through the spectral decomposition; exact for the
// piecewise-constant step, unitary to machine precision. Requires dt > 0.
Matrix3c step_propagator(const HamiltonianParams& params, double dt,
                         double hbar = kHbarMevNs);

// Forward evolution rho(k+1) = U(k) rho(k) U(k)+ from the site-1 state.
Trajectory evolve(const PulseTable& pulses, double delta,
                  double hbar = kHbarMevNs);

// Backward recursion lambda(k) = U(k)+ lambda(k+1) U(k) from the target
// state; tr(lambda(k) rho(k)) is step-independent for a matched trajectory.
Costates backward_costates(const PulseTable& pulses, double delta,
                           double hbar = kHbarMevNs);
Costates backward_costates(const Trajectory& traj);

// Transfer fidelity tr(rho_target rho_final) = site-3 population.
double fidelity(const DensityMatrix& rho_final);

// Sum of per-detuning fidelities over the ensemble, in [0, N]. Members may
// be evaluated concurrently; the reduction order is fixed and ascending.
double aggregate_fidelity(const UncertaintyEnsemble& ensemble,
                          const PulseTable& pulses, double hbar = kHbarMevNs);

}  // namespace shuttle
