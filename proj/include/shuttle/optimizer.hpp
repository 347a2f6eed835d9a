#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shuttle/gradient.hpp"

namespace shuttle {

struct OptimizerConfig {
  // Coefficient-space step per unit gradient (meV per unit of dJ/dp).
  // Default fixed by the calibration run documented in the README.
  double step_size = 3e-8;
  int max_iters = 5000;
  double objective_tol = 1e-8;  // stop when |dJ| per iteration falls below
  std::uint64_t seed = 1;
  double init_scale = 0.01;  // meV, uniform initial coefficient range
  bool line_search = false;  // optional backtracking; fixed step otherwise
  double target_mean_fidelity = 0.9999;  // early stop on J/N >= target
};

struct Horizon {
  double t_ns = 0.0;
  int k_steps = 0;
};

struct RunResult {
  FourierCoefficients coefficients;
  std::vector<double> history;  // objective J; history[0] is the seed point
  std::vector<double> final_fidelities;  // per grid detuning, fresh evaluation
  int iterations_used = 0;
  bool converged = false;
  std::string stop_reason;
};

// Seeded uniform coefficients in [-scale, scale]; the generator contract
// (mt19937_64, 53-bit mantissa mapping) is spelled out in the README so the
// stream is reproducible across platforms. scale == 0 gives exact zeros.
FourierCoefficients init_coefficients(std::uint64_t seed, double scale,
                                      int m_max);

// Gradient ascent on the ensemble objective J = sum_n tr(rho_T rho_n(T)).
// Fixed step by default; with line_search the history is non-decreasing.
// Halts with a diagnostic after 25 consecutive fixed-step decreases.
RunResult optimize(const UncertaintyEnsemble& ensemble, const Horizon& horizon,
                   int m_max, const OptimizerConfig& config,
                   double hbar = kHbarMevNs);

// Fidelity at n_test evenly spaced detunings across
// [delta_star (1 - rel), delta_star (1 + rel)].
std::vector<double> robustness_sweep(const FourierCoefficients& coeffs,
                                     const Horizon& horizon, double delta_star,
                                     double rel_halfwidth, int n_test,
                                     double hbar = kHbarMevNs);

}  // namespace shuttle
