#include "shuttle/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "shuttle/threading.hpp"

namespace shuttle {

namespace {

// Uniform in [-scale, scale] from the top 53 bits of mt19937_64 draws; this
// mapping is platform-independent (documented in the README).
double next_uniform_signed(std::mt19937_64& rng, double scale) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return scale * (2.0 * u - 1.0);
}

struct PassResult {
  double objective = 0.0;
  std::vector<double> member_fidelities;
  CoefficientGradient grad;
};

// Forward + backward + gradient for every ensemble member at one point.
PassResult full_pass(const UncertaintyEnsemble& ensemble,
                     const BasisMatrix& basis, const FourierCoefficients& coeffs,
                     double horizon_ns, double hbar) {
  const PulseTable pulses = sample_pulses(coeffs, basis, horizon_ns);
  const int n = ensemble.n_points;
  std::vector<PulseGradient> grads(n);
  std::vector<double> fids(n);
  parallel_for_index(n, [&](int i) {
    const Trajectory traj = evolve(pulses, ensemble.grid[i], hbar);
    const Costates costates = backward_costates(traj);
    grads[i] = pulse_gradient(traj, costates, pulses);
    fids[i] = fidelity(traj.states.back());
  });
  PassResult pass;
  pass.member_fidelities = std::move(fids);
  for (double j_n : pass.member_fidelities) pass.objective += j_n;
  pass.grad = coefficient_gradient(grads, basis);
  return pass;
}

double objective_only(const UncertaintyEnsemble& ensemble,
                      const BasisMatrix& basis,
                      const FourierCoefficients& coeffs, double horizon_ns,
                      double hbar) {
  return aggregate_fidelity(ensemble, sample_pulses(coeffs, basis, horizon_ns),
                            hbar);
}

void check_config(const OptimizerConfig& config) {
  if (config.step_size <= 0.0) {
    throw std::invalid_argument("optimize: step_size must be positive");
  }
  if (config.max_iters < 1) {
    throw std::invalid_argument("optimize: max_iters must be >= 1");
  }
  if (config.objective_tol < 0.0) {
    throw std::invalid_argument("optimize: objective_tol must be >= 0");
  }
  if (config.init_scale < 0.0) {
    throw std::invalid_argument("optimize: init_scale must be >= 0");
  }
  if (config.target_mean_fidelity < 0.0 || config.target_mean_fidelity > 1.0) {
    throw std::invalid_argument(
        "optimize: target_mean_fidelity must lie in [0, 1]");
  }
}

}  // namespace

FourierCoefficients init_coefficients(std::uint64_t seed, double scale,
                                      int m_max) {
  if (m_max < 0) {
    throw std::invalid_argument("init_coefficients: m_max must be >= 0");
  }
  if (scale < 0.0) {
    throw std::invalid_argument("init_coefficients: scale must be >= 0");
  }
  const int n = 2 * m_max + 1;
  FourierCoefficients coeffs;
  coeffs.m_max = m_max;
  coeffs.p = Eigen::VectorXd::Zero(n);
  coeffs.q = Eigen::VectorXd::Zero(n);
  if (scale == 0.0) return coeffs;  // exact zeros, no generator draws

  std::mt19937_64 rng(seed);
  for (int i = 0; i < n; ++i) coeffs.p[i] = next_uniform_signed(rng, scale);
  for (int i = 0; i < n; ++i) coeffs.q[i] = next_uniform_signed(rng, scale);
  return coeffs;
}

RunResult optimize(const UncertaintyEnsemble& ensemble, const Horizon& horizon,
                   int m_max, const OptimizerConfig& config, double hbar) {
  check_config(config);
  if (ensemble.n_points < 1 ||
      ensemble.grid.size() != static_cast<std::size_t>(ensemble.n_points)) {
    throw std::invalid_argument("optimize: invalid ensemble");
  }
  if (horizon.t_ns <= 0.0 || horizon.k_steps < 1) {
    throw std::invalid_argument("optimize: invalid horizon");
  }

  const BasisMatrix basis = basis_matrix(horizon.k_steps, m_max);
  const double n_points = static_cast<double>(ensemble.n_points);

  RunResult result;
  result.coefficients = init_coefficients(config.seed, config.init_scale, m_max);

  PassResult pass =
      full_pass(ensemble, basis, result.coefficients, horizon.t_ns, hbar);
  result.history.push_back(pass.objective);

  int consecutive_drops = 0;
  double j_prev = pass.objective;
  bool stopped = false;

  if (j_prev / n_points >= config.target_mean_fidelity) {
    result.converged = true;
    result.stop_reason = "target mean fidelity reached at the seed point";
    stopped = true;
  }

  for (int iter = 1; iter <= config.max_iters && !stopped; ++iter) {
    FourierCoefficients candidate = result.coefficients;
    double j_new;

    if (config.line_search) {
      double alpha = config.step_size;
      bool improved = false;
      for (int backtrack = 0; backtrack < 30; ++backtrack) {
        candidate.p = result.coefficients.p + alpha * pass.grad.dp;
        candidate.q = result.coefficients.q + alpha * pass.grad.dq;
        j_new = objective_only(ensemble, basis, candidate, horizon.t_ns, hbar);
        if (j_new >= j_prev) {
          improved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!improved) {
        result.converged = true;
        result.stop_reason = "line search found no ascent step";
        break;
      }
    } else {
      candidate.p = result.coefficients.p + config.step_size * pass.grad.dp;
      candidate.q = result.coefficients.q + config.step_size * pass.grad.dq;
    }

    result.coefficients = candidate;
    pass = full_pass(ensemble, basis, result.coefficients, horizon.t_ns, hbar);
    j_new = pass.objective;
    result.history.push_back(j_new);
    result.iterations_used = iter;

    if (!config.line_search) {
      consecutive_drops = (j_new < j_prev) ? consecutive_drops + 1 : 0;
      if (consecutive_drops >= 25) {
        result.converged = false;
        result.stop_reason =
            "objective decreased for 25 consecutive iterations; "
            "reduce step_size";
        break;
      }
    }
    if (j_new / n_points >= config.target_mean_fidelity) {
      result.converged = true;
      result.stop_reason = "target mean fidelity reached";
      break;
    }
    if (std::abs(j_new - j_prev) < config.objective_tol) {
      result.converged = true;
      result.stop_reason = "objective change below tolerance";
      break;
    }
    j_prev = j_new;
  }

  if (result.stop_reason.empty()) {
    result.converged = stopped;
    result.stop_reason = "iteration budget exhausted";
  }

  // Fresh per-detuning evaluation of the returned coefficients.
  const PulseTable pulses =
      sample_pulses(result.coefficients, basis, horizon.t_ns);
  result.final_fidelities.resize(ensemble.n_points);
  parallel_for_index(ensemble.n_points, [&](int i) {
    const double f =
        fidelity(evolve(pulses, ensemble.grid[i], hbar).states.back());
    result.final_fidelities[i] = std::clamp(f, 0.0, 1.0);
  });
  return result;
}

std::vector<double> robustness_sweep(const FourierCoefficients& coeffs,
                                     const Horizon& horizon, double delta_star,
                                     double rel_halfwidth, int n_test,
                                     double hbar) {
  if (rel_halfwidth < 0.0) {
    throw std::invalid_argument("robustness_sweep: rel_halfwidth must be >= 0");
  }
  const UncertaintyEnsemble grid =
      ensemble_grid(delta_star, rel_halfwidth * delta_star, n_test);
  const PulseTable pulses =
      sample_pulses(coeffs, horizon.k_steps, horizon.t_ns);
  std::vector<double> fids(n_test);
  parallel_for_index(n_test, [&](int i) {
    fids[i] = fidelity(evolve(pulses, grid.grid[i], hbar).states.back());
  });
  return fids;
}

}  // namespace shuttle
