#include "shuttle/commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "shuttle/config.hpp"
#include "shuttle/threading.hpp"

namespace shuttle {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

// Library preconditions surface as invalid_argument; both are usage-class.
template <typename Fn>
int guard(Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
}

void require_bandwidth(const RunConfig& config) {
  const BandwidthVerdict verdict =
      check_bandwidth(config.m_harmonics, config.horizon_ns, config.f_max_ghz);
  if (!verdict.ok) {
    std::ostringstream msg;
    msg << "bandwidth check failed: highest harmonic "
        << verdict.max_harmonic_ghz << " GHz exceeds f_max_ghz = "
        << verdict.limit_ghz;
    throw ConfigError(msg.str());
  }
}

fs::path prepare_output_dir(const RunConfig& config) {
  const fs::path dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output_dir: " + config.output_dir);
  return dir;
}

FourierCoefficients load_matching_coefficients(const std::string& coeffs_path,
                                               const RunConfig& config) {
  FourierCoefficients coeffs = load_coefficients_json(coeffs_path);
  if (coeffs.m_max != config.m_harmonics) {
    std::ostringstream msg;
    msg << "coefficients use m_harmonics = " << coeffs.m_max
        << " but the config requires " << config.m_harmonics;
    throw ConfigError(msg.str());
  }
  return coeffs;
}

// Analytic ensemble gradient at one coefficient point.
CoefficientGradient analytic_gradient(const UncertaintyEnsemble& ensemble,
                                      const BasisMatrix& basis,
                                      const FourierCoefficients& coeffs,
                                      double horizon_ns, double hbar) {
  const PulseTable pulses = sample_pulses(coeffs, basis, horizon_ns);
  std::vector<PulseGradient> grads(ensemble.n_points);
  parallel_for_index(ensemble.n_points, [&](int i) {
    const Trajectory traj = evolve(pulses, ensemble.grid[i], hbar);
    grads[i] = pulse_gradient(traj, backward_costates(traj), pulses);
  });
  return coefficient_gradient(grads, basis);
}

double relative_l2_error(const Eigen::VectorXd& candidate,
                         const Eigen::VectorXd& reference) {
  const double ref_norm = reference.norm();
  if (ref_norm == 0.0) return candidate.norm() == 0.0 ? 0.0 : HUGE_VAL;
  return (candidate - reference).norm() / ref_norm;
}

}  // namespace

int cmd_optimize(const std::string& config_path) {
  return guard([&]() {
    const RunConfig config = load_run_config(config_path);
    require_bandwidth(config);
    const fs::path dir = prepare_output_dir(config);

    const auto start = Clock::now();
    const RunResult result =
        optimize(ensemble_from(config), horizon_from(config),
                 config.m_harmonics, config.optimizer, config.hbar_mev_ns);
    const double wall_s =
        std::chrono::duration<double>(Clock::now() - start).count();

    const PulseTable pulses = sample_pulses(
        result.coefficients, config.k_steps, config.horizon_ns);
    write_pulses_csv((dir / "pulses.csv").string(), pulses);
    write_coefficients_json((dir / "coefficients.json").string(),
                            result.coefficients);
    write_report_json((dir / "report.json").string(), config, result, wall_s);

    double min_fid = 1.0;
    double mean_fid = 0.0;
    for (double f : result.final_fidelities) {
      min_fid = std::min(min_fid, f);
      mean_fid += f;
    }
    mean_fid /= static_cast<double>(result.final_fidelities.size());

    std::cout << "optimize: " << result.iterations_used << " iterations, "
              << (result.converged ? "converged" : "not converged") << " ("
              << result.stop_reason << ")\n"
              << "mean fidelity " << mean_fid << ", min fidelity " << min_fid
              << "\nartifacts written to " << dir.string() << "\n";

    const bool diverged = !result.converged &&
                          result.stop_reason.find("decreased") != std::string::npos;
    return diverged ? kExitCheckFailed : kExitOk;
  });
}

int cmd_simulate(const std::string& coeffs_path, const std::string& config_path,
                 double delta_mev) {
  return guard([&]() {
    const RunConfig config = load_run_config(config_path);
    if (!std::isfinite(delta_mev)) {
      throw ConfigError("--delta must be a finite detuning in meV");
    }
    require_bandwidth(config);
    const fs::path dir = prepare_output_dir(config);

    const FourierCoefficients coeffs =
        load_matching_coefficients(coeffs_path, config);
    const PulseTable pulses =
        sample_pulses(coeffs, config.k_steps, config.horizon_ns);
    const Trajectory traj = evolve(pulses, delta_mev, config.hbar_mev_ns);
    write_trajectory_csv((dir / "trajectory.csv").string(), traj);

    std::cout << "simulate: delta = " << delta_mev << " meV, final fidelity "
              << fidelity(traj.states.back()) << "\nwrote "
              << (dir / "trajectory.csv").string() << "\n";
    return kExitOk;
  });
}

int cmd_sweep(const std::string& coeffs_path, const std::string& config_path,
              std::optional<double> rel, std::optional<int> points) {
  return guard([&]() {
    const RunConfig config = load_run_config(config_path);
    require_bandwidth(config);
    const fs::path dir = prepare_output_dir(config);

    const double rel_halfwidth = rel.value_or(config.rel_uncertainty);
    const int n_test = points.value_or(config.n_ensemble);
    if (rel_halfwidth < 0.0 || rel_halfwidth >= 1.0) {
      throw ConfigError("--rel must lie in [0, 1)");
    }
    if (n_test < 1) throw ConfigError("--points must be >= 1");

    const FourierCoefficients coeffs =
        load_matching_coefficients(coeffs_path, config);
    const std::vector<double> fids =
        robustness_sweep(coeffs, horizon_from(config), config.delta_star_mev,
                         rel_halfwidth, n_test, config.hbar_mev_ns);
    const UncertaintyEnsemble grid = ensemble_grid(
        config.delta_star_mev, rel_halfwidth * config.delta_star_mev, n_test);
    write_sweep_csv((dir / "sweep.csv").string(), grid.grid, fids);

    double min_fid = 1.0;
    for (double f : fids) min_fid = std::min(min_fid, f);
    std::cout << "sweep: " << n_test << " detunings, rel halfwidth "
              << rel_halfwidth << ", min fidelity " << min_fid << "\nwrote "
              << (dir / "sweep.csv").string() << "\n";
    return kExitOk;
  });
}

int cmd_gradcheck(const std::string& config_path, const GradcheckOptions& opts) {
  return guard([&]() {
    const RunConfig config = load_run_config(config_path);
    require_bandwidth(config);
    const fs::path dir = prepare_output_dir(config);

    const UncertaintyEnsemble ensemble = ensemble_from(config);
    const BasisMatrix basis = basis_matrix(config.k_steps, config.m_harmonics);
    const FourierCoefficients point = init_coefficients(
        opts.seed, config.optimizer.init_scale, config.m_harmonics);

    CoefficientGradient analytic = analytic_gradient(
        ensemble, basis, point, config.horizon_ns, config.hbar_mev_ns);
    if (opts.negate_analytic) {
      analytic.dp = -analytic.dp;
      analytic.dq = -analytic.dq;
    }

    const auto objective_p = [&](const Eigen::VectorXd& p) {
      FourierCoefficients probe = point;
      probe.p = p;
      return aggregate_fidelity(
          ensemble, sample_pulses(probe, basis, config.horizon_ns),
          config.hbar_mev_ns);
    };
    const auto objective_q = [&](const Eigen::VectorXd& q) {
      FourierCoefficients probe = point;
      probe.q = q;
      return aggregate_fidelity(
          ensemble, sample_pulses(probe, basis, config.horizon_ns),
          config.hbar_mev_ns);
    };
    const Eigen::VectorXd fd_p =
        finite_difference_gradient(objective_p, point.p, opts.fd_step_mev);
    const Eigen::VectorXd fd_q =
        finite_difference_gradient(objective_q, point.q, opts.fd_step_mev);

    const double error_p = relative_l2_error(analytic.dp, fd_p);
    const double error_q = relative_l2_error(analytic.dq, fd_q);
    constexpr double kTol = 1e-6;
    const bool pass = error_p < kTol && error_q < kTol;

    const json report{{"seed", opts.seed},
                      {"fd_step_mev", opts.fd_step_mev},
                      {"tolerance", kTol},
                      {"error_p", error_p},
                      {"error_q", error_q},
                      {"analytic_norm_p", analytic.dp.norm()},
                      {"analytic_norm_q", analytic.dq.norm()},
                      {"fd_norm_p", fd_p.norm()},
                      {"fd_norm_q", fd_q.norm()},
                      {"pass", pass},
                      {"tool_version", kToolVersion}};
    std::ofstream out((dir / "gradcheck.json").string(), std::ios::binary);
    out << report.dump(2) << "\n";

    std::cout << "gradcheck: error_p = " << error_p << ", error_q = " << error_q
              << " (tolerance " << kTol << ") -> "
              << (pass ? "pass" : "FAIL") << "\n";
    return pass ? kExitOk : kExitCheckFailed;
  });
}

}  // namespace shuttle
