#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace shuttle {

// Process exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;  // quantitative failure
inline constexpr int kExitUsage = 2;        // usage or configuration error

// Runs the ensemble optimization and writes pulses.csv, coefficients.json and
// report.json into the configured output directory.
int cmd_optimize(const std::string& config_path);

// Evolves stored coefficients at one detuning; writes trajectory.csv.
int cmd_simulate(const std::string& coeffs_path, const std::string& config_path,
                 double delta_mev);

// Fidelity-vs-detuning scan; writes sweep.csv. rel/points default to the
// config's rel_uncertainty/n_ensemble.
int cmd_sweep(const std::string& coeffs_path, const std::string& config_path,
              std::optional<double> rel, std::optional<int> points);

struct GradcheckOptions {
  std::uint64_t seed = 1;
  double fd_step_mev = 1e-6;
  // Test hook: negates the analytic gradient so the check must fail with
  // relative error ~= 2. Hidden from the CLI help.
  bool negate_analytic = false;
};

// Compares the analytic coefficient gradient against central differences at a
// seeded random point; writes gradcheck.json. Exit 0 iff both relative L2
// errors are below 1e-6.
int cmd_gradcheck(const std::string& config_path, const GradcheckOptions& opts);

}  // namespace shuttle
