#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "shuttle/optimizer.hpp"

namespace shuttle {

inline constexpr const char* kToolVersion = "robust-shuttle 0.1.0";

// Configuration or usage problem; carries a field-level message.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  double delta_star_mev = 0.0;
  double rel_uncertainty = 0.0;  // in [0, 1)
  int n_ensemble = 1;
  double horizon_ns = 0.0;
  int k_steps = 0;
  int m_harmonics = 0;
  double f_max_ghz = 0.0;
  double hbar_mev_ns = kHbarMevNs;
  OptimizerConfig optimizer;
  std::string output_dir;
};

// Throws ConfigError naming the file or offending field.
RunConfig load_run_config(const std::string& path);
RunConfig run_config_from_json(const nlohmann::json& j);

// Normalized echo: every field present, defaults applied. Loading the echo
// reproduces the run.
nlohmann::json run_config_to_json(const RunConfig& config);

UncertaintyEnsemble ensemble_from(const RunConfig& config);
Horizon horizon_from(const RunConfig& config);

// 17 significant digits, '.' decimal separator, locale-independent.
std::string format_full_precision(double value);

// CSV writers: header row, LF line endings, full-precision values.
void write_pulses_csv(const std::string& path, const PulseTable& pulses);
void write_trajectory_csv(const std::string& path, const Trajectory& traj);
void write_sweep_csv(const std::string& path, const std::vector<double>& deltas,
                     const std::vector<double>& fidelities);

void write_coefficients_json(const std::string& path,
                             const FourierCoefficients& coeffs);
FourierCoefficients load_coefficients_json(const std::string& path);

void write_report_json(const std::string& path, const RunConfig& config,
                       const RunResult& result, double wall_time_s);

}  // namespace shuttle
