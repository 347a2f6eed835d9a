#include "shuttle/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace shuttle {

namespace {

using nlohmann::json;

[[noreturn]] void fail_field(const std::string& field, const std::string& why) {
  throw ConfigError("config field '" + field + "': " + why);
}

const json& require_field(const json& j, const std::string& field) {
  if (!j.contains(field)) fail_field(field, "missing");
  return j.at(field);
}

double number_field(const json& j, const std::string& field) {
  const json& v = require_field(j, field);
  if (!v.is_number()) fail_field(field, "must be a number");
  return v.get<double>();
}

int int_field(const json& j, const std::string& field) {
  const json& v = require_field(j, field);
  if (!v.is_number_integer()) fail_field(field, "must be an integer");
  return v.get<int>();
}

std::string string_field(const json& j, const std::string& field) {
  const json& v = require_field(j, field);
  if (!v.is_string()) fail_field(field, "must be a string");
  return v.get<std::string>();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << text;
  if (!out) throw ConfigError("write failed: " + path);
}

json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from_json(const json& arr, const std::string& field) {
  if (!arr.is_array()) fail_field(field, "must be an array of numbers");
  Eigen::VectorXd v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) fail_field(field, "must be an array of numbers");
    v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  }
  return v;
}

}  // namespace

RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  c.delta_star_mev = number_field(j, "delta_star_mev");
  c.rel_uncertainty = number_field(j, "rel_uncertainty");
  c.n_ensemble = int_field(j, "n_ensemble");
  c.horizon_ns = number_field(j, "horizon_ns");
  c.k_steps = int_field(j, "k_steps");
  c.m_harmonics = int_field(j, "m_harmonics");
  c.f_max_ghz = number_field(j, "f_max_ghz");
  if (j.contains("hbar_mev_ns")) c.hbar_mev_ns = number_field(j, "hbar_mev_ns");
  c.output_dir = string_field(j, "output_dir");

  if (j.contains("optimizer")) {
    const json& o = j.at("optimizer");
    if (!o.is_object()) fail_field("optimizer", "must be an object");
    if (o.contains("step_size")) c.optimizer.step_size = number_field(o, "step_size");
    if (o.contains("max_iters")) c.optimizer.max_iters = int_field(o, "max_iters");
    if (o.contains("objective_tol")) {
      c.optimizer.objective_tol = number_field(o, "objective_tol");
    }
    if (o.contains("seed")) {
      const json& v = o.at("seed");
      if (!v.is_number_integer() || v.get<long long>() < 0) {
        fail_field("optimizer.seed", "must be a non-negative integer");
      }
      c.optimizer.seed = v.get<std::uint64_t>();
    }
    if (o.contains("init_scale")) c.optimizer.init_scale = number_field(o, "init_scale");
    if (o.contains("line_search")) {
      const json& v = o.at("line_search");
      if (!v.is_boolean()) fail_field("optimizer.line_search", "must be a boolean");
      c.optimizer.line_search = v.get<bool>();
    }
    if (o.contains("target_mean_fidelity")) {
      c.optimizer.target_mean_fidelity = number_field(o, "target_mean_fidelity");
    }
  }

  if (!(c.delta_star_mev > 0.0)) fail_field("delta_star_mev", "must be > 0");
  if (c.rel_uncertainty < 0.0 || c.rel_uncertainty >= 1.0) {
    fail_field("rel_uncertainty", "must lie in [0, 1)");
  }
  if (c.n_ensemble < 1) fail_field("n_ensemble", "must be >= 1");
  if (c.n_ensemble == 1 && c.rel_uncertainty != 0.0) {
    fail_field("rel_uncertainty", "must be 0 when n_ensemble is 1");
  }
  if (!(c.horizon_ns > 0.0)) fail_field("horizon_ns", "must be > 0");
  if (c.k_steps < 1) fail_field("k_steps", "must be >= 1");
  if (c.m_harmonics < 0) fail_field("m_harmonics", "must be >= 0");
  if (2 * c.m_harmonics + 1 > c.k_steps) {
    fail_field("m_harmonics", "2*m_harmonics+1 must not exceed k_steps");
  }
  if (!(c.f_max_ghz > 0.0)) fail_field("f_max_ghz", "must be > 0");
  if (!(c.hbar_mev_ns > 0.0)) fail_field("hbar_mev_ns", "must be > 0");
  if (!(c.optimizer.step_size > 0.0)) fail_field("optimizer.step_size", "must be > 0");
  if (c.optimizer.max_iters < 1) fail_field("optimizer.max_iters", "must be >= 1");
  if (c.optimizer.objective_tol < 0.0) {
    fail_field("optimizer.objective_tol", "must be >= 0");
  }
  if (c.optimizer.init_scale < 0.0) fail_field("optimizer.init_scale", "must be >= 0");
  if (c.optimizer.target_mean_fidelity < 0.0 ||
      c.optimizer.target_mean_fidelity > 1.0) {
    fail_field("optimizer.target_mean_fidelity", "must lie in [0, 1]");
  }
  if (c.output_dir.empty()) fail_field("output_dir", "must not be empty");
  return c;
}

RunConfig load_run_config(const std::string& path) {
  return run_config_from_json(load_json_file(path));
}

json run_config_to_json(const RunConfig& c) {
  return json{{"delta_star_mev", c.delta_star_mev},
              {"rel_uncertainty", c.rel_uncertainty},
              {"n_ensemble", c.n_ensemble},
              {"horizon_ns", c.horizon_ns},
              {"k_steps", c.k_steps},
              {"m_harmonics", c.m_harmonics},
              {"f_max_ghz", c.f_max_ghz},
              {"hbar_mev_ns", c.hbar_mev_ns},
              {"optimizer",
               json{{"step_size", c.optimizer.step_size},
                    {"max_iters", c.optimizer.max_iters},
                    {"objective_tol", c.optimizer.objective_tol},
                    {"seed", c.optimizer.seed},
                    {"init_scale", c.optimizer.init_scale},
                    {"line_search", c.optimizer.line_search},
                    {"target_mean_fidelity", c.optimizer.target_mean_fidelity}}},
              {"output_dir", c.output_dir}};
}

UncertaintyEnsemble ensemble_from(const RunConfig& c) {
  return ensemble_grid(c.delta_star_mev, c.rel_uncertainty * c.delta_star_mev,
                       c.n_ensemble);
}

Horizon horizon_from(const RunConfig& c) { return {c.horizon_ns, c.k_steps}; }

std::string format_full_precision(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_pulses_csv(const std::string& path, const PulseTable& pulses) {
  std::ostringstream out;
  out << "k,t_ns,omega12_mev,omega23_mev\n";
  for (int k = 0; k < pulses.k_steps; ++k) {
    out << k << ',' << format_full_precision(k * pulses.dt) << ','
        << format_full_precision(pulses.omega12[k]) << ','
        << format_full_precision(pulses.omega23[k]) << '\n';
  }
  write_text(path, out.str());
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ostringstream out;
  out << "k,t_ns,rho11,rho22,rho33\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const Matrix3c& rho = traj.states[k].value;
    out << k << ',' << format_full_precision(k * traj.dt) << ','
        << format_full_precision(rho(0, 0).real()) << ','
        << format_full_precision(rho(1, 1).real()) << ','
        << format_full_precision(rho(2, 2).real()) << '\n';
  }
  write_text(path, out.str());
}

void write_sweep_csv(const std::string& path, const std::vector<double>& deltas,
                     const std::vector<double>& fidelities) {
  if (deltas.size() != fidelities.size()) {
    throw ConfigError("write_sweep_csv: length mismatch");
  }
  std::ostringstream out;
  out << "delta_mev,fidelity\n";
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    out << format_full_precision(deltas[i]) << ','
        << format_full_precision(fidelities[i]) << '\n';
  }
  write_text(path, out.str());
}

void write_coefficients_json(const std::string& path,
                             const FourierCoefficients& coeffs) {
  const json j{{"m_harmonics", coeffs.m_max},
               {"p", vector_to_json(coeffs.p)},
               {"q", vector_to_json(coeffs.q)}};
  write_text(path, j.dump(2) + "\n");
}

FourierCoefficients load_coefficients_json(const std::string& path) {
  const json j = load_json_file(path);
  FourierCoefficients coeffs;
  if (!j.contains("m_harmonics") || !j.at("m_harmonics").is_number_integer()) {
    fail_field("m_harmonics", "missing or not an integer");
  }
  coeffs.m_max = j.at("m_harmonics").get<int>();
  coeffs.p = vector_from_json(require_field(j, "p"), "p");
  coeffs.q = vector_from_json(require_field(j, "q"), "q");
  if (coeffs.m_max < 0) fail_field("m_harmonics", "must be >= 0");
  const Eigen::Index expect = 2 * coeffs.m_max + 1;
  if (coeffs.p.size() != expect || coeffs.q.size() != expect) {
    fail_field("p/q", "length must equal 2*m_harmonics+1");
  }
  return coeffs;
}

void write_report_json(const std::string& path, const RunConfig& config,
                       const RunResult& result, double wall_time_s) {
  json j{{"config", run_config_to_json(config)},
         {"seed", config.optimizer.seed},
         {"tool_version", kToolVersion},
         {"iterations_used", result.iterations_used},
         {"converged", result.converged},
         {"stop_reason", result.stop_reason},
         {"objective_history", result.history},
         {"final_fidelities", result.final_fidelities},
         {"grid_detunings_mev", ensemble_from(config).grid},
         {"wall_time_s", wall_time_s}};
  write_text(path, j.dump(2) + "\n");
}

}  // namespace shuttle
