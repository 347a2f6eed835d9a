// Command-line front end: pulse optimization, simulation, robustness sweeps
// and gradient verification for the three-site shuttling model.

#include <optional>
#include <string>

#include <CLI11.hpp>

#include "shuttle/commands.hpp"
#include "shuttle/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Detuning-robust control pulse design for a three-site "
               "electron shuttle"};
  app.set_version_flag("--version", std::string(shuttle::kToolVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string coeffs_path;
  double delta_mev = 0.0;
  std::optional<double> rel;
  std::optional<int> points;
  shuttle::GradcheckOptions gradcheck;

  CLI::App* optimize = app.add_subcommand(
      "optimize", "Run the ensemble optimization and write artifacts");
  optimize->add_option("config", config_path, "run configuration JSON")
      ->required();

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Evolve stored coefficients at one detuning");
  simulate->add_option("coefficients", coeffs_path, "coefficients.json path")
      ->required();
  simulate->add_option("config", config_path, "run configuration JSON")
      ->required();
  simulate->add_option("--delta", delta_mev, "detuning in meV")->required();

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Scan fidelity across a detuning interval");
  sweep->add_option("coefficients", coeffs_path, "coefficients.json path")
      ->required();
  sweep->add_option("config", config_path, "run configuration JSON")
      ->required();
  sweep->add_option("--rel", rel, "relative half-width of the scan");
  sweep->add_option("--points", points, "number of scan detunings");

  CLI::App* check = app.add_subcommand(
      "gradcheck", "Compare analytic and finite-difference gradients");
  check->add_option("config", config_path, "run configuration JSON")
      ->required();
  check->add_option("--seed", gradcheck.seed, "seed for the probe point");
  check
      ->add_flag("--negate-analytic", gradcheck.negate_analytic,
                 "test hook: flip the analytic gradient sign")
      ->group("");  // hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    // CLI11 returns 0 for --help/--version; anything else is a usage error.
    return code == 0 ? shuttle::kExitOk : shuttle::kExitUsage;
  }

  if (optimize->parsed()) return shuttle::cmd_optimize(config_path);
  if (simulate->parsed()) {
    return shuttle::cmd_simulate(coeffs_path, config_path, delta_mev);
  }
  if (sweep->parsed()) {
    return shuttle::cmd_sweep(coeffs_path, config_path, rel, points);
  }
  if (check->parsed()) return shuttle::cmd_gradcheck(config_path, gradcheck);
  return shuttle::kExitUsage;
}
