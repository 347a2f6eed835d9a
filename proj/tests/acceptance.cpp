// Acceptance gate for the pulse-design tool. Each numbered block checks one
// shipping requirement and prints exactly one [PASS]/[FAIL] line; the process
// exits with the number of failed checks. Tolerances and runtime budgets are
// pinned in the code on purpose.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracles.hpp"
#include "shuttle/commands.hpp"
#include "shuttle/config.hpp"

using namespace shuttle;
using shuttle::testing::quadrature_conjugation;
using shuttle::testing::series_expm;
using shuttle::testing::uniform;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return std::string(buf);
}

struct MemberPass {
  Trajectory traj;
  Costates costates;
  double objective = 0.0;  // ensemble J at this coefficient point
};

// Forward/backward pass for every member; shared by criteria 1 and 2.
std::vector<MemberPass> ensemble_pass(const UncertaintyEnsemble& ens,
                                      const PulseTable& pulses, double hbar) {
  std::vector<MemberPass> members;
  double j_total = 0.0;
  for (double delta : ens.grid) {
    MemberPass m;
    m.traj = evolve(pulses, delta, hbar);
    m.costates = backward_costates(m.traj);
    j_total += fidelity(m.traj.states.back());
    members.push_back(std::move(m));
  }
  for (MemberPass& m : members) m.objective = j_total;
  return members;
}

CoefficientGradient analytic_gradient(const std::vector<MemberPass>& members,
                                      const PulseTable& pulses,
                                      const BasisMatrix& basis) {
  std::vector<PulseGradient> grads;
  for (const MemberPass& m : members) {
    grads.push_back(pulse_gradient(m.traj, m.costates, pulses));
  }
  return coefficient_gradient(grads, basis);
}

// Worst-case physics invariants along one matched trajectory/costate pair.
struct InvariantReport {
  double unitarity = 0.0;
  double trace = 0.0;
  double purity = 0.0;
  double population_sum = 0.0;
  double telescoping = 0.0;
};

void update_invariants(InvariantReport& r, const Trajectory& traj,
                       const Costates& costates) {
  const double j_final = fidelity(traj.states.back());
  for (const Matrix3c& u : traj.propagators.units) {
    r.unitarity = std::max(
        r.unitarity, (u * u.adjoint() - Matrix3c::Identity()).norm());
  }
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const DensityMatrix& rho = traj.states[k];
    r.trace = std::max(r.trace, rho.trace_error());
    r.purity = std::max(r.purity, std::abs(rho.purity() - 1.0));
    double pop = 0.0;
    for (int d = 0; d < 3; ++d) pop += rho.value(d, d).real();
    r.population_sum = std::max(r.population_sum, std::abs(pop - 1.0));
    const Complex overlap = (costates.lambdas[k] * rho.value).trace();
    r.telescoping = std::max(r.telescoping, std::abs(overlap.real() - j_final));
    r.telescoping = std::max(r.telescoping, std::abs(overlap.imag()));
  }
}

PulseTable random_table(std::mt19937_64& rng, int k_steps, double t_ns,
                        double scale) {
  PulseTable p;
  p.k_steps = k_steps;
  p.dt = t_ns / k_steps;
  p.omega12.resize(k_steps);
  p.omega23.resize(k_steps);
  for (int k = 0; k < k_steps; ++k) {
    p.omega12(k) = uniform(rng, -scale, scale);
    p.omega23(k) = uniform(rng, -scale, scale);
  }
  return p;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

double vec_min(const std::vector<double>& v) {
  double m = v.empty() ? 0.0 : v[0];
  for (double x : v) m = std::min(m, x);
  return m;
}

}  // namespace

int main() {
  std::vector<Verdict> verdicts(10);  // 1-based

  // ---- criterion 1: analytic gradient vs central differences --------------
  // 10 seeded configurations; hbar = 1 so the finite-difference truncation
  // error at h = 1e-6 meV sits far below the 1e-6 relative tolerance.
  std::vector<std::vector<MemberPass>> c1_members;
  {
    const auto start = Clock::now();
    const double hbar = 1.0;
    const int k_steps = 20, m_max = 3, n_points = 3;
    const double t_ns = 20.0, fd_step = 1e-6;
    const BasisMatrix basis = basis_matrix(k_steps, m_max);
    double worst = 0.0;
    bool all_ok = true;
    for (int s = 1; s <= 10; ++s) {
      const double delta_star = 1.0 + 4.0 * (s - 1) / 9.0;  // spans [1, 5]
      const UncertaintyEnsemble ens =
          ensemble_grid(delta_star, 0.2 * delta_star, n_points);
      const FourierCoefficients point = init_coefficients(s, 0.05, m_max);
      const PulseTable pulses = sample_pulses(point, basis, t_ns);
      std::vector<MemberPass> members = ensemble_pass(ens, pulses, hbar);
      const CoefficientGradient grad = analytic_gradient(members, pulses, basis);
      c1_members.push_back(std::move(members));

      const auto objective = [&](const Eigen::VectorXd& v, bool is_p) {
        FourierCoefficients probe = point;
        (is_p ? probe.p : probe.q) = v;
        return aggregate_fidelity(ens, sample_pulses(probe, basis, t_ns), hbar);
      };
      const Eigen::VectorXd fd_p = finite_difference_gradient(
          [&](const Eigen::VectorXd& v) { return objective(v, true); },
          point.p, fd_step);
      const Eigen::VectorXd fd_q = finite_difference_gradient(
          [&](const Eigen::VectorXd& v) { return objective(v, false); },
          point.q, fd_step);
      const double err_p = (grad.dp - fd_p).norm() / fd_p.norm();
      const double err_q = (grad.dq - fd_q).norm() / fd_q.norm();
      worst = std::max({worst, err_p, err_q});
      all_ok = all_ok && err_p < 1e-6 && err_q < 1e-6;
    }
    const double secs = seconds_since(start);
    verdicts[1].pass = all_ok && secs < 10.0;
    verdicts[1].detail = fmt(
        "10 seeded configs, worst relative L2 error %.3e (tol 1e-6), %.2f s "
        "(budget 10 s)",
        worst, secs);
  }

  // ---- criterion 3: closed-form eigensystem vs generic solver -------------
  {
    const auto start = Clock::now();
    std::mt19937_64 rng(2026);
    double worst_residual = 0.0, worst_eval = 0.0;
    int accepted = 0;
    bool finite_ok = true;
    while (accepted < 1000) {
      const HamiltonianParams p{uniform(rng, -5.0, 5.0),
                                uniform(rng, -0.5, 0.5),
                                uniform(rng, -0.5, 0.5)};
      const auto cf = closed_form_eig(p);
      if (!cf) continue;  // degenerate draw, measure zero
      ++accepted;
      const Matrix3c h = hamiltonian(p, HamiltonianForm::kTraceless);
      Matrix3c lam = Matrix3c::Zero();
      for (int a = 0; a < 3; ++a) lam(a, a) = cf->gamma[a];
      worst_residual = std::max(
          worst_residual, (cf->t_matrix * lam * cf->t_matrix.adjoint() - h).norm());
      const EigenDecomposition3 gen = eig_hermitian3(h);
      std::array<double, 3> sorted = cf->gamma;
      std::sort(sorted.begin(), sorted.end());
      for (int a = 0; a < 3; ++a) {
        worst_eval = std::max(worst_eval,
                              std::abs(sorted[a] - gen.eigenvalues[a]));
      }
    }
    // degenerate inputs must route to the generic path and stay finite
    for (const HamiltonianParams& p :
         {HamiltonianParams{2.72, 0.0, 0.0}, HamiltonianParams{0.0, 0.0, 0.0},
          HamiltonianParams{1.0, 1e-11, 0.0}}) {
      if (closed_form_eig(p).has_value()) finite_ok = false;
      const StepEig eig = step_eigensystem(p);
      for (int a = 0; a < 3; ++a) {
        if (!std::isfinite(eig.gamma[a])) finite_ok = false;
      }
      if (!eig.t.allFinite()) finite_ok = false;
    }
    const double secs = seconds_since(start);
    verdicts[3].pass = worst_residual <= 1e-10 && worst_eval <= 1e-10 &&
                       finite_ok && secs < 5.0;
    verdicts[3].detail = fmt(
        "1000 random params: worst residual %.3e, worst eigenvalue gap %.3e "
        "(tol 1e-10), degenerate routing %s, %.2f s (budget 5 s)",
        worst_residual, worst_eval, finite_ok ? "ok" : "BROKEN", secs);
  }

  // ---- criterion 8: oracle equivalence -------------------------------------
  {
    std::mt19937_64 rng(4096);
    double worst_u = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const HamiltonianParams p{uniform(rng, -5.0, 5.0),
                                uniform(rng, -0.2, 0.2),
                                uniform(rng, -0.2, 0.2)};
      const double dt = uniform(rng, 0.05, 1.0);
      const Matrix3c u = step_propagator(p, dt);
      const Matrix3c ref = series_expm(
          Complex(0, -dt / kHbarMevNs) * hamiltonian(p, HamiltonianForm::kTraceless));
      worst_u = std::max(worst_u, (u - ref).norm());
    }
    double worst_ic = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const HamiltonianParams p{uniform(rng, -5.0, 5.0),
                                uniform(rng, -0.2, 0.2),
                                uniform(rng, -0.2, 0.2)};
      const double dt = uniform(rng, 0.02, 0.2);
      const StepEig eig = step_eigensystem(p);
      const Matrix3c h = hamiltonian(p, HamiltonianForm::kTraceless);
      for (int i : {1, 2}) {
        const Matrix3c mine = integral_conjugation(eig, su3_basis().x(i), dt);
        const Matrix3c ref = quadrature_conjugation(h, su3_basis().x(i), dt,
                                                    kHbarMevNs);
        worst_ic = std::max(worst_ic, (mine - ref).norm());
      }
    }
    // sub-step refinement: the piecewise-exact propagator must not move
    const PulseTable base = random_table(rng, 20, 40.0, 0.05);
    const Trajectory coarse = evolve(base, 2.72);
    double worst_refine = 0.0;
    for (int s : {1, 10, 100}) {
      PulseTable fine;
      fine.k_steps = base.k_steps * s;
      fine.dt = base.dt / s;
      fine.omega12.resize(fine.k_steps);
      fine.omega23.resize(fine.k_steps);
      for (int k = 0; k < base.k_steps; ++k) {
        for (int j = 0; j < s; ++j) {
          fine.omega12(k * s + j) = base.omega12(k);
          fine.omega23(k * s + j) = base.omega23(k);
        }
      }
      const Trajectory refined = evolve(fine, 2.72);
      worst_refine = std::max(
          worst_refine,
          (refined.states.back().value - coarse.states.back().value).norm());
    }
    verdicts[8].pass = worst_u <= 1e-10 && worst_ic <= 1e-8 &&
                       worst_refine <= 1e-10;
    verdicts[8].detail = fmt(
        "propagator vs series %.3e (tol 1e-10, 1000 steps); integral vs "
        "quadrature %.3e (tol 1e-8, 100 instances); substep drift %.3e "
        "(tol 1e-10, s=1,10,100)",
        worst_u, worst_ic, worst_refine);
  }

  // ---- criterion 4: baseline design at the nominal detuning ---------------
  const Horizon horizon{100.0, 100};
  const int m_harmonics = 10;
  OptimizerConfig base_opt;
  base_opt.step_size = 3e-8;
  base_opt.objective_tol = 0.0;
  base_opt.seed = 1;
  base_opt.init_scale = 0.01;
  base_opt.target_mean_fidelity = 0.9999;
  RunResult baseline;
  {
    const auto start = Clock::now();
    OptimizerConfig cfg = base_opt;
    cfg.max_iters = 2000;
    baseline = optimize(ensemble_grid(2.72, 0.0, 1), horizon, m_harmonics, cfg);
    const double secs = seconds_since(start);
    const double j_nominal = baseline.final_fidelities[0];
    verdicts[4].pass = j_nominal >= 0.99 && secs <= 600.0;
    verdicts[4].detail = fmt(
        "nominal-only optimization reached fidelity %.6f (need >= 0.99) in %d "
        "iterations, %.1f s (budget 600 s)",
        j_nominal, baseline.iterations_used, secs);
  }

  // ---- criterion 6: robust design over the 11-point ensemble --------------
  RunResult robust;
  {
    const auto start = Clock::now();
    OptimizerConfig cfg = base_opt;
    cfg.max_iters = 3000;
    robust = optimize(ensemble_grid(2.72, 0.2 * 2.72, 11), horizon,
                      m_harmonics, cfg);
    const double secs = seconds_since(start);
    const double min_member = vec_min(robust.final_fidelities);
    verdicts[6].pass = min_member >= 0.95 && secs <= 3600.0;
    verdicts[6].detail = fmt(
        "11-point ensemble optimization: min member fidelity %.6f (need >= "
        "0.95) in %d iterations, %.1f s (budget 3600 s)",
        min_member, robust.iterations_used, secs);
  }

  // ---- criterion 5: the baseline design is fragile off-nominal ------------
  {
    const std::vector<double> sweep =
        robustness_sweep(baseline.coefficients, horizon, 2.72, 0.2, 11);
    const double min_baseline = vec_min(sweep);
    const double min_robust = vec_min(robust.final_fidelities);
    verdicts[5].pass = min_baseline <= min_robust - 0.2;
    verdicts[5].detail = fmt(
        "baseline min fidelity over [0.8, 1.2] delta* is %.6f vs robust %.6f "
        "(gap %.4f, need >= 0.2)",
        min_baseline, min_robust, min_robust - min_baseline);
  }

  // ---- criterion 7: robust design beyond the training range ---------------
  {
    const std::vector<double> sweep =
        robustness_sweep(robust.coefficients, horizon, 2.72, 0.25, 41);
    const double min_out = vec_min(sweep);
    verdicts[7].pass = min_out >= 0.85;
    verdicts[7].detail = fmt(
        "robust pulses over [0.75, 1.25] delta* (41 points): min fidelity "
        "%.6f (need >= 0.85)",
        min_out);
  }

  // ---- criterion 2: propagation physics along criteria 1 and 4 ------------
  {
    InvariantReport r;
    for (const std::vector<MemberPass>& members : c1_members) {
      for (const MemberPass& m : members) {
        update_invariants(r, m.traj, m.costates);
      }
    }
    const PulseTable pulses =
        sample_pulses(baseline.coefficients, horizon.k_steps, horizon.t_ns);
    const Trajectory traj = evolve(pulses, 2.72);
    update_invariants(r, traj, backward_costates(traj));
    verdicts[2].pass = r.unitarity <= 1e-12 && r.trace <= 1e-12 &&
                       r.purity <= 1e-10 && r.population_sum <= 1e-12 &&
                       r.telescoping <= 1e-12;
    verdicts[2].detail = fmt(
        "worst unitarity %.2e, trace %.2e, population sum %.2e (tol 1e-12); "
        "purity %.2e (tol 1e-10); telescoping %.2e (tol 1e-12)",
        r.unitarity, r.trace, r.population_sum, r.purity, r.telescoping);
  }

  // ---- criterion 9: byte-identical artifacts across worker counts ---------
  {
    const fs::path dir = fs::temp_directory_path() / "robust_shuttle_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path out = dir / "out";
    const nlohmann::json config{
        {"delta_star_mev", 2.72}, {"rel_uncertainty", 0.2},
        {"n_ensemble", 5},        {"horizon_ns", 50.0},
        {"k_steps", 25},          {"m_harmonics", 4},
        {"f_max_ghz", 0.1},       {"output_dir", out.string()},
        {"optimizer",
         nlohmann::json{{"step_size", 3e-8},
                        {"max_iters", 25},
                        {"objective_tol", 0.0},
                        {"seed", 1},
                        {"init_scale", 0.01},
                        {"line_search", false},
                        {"target_mean_fidelity", 1.0}}}};
    const fs::path config_path = dir / "config.json";
    {
      std::ofstream f(config_path, std::ios::binary);
      f << config.dump(2) << "\n";
    }

    setenv("ROBUST_SHUTTLE_THREADS", "1", 1);
    const int rc1 = cmd_optimize(config_path.string());
    const std::string pulses_1 = read_file(out / "pulses.csv");
    const std::string coeffs_1 = read_file(out / "coefficients.json");
    const std::string report_1 = read_file(out / "report.json");

    setenv("ROBUST_SHUTTLE_THREADS", "8", 1);
    const int rc8 = cmd_optimize(config_path.string());
    const std::string pulses_8 = read_file(out / "pulses.csv");
    const std::string coeffs_8 = read_file(out / "coefficients.json");
    const std::string report_8 = read_file(out / "report.json");
    unsetenv("ROBUST_SHUTTLE_THREADS");

    // wall time legitimately differs; everything else must be byte-equal
    nlohmann::json ra = nlohmann::json::parse(report_1);
    nlohmann::json rb = nlohmann::json::parse(report_8);
    ra.erase("wall_time_s");
    rb.erase("wall_time_s");
    const bool reports_equal = ra.dump() == rb.dump();
    verdicts[9].pass = rc1 == kExitOk && rc8 == kExitOk &&
                       pulses_1 == pulses_8 && coeffs_1 == coeffs_8 &&
                       reports_equal && !pulses_1.empty();
    verdicts[9].detail = fmt(
        "1 vs 8 workers: pulses.csv %s, coefficients.json %s, report.json "
        "(wall time excluded) %s, exit codes %d/%d",
        pulses_1 == pulses_8 ? "identical" : "DIFFER",
        coeffs_1 == coeffs_8 ? "identical" : "DIFFER",
        reports_equal ? "identical" : "DIFFER", rc1, rc8);
  }

  int failures = 0;
  for (int i = 1; i <= 9; ++i) {
    if (!verdicts[i].pass) ++failures;
    std::printf("[%s] criterion %d: %s\n", verdicts[i].pass ? "PASS" : "FAIL",
                i, verdicts[i].detail.c_str());
  }
  return failures;
}
