#include "shuttle/gradient.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace shuttle {

namespace {

constexpr Complex kI{0.0, 1.0};

// Trace is real for skew-Hermitian factors; anything beyond rounding noise
// means mismatched inputs.
double real_trace_checked(const Matrix3c& product, const char* where) {
  const Complex tr = product.trace();
  if (std::abs(tr.imag()) > 1e-10 * std::max(1.0, std::abs(tr.real()))) {
    std::ostringstream msg;
    msg << where << ": nonreal gradient trace, imag = " << tr.imag();
    throw std::runtime_error(msg.str());
  }
  return tr.real();
}

}  // namespace

PhiMatrix phi_matrix(const std::array<double, 3>& omega_rad_per_ns, double dt) {
  if (dt <= 0.0) {
    throw std::invalid_argument("phi_matrix: dt must be positive");
  }
  PhiMatrix phi;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (a == b) {
        phi.value(a, b) = dt;
        continue;
      }
      const double w = omega_rad_per_ns[b] - omega_rad_per_ns[a];
      const double x = w * dt;
      if (std::abs(x) < 1e-6) {
        // Series in x keeps the entry finite and seamless at the crossover.
        phi.value(a, b) = dt * Complex{1.0 - x * x / 6.0, x / 2.0};
      } else {
        // exp(ix) - 1 written as -2 sin^2(x/2) + i sin(x): no cancellation,
        // so the entry stays accurate right down to the crossover.
        const double half = std::sin(0.5 * x);
        phi.value(a, b) = Complex{-2.0 * half * half, std::sin(x)} / (kI * w);
      }
    }
  }
  return phi;
}

Matrix3c integral_conjugation(const StepEig& eig, const Matrix3c& direction,
                              double dt, double hbar) {
  const std::array<double, 3> omega = {eig.gamma[0] / hbar, eig.gamma[1] / hbar,
                                       eig.gamma[2] / hbar};
  const PhiMatrix phi = phi_matrix(omega, dt);
  const Matrix3c projected = eig.t.adjoint() * direction * eig.t;
  return eig.t * hadamard(projected, phi.value) * eig.t.adjoint();
}

PulseGradient pulse_gradient(const Trajectory& traj, const Costates& costates,
                             const PulseTable& pulses) {
  const std::uint64_t hash = pulses.content_hash();
  if (traj.pulse_hash != hash || costates.pulse_hash != hash ||
      traj.detuning != costates.detuning || traj.hbar != costates.hbar) {
    throw std::invalid_argument(
        "pulse_gradient: trajectory and costates come from different pulses");
  }
  const int k_steps = pulses.k_steps;
  if (static_cast<int>(traj.states.size()) != k_steps + 1 ||
      static_cast<int>(costates.lambdas.size()) != k_steps + 1) {
    throw std::invalid_argument("pulse_gradient: size mismatch");
  }

  const Matrix3c& x1 = su3_basis().x(1);
  const Matrix3c& x2 = su3_basis().x(2);

  PulseGradient grad;
  grad.detuning = traj.detuning;
  grad.d_omega12.resize(k_steps);
  grad.d_omega23.resize(k_steps);

  for (int k = 0; k < k_steps; ++k) {
    const Matrix3c& rho = traj.states[k + 1].value;
    const Matrix3c& lambda = costates.lambdas[k + 1];
    const Matrix3c commutator = rho * lambda - lambda * rho;

    const Matrix3c d12 =
        integral_conjugation(traj.eigs[k], x1, traj.dt, traj.hbar);
    const Matrix3c d23 =
        integral_conjugation(traj.eigs[k], x2, traj.dt, traj.hbar);

    // d/d omega U = (1/hbar) (int e^{-iH tau/hbar} X e^{+iH tau/hbar} dtau) U,
    // hence dJ/d omega(k) = (1/hbar) tr([rho(k+1), lambda(k+1)] D(k)).
    grad.d_omega12[k] =
        real_trace_checked(commutator * d12, "pulse_gradient") / traj.hbar;
    grad.d_omega23[k] =
        real_trace_checked(commutator * d23, "pulse_gradient") / traj.hbar;
  }
  return grad;
}

CoefficientGradient coefficient_gradient(
    const std::vector<PulseGradient>& member_grads, const BasisMatrix& basis) {
  if (member_grads.empty()) {
    throw std::invalid_argument("coefficient_gradient: no member gradients");
  }
  Eigen::VectorXd sum12 = Eigen::VectorXd::Zero(basis.k_steps);
  Eigen::VectorXd sum23 = Eigen::VectorXd::Zero(basis.k_steps);
  for (const PulseGradient& g : member_grads) {  // ascending member order
    if (g.d_omega12.size() != basis.k_steps ||
        g.d_omega23.size() != basis.k_steps) {
      throw std::invalid_argument("coefficient_gradient: size mismatch");
    }
    sum12 += g.d_omega12;
    sum23 += g.d_omega23;
  }
  CoefficientGradient grad;
  grad.dp = basis.entries.transpose() * sum12;
  grad.dq = basis.entries.transpose() * sum23;
  return grad;
}

Eigen::VectorXd finite_difference_gradient(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const Eigen::VectorXd& point, double step) {
  if (step <= 0.0) {
    throw std::invalid_argument(
        "finite_difference_gradient: step must be positive");
  }
  Eigen::VectorXd grad(point.size());
  Eigen::VectorXd probe = point;
  for (Eigen::Index i = 0; i < point.size(); ++i) {
    probe[i] = point[i] + step;
    const double plus = objective(probe);
    probe[i] = point[i] - step;
    const double minus = objective(probe);
    probe[i] = point[i];
    grad[i] = (plus - minus) / (2.0 * step);
  }
  return grad;
}

}  // namespace shuttle
