#pragma once

#include <functional>
#include <vector>

#include "shuttle/propagation.hpp"

namespace shuttle {

// Phase-average factors for a constant-Hamiltonian step:
//   Phi[a][b] = (exp(i (w_b - w_a) dt) - 1) / (i (w_b - w_a)),  a != b
//   Phi[a][a] = dt
// with frequencies w in rad/ns, so entries are in ns and bounded by dt.
struct PhiMatrix {
  Matrix3c value;
};

// Near-degenerate off-diagonals (|w_b - w_a| * dt < 1e-6 rad) switch to a
// short series to avoid cancellation; the crossover is seamless.
PhiMatrix phi_matrix(const std::array<double, 3>& omega_rad_per_ns, double dt);

// Closed form of int_0^dt exp(-i H tau / hbar) X exp(+i H tau / hbar) dtau
// using the step eigensystem: T ((T+ X T) o Phi) T+.
Matrix3c integral_conjugation(const StepEig& eig, const Matrix3c& direction,
                              double dt, double hbar = kHbarMevNs);

// dJ/d omega12(k) and dJ/d omega23(k) for one ensemble member.
struct PulseGradient {
  Eigen::VectorXd d_omega12;
  Eigen::VectorXd d_omega23;
  double detuning = 0.0;
};

// Exact step-level gradient: 1/hbar tr([rho(k+1), lambda(k+1)] D_i(k)) where
// D_i is the conjugated integral of the tunneling generator X_i. Trajectory
// and costates must stem from the same pulses/detuning (checked).
PulseGradient pulse_gradient(const Trajectory& traj, const Costates& costates,
                             const PulseTable& pulses);

struct CoefficientGradient {
  Eigen::VectorXd dp;
  Eigen::VectorXd dq;
};

// Chain rule onto Fourier coefficients: dp = G^T sum_n d_omega12(n), summed
// over members in ascending order for bit-reproducibility.
CoefficientGradient coefficient_gradient(
    const std::vector<PulseGradient>& member_grads, const BasisMatrix& basis);

// Central differences, one objective probe pair per component.
Eigen::VectorXd finite_difference_gradient(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const Eigen::VectorXd& point, double step);

}  // namespace shuttle
