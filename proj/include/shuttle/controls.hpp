#pragma once

#include <cstdint>

#include "shuttle/algebra.hpp"

namespace shuttle {

// Truncated Fourier parameterization of the two tunneling pulses.
// p = (a0, a1..aM, b1..bM) for omega12, q likewise for omega23; length 2M+1.
struct FourierCoefficients {
  Eigen::VectorXd p;
  Eigen::VectorXd q;
  int m_max = 0;
};

// Piecewise-constant pulse samples on the K-step grid, dt = T/K.
struct PulseTable {
  int k_steps = 0;
  double dt = 0.0;  // ns
  Eigen::VectorXd omega12;  // meV, left-endpoint sample per step
  Eigen::VectorXd omega23;

  std::uint64_t content_hash() const;  // provenance tag for gradient passes
};

// Row k holds [1, cos(k m 2pi/K) for m=1..M, sin(k m 2pi/K) for m=1..M],
// so a pulse table is the matrix-vector product G p.
struct BasisMatrix {
  int k_steps = 0;
  int m_max = 0;
  Eigen::MatrixXd entries;  // K x (2M+1)
};

// Single basis row; K-periodic in k. Preconditions as basis_matrix.
Eigen::RowVectorXd basis_row(int k, int k_steps, int m_max);

// Requires k_steps >= 1, m_max >= 0 and 2*m_max+1 <= k_steps (alias guard).
BasisMatrix basis_matrix(int k_steps, int m_max);

PulseTable sample_pulses(const FourierCoefficients& coeffs, int k_steps,
                         double horizon_ns);

// Same, reusing a prebuilt basis (hot path in the optimizer).
PulseTable sample_pulses(const FourierCoefficients& coeffs,
                         const BasisMatrix& basis, double horizon_ns);

struct BandwidthVerdict {
  bool ok = false;
  double max_harmonic_ghz = 0.0;  // m_max / horizon
  double limit_ghz = 0.0;
};

// Highest harmonic must stay at or below f_max. 1/ns == GHz.
BandwidthVerdict check_bandwidth(int m_max, double horizon_ns, double f_max_ghz);

}  // namespace shuttle
