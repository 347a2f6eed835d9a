#include "shuttle/controls.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace shuttle {

namespace {

void check_basis_args(int k_steps, int m_max) {
  if (k_steps < 1) {
    throw std::invalid_argument("basis_matrix: k_steps must be >= 1");
  }
  if (m_max < 0) {
    throw std::invalid_argument("basis_matrix: m_max must be >= 0");
  }
  if (2 * m_max + 1 > k_steps) {
    std::ostringstream msg;
    msg << "basis_matrix: 2*m_max+1 = " << 2 * m_max + 1
        << " exceeds k_steps = " << k_steps
        << "; harmonics above the grid rate would alias";
    throw std::invalid_argument(msg.str());
  }
}

void hash_bytes(std::uint64_t& state, const void* data, std::size_t n) {
  // FNV-1a, good enough for a provenance tag.
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    state ^= bytes[i];
    state *= 1099511628211ULL;
  }
}

}  // namespace

std::uint64_t PulseTable::content_hash() const {
  std::uint64_t state = 1469598103934665603ULL;
  hash_bytes(state, &k_steps, sizeof(k_steps));
  hash_bytes(state, &dt, sizeof(dt));
  if (omega12.size() > 0) {
    hash_bytes(state, omega12.data(), sizeof(double) * omega12.size());
  }
  if (omega23.size() > 0) {
    hash_bytes(state, omega23.data(), sizeof(double) * omega23.size());
  }
  return state;
}

Eigen::RowVectorXd basis_row(int k, int k_steps, int m_max) {
  check_basis_args(k_steps, m_max);
  Eigen::RowVectorXd row(2 * m_max + 1);
  row(0) = 1.0;
  const double base = 2.0 * std::numbers::pi * k / k_steps;
  for (int m = 1; m <= m_max; ++m) {
    row(m) = std::cos(m * base);
    row(m_max + m) = std::sin(m * base);
  }
  return row;
}

BasisMatrix basis_matrix(int k_steps, int m_max) {
  check_basis_args(k_steps, m_max);
  BasisMatrix basis;
  basis.k_steps = k_steps;
  basis.m_max = m_max;
  basis.entries.resize(k_steps, 2 * m_max + 1);
  for (int k = 0; k < k_steps; ++k) {
    basis.entries.row(k) = basis_row(k, k_steps, m_max);
  }
  return basis;
}

PulseTable sample_pulses(const FourierCoefficients& coeffs,
                         const BasisMatrix& basis, double horizon_ns) {
  if (horizon_ns <= 0.0) {
    throw std::invalid_argument("sample_pulses: horizon must be positive");
  }
  const int n = 2 * basis.m_max + 1;
  if (coeffs.m_max != basis.m_max || coeffs.p.size() != n ||
      coeffs.q.size() != n) {
    throw std::invalid_argument(
        "sample_pulses: coefficient length does not match 2*m_max+1");
  }
  PulseTable table;
  table.k_steps = basis.k_steps;
  table.dt = horizon_ns / basis.k_steps;
  table.omega12 = basis.entries * coeffs.p;
  table.omega23 = basis.entries * coeffs.q;
  return table;
}

PulseTable sample_pulses(const FourierCoefficients& coeffs, int k_steps,
                         double horizon_ns) {
  return sample_pulses(coeffs, basis_matrix(k_steps, coeffs.m_max), horizon_ns);
}

BandwidthVerdict check_bandwidth(int m_max, double horizon_ns,
                                 double f_max_ghz) {
  if (horizon_ns <= 0.0) {
    throw std::invalid_argument("check_bandwidth: horizon must be positive");
  }
  BandwidthVerdict verdict;
  verdict.max_harmonic_ghz = static_cast<double>(m_max) / horizon_ns;
  verdict.limit_ghz = f_max_ghz;
  verdict.ok = verdict.max_harmonic_ghz <= f_max_ghz;
  return verdict;
}

}  // namespace shuttle
