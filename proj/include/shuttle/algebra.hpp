#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>

namespace shuttle {

using Complex = std::complex<double>;
using Matrix3c = Eigen::Matrix3cd;

// Entrywise (Hadamard) product.
Matrix3c hadamard(const Matrix3c& a, const Matrix3c& b);

// Squared Frobenius norm, tr(A A+). Real and non-negative.
double frobenius_norm_sq(const Matrix3c& a);

// ||A - A+||_F, zero for Hermitian input.
double hermiticity_error(const Matrix3c& a);

struct EigenDecomposition3 {
  std::array<double, 3> eigenvalues;  // ascending
  Matrix3c eigenvectors;              // orthonormal columns, one per eigenvalue
};

// Eigensystem of a 3x3 complex Hermitian matrix via cyclic Jacobi rotations.
// Eigenvalues come back ascending; each eigenvector column is phase-fixed so
// its largest-magnitude component is real and positive. Deterministic:
// identical input bits give identical output bits. Throws std::invalid_argument
// if the input is not Hermitian within 1e-12 (relative to max(1, ||A||_F)).
EigenDecomposition3 eig_hermitian3(const Matrix3c& h);

}  // namespace shuttle
