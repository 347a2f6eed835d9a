#include "shuttle/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace shuttle {

Matrix3c hadamard(const Matrix3c& a, const Matrix3c& b) {
  return a.cwiseProduct(b);
}

double frobenius_norm_sq(const Matrix3c& a) { return a.squaredNorm(); }

double hermiticity_error(const Matrix3c& a) {
  return (a - a.adjoint().eval()).norm();
}

namespace {

// One complex Jacobi rotation zeroing a(p,q). The rotation angle solves
// m t^2 - d t - m = 0 with m = |a_pq|, d = a_pp - a_qq; the smaller root
// keeps |t| <= 1 for stability.
void jacobi_rotate(Matrix3c& a, Matrix3c& v, int p, int q) {
  const Complex apq = a(p, q);
  const double m = std::abs(apq);
  if (m == 0.0) return;

  const double d = a(p, p).real() - a(q, q).real();
  double t;
  if (d == 0.0) {
    t = 1.0;
  } else {
    const double root = std::sqrt(d * d + 4.0 * m * m);
    t = -((d > 0.0) ? 1.0 : -1.0) * 2.0 * m / (root + std::abs(d));
  }
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const Complex phase = apq / m;
  const Complex s = t * c * phase;

  Matrix3c r = Matrix3c::Identity();
  r(p, p) = c;
  r(p, q) = s;
  r(q, p) = -std::conj(s);
  r(q, q) = c;

  a = (r.adjoint() * a * r).eval();
  // The rotation is designed to annihilate this pair; pin it against rounding.
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  v = (v * r).eval();
}

double off_diagonal_sq(const Matrix3c& a) {
  return std::norm(a(0, 1)) + std::norm(a(0, 2)) + std::norm(a(1, 2));
}

}  // namespace

EigenDecomposition3 eig_hermitian3(const Matrix3c& h) {
  const double herm = hermiticity_error(h);
  const double scale = std::max(1.0, h.norm());
  if (!(herm <= 1e-12 * scale)) {
    std::ostringstream msg;
    msg << "eig_hermitian3: input not Hermitian, ||A - A+||_F = " << herm;
    throw std::invalid_argument(msg.str());
  }

  Matrix3c a = 0.5 * (h + h.adjoint().eval());
  Matrix3c v = Matrix3c::Identity();

  const double stop = 1e-30 * std::max(1e-300, a.squaredNorm());
  for (int sweep = 0; sweep < 40 && off_diagonal_sq(a) > stop; ++sweep) {
    jacobi_rotate(a, v, 0, 1);
    jacobi_rotate(a, v, 0, 2);
    jacobi_rotate(a, v, 1, 2);
  }

  std::array<int, 3> order = {0, 1, 2};
  std::array<double, 3> diag = {a(0, 0).real(), a(1, 1).real(), a(2, 2).real()};
  std::stable_sort(order.begin(), order.end(),
                   [&diag](int i, int j) { return diag[i] < diag[j]; });

  EigenDecomposition3 out;
  for (int j = 0; j < 3; ++j) {
    out.eigenvalues[j] = diag[order[j]];
    out.eigenvectors.col(j) = v.col(order[j]);

    // Phase convention: largest-magnitude component real positive
    // (first such index on ties).
    int imax = 0;
    double best = -1.0;
    for (int i = 0; i < 3; ++i) {
      const double mag = std::abs(out.eigenvectors(i, j));
      if (mag > best) {
        best = mag;
        imax = i;
      }
    }
    const Complex lead = out.eigenvectors(imax, j);
    if (std::abs(lead) > 0.0) {
      out.eigenvectors.col(j) *= std::conj(lead) / std::abs(lead);
    }
  }
  return out;
}

}  // namespace shuttle
