#include "shuttle/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace shuttle {

namespace {

constexpr Complex kI{0.0, 1.0};

SuThreeBasis make_basis() {
  SuThreeBasis b;
  b.elements[0] = (Matrix3c() << 0, kI, 0, kI, 0, 0, 0, 0, 0).finished();
  b.elements[1] = (Matrix3c() << 0, 0, 0, 0, 0, kI, 0, kI, 0).finished();
  b.elements[2] = (Matrix3c() << 0, 0, 1, 0, 0, 0, -1, 0, 0).finished();
  b.elements[3] = (Matrix3c() << 0, 1, 0, -1, 0, 0, 0, 0, 0).finished();
  b.elements[4] = (Matrix3c() << 0, 0, 0, 0, 0, 1, 0, -1, 0).finished();
  b.elements[5] = (Matrix3c() << 0, 0, kI, 0, 0, 0, kI, 0, 0).finished();
  b.elements[6] = (Matrix3c() << kI, 0, 0, 0, -kI, 0, 0, 0, 0).finished();
  const double r3 = 1.0 / std::sqrt(3.0);
  b.elements[7] =
      (Matrix3c() << r3 * kI, 0, 0, 0, r3 * kI, 0, 0, 0, -2.0 * r3 * kI)
          .finished();
  return b;
}

}  // namespace

const SuThreeBasis& su3_basis() {
  static const SuThreeBasis basis = make_basis();
  return basis;
}

Matrix3c hamiltonian(const HamiltonianParams& params, HamiltonianForm form) {
  Matrix3c h = Matrix3c::Zero();
  h(0, 1) = -params.omega12;
  h(1, 0) = -params.omega12;
  h(1, 2) = -params.omega23;
  h(2, 1) = -params.omega23;
  h(1, 1) = params.delta;
  if (form == HamiltonianForm::kTraceless) {
    const double shift = params.delta / 3.0;
    h(0, 0) -= shift;
    h(1, 1) -= shift;
    h(2, 2) -= shift;
  }
  return h;
}

double DensityMatrix::trace_error() const {
  return std::abs(value.trace() - Complex{1.0, 0.0});
}

double DensityMatrix::hermitian_error() const {
  return hermiticity_error(value);
}

double DensityMatrix::purity() const { return (value * value).trace().real(); }

double DensityMatrix::min_eigenvalue() const {
  return eig_hermitian3(value).eigenvalues[0];
}

std::pair<DensityMatrix, DensityMatrix> boundary_states() {
  DensityMatrix initial;
  initial.value(0, 0) = 1.0;
  DensityMatrix target;
  target.value(2, 2) = 1.0;
  return {initial, target};
}

UncertaintyEnsemble ensemble_grid(double delta_star, double delta_eps,
                                  int n_points) {
  if (n_points < 1) {
    throw std::invalid_argument("ensemble_grid: n_points must be >= 1");
  }
  if (delta_eps < 0.0) {
    throw std::invalid_argument("ensemble_grid: delta_eps must be >= 0");
  }
  if (n_points == 1 && delta_eps > 0.0) {
    throw std::invalid_argument(
        "ensemble_grid: a single-point grid requires delta_eps == 0");
  }

  UncertaintyEnsemble e;
  e.delta_star = delta_star;
  e.delta_eps = delta_eps;
  e.n_points = n_points;
  e.grid.resize(n_points);
  if (n_points == 1) {
    e.grid[0] = delta_star;
    return e;
  }
  for (int i = 0; i < n_points; ++i) {
    // (2i - (n-1))/(n-1) runs -1..+1 and is exactly 0 at an odd-n midpoint,
    // keeping the endpoints and the nominal point exact.
    const double frac =
        static_cast<double>(2 * i - (n_points - 1)) / (n_points - 1);
    e.grid[i] = delta_star + frac * delta_eps;
  }
  return e;
}

std::optional<ClosedFormEig> closed_form_eig(const HamiltonianParams& params) {
  const double h2 =
      params.omega12 * params.omega12 + params.omega23 * params.omega23;
  const double h = std::sqrt(h2);
  const double abs_delta = std::abs(params.delta);
  const double g = std::sqrt(params.delta * params.delta + 4.0 * h2);
  if (h <= kDegeneracyTol) return std::nullopt;

  // g - |delta| computed cancellation-free; it vanishes only with h.
  const double g_plus = g + abs_delta;
  const double g_minus = 4.0 * h2 / g_plus;
  if (g_minus <= kDegeneracyTol) return std::nullopt;

  const double gpd = (params.delta >= 0.0) ? g_plus : g_minus;   // g + delta
  const double gmd = (params.delta >= 0.0) ? g_minus : g_plus;   // g - delta

  ClosedFormEig out;
  out.g = g;
  out.h = h;
  out.gamma = {-params.delta / 3.0, (params.delta + 3.0 * g) / 6.0,
               (params.delta - 3.0 * g) / 6.0};

  const double n2 = std::sqrt(g * gpd / 2.0);
  const double n3 = std::sqrt(g * gmd / 2.0);
  Matrix3c t = Matrix3c::Zero();
  t(0, 0) = -params.omega23 / h;
  t(2, 0) = params.omega12 / h;
  t(0, 1) = params.omega12 / n2;
  t(1, 1) = -std::sqrt(gpd / (2.0 * g));
  t(2, 1) = params.omega23 / n2;
  t(0, 2) = params.omega12 / n3;
  t(1, 2) = std::sqrt(gmd / (2.0 * g));
  t(2, 2) = params.omega23 / n3;

  // Columns are unit norm analytically; renormalize to absorb rounding.
  for (int j = 0; j < 3; ++j) t.col(j).normalize();
  out.t_matrix = t;
  return out;
}

}  // namespace shuttle
