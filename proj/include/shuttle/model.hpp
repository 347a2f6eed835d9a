#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "shuttle/algebra.hpp"

namespace shuttle {

// hbar in meV*ns. Dividing an energy in meV by this gives rad/ns.
inline constexpr double kHbarMevNs = 6.582119569e-4;

// Guard for the closed-form eigensystem (meV): below this the analytic
// denominators degenerate and the generic solver takes over.
inline constexpr double kDegeneracyTol = 1e-9;

// Skew-Hermitian traceless su(3) basis. Elements are pairwise orthogonal
// under tr(Xi Xj+); X1 and X2 generate the 1-2 and 2-3 tunneling terms.
struct SuThreeBasis {
  std::array<Matrix3c, 8> elements;

  // 1-based accessor matching the conventional numbering X1..X8.
  const Matrix3c& x(int index) const { return elements.at(index - 1); }
};

const SuThreeBasis& su3_basis();

struct HamiltonianParams {
  double delta = 0.0;    // middle-site detuning, meV
  double omega12 = 0.0;  // site 1-2 tunneling amplitude, meV
  double omega23 = 0.0;  // site 2-3 tunneling amplitude, meV
};

enum class HamiltonianForm { kFull, kTraceless };

// Chain Hamiltonian in the site basis: off-diagonals -omega12, -omega23 and
// middle-site energy delta. The traceless form subtracts (delta/3) I, which
// only shifts a global phase under evolution.
Matrix3c hamiltonian(const HamiltonianParams& params, HamiltonianForm form);

struct DensityMatrix {
  Matrix3c value = Matrix3c::Zero();

  double trace_error() const;      // |tr - 1|
  double hermitian_error() const;  // ||rho - rho+||_F
  double purity() const;           // tr(rho^2), real part
  double min_eigenvalue() const;
};

// (initial, target) = (site-1 occupation, site-3 occupation).
std::pair<DensityMatrix, DensityMatrix> boundary_states();

struct UncertaintyEnsemble {
  double delta_star = 0.0;  // nominal detuning, meV
  double delta_eps = 0.0;   // half-width of the uncertainty interval, meV
  int n_points = 0;
  std::vector<double> grid;  // n_points detunings spanning [star-eps, star+eps]
};

// Evenly spaced detuning grid with exact endpoints and (for odd n) an exact
// midpoint at delta_star. n_points == 1 requires delta_eps == 0.
UncertaintyEnsemble ensemble_grid(double delta_star, double delta_eps, int n_points);

struct ClosedFormEig {
  // Eigenvalues of the traceless Hamiltonian, in the fixed order
  // (-delta/3, (delta+3g)/6, (delta-3g)/6); they sum to zero.
  std::array<double, 3> gamma;
  Matrix3c t_matrix;  // unit-norm eigenvector columns matching gamma
  double g = 0.0;     // sqrt(delta^2 + 4 omega23^2 + 4 omega12^2)
  double h = 0.0;     // sqrt(omega23^2 + omega12^2)
};

// Analytic eigensystem of the traceless Hamiltonian. Returns nullopt in the
// degenerate regime (h or g - |delta| within kDegeneracyTol), signalling the
// caller to fall back to the generic solver; never produces NaN.
std::optional<ClosedFormEig> closed_form_eig(const HamiltonianParams& params);

}  // namespace shuttle
