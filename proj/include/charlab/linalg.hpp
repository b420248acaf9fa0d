#pragma once

#include "charlab/rational.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace charlab {

using Cx = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;

// Result of a greedy diagonal-pivoted Cholesky of a PSD Hermitian form given
// by callbacks.  pivots[i] are the selected column indices; L is lower
// triangular with L L^* equal to the pivot principal submatrix.
struct PivotedCholesky {
  std::vector<std::uint32_t> pivots;
  MatC L;
  double residual_diag_max = 0.0;  // max leftover diagonal among candidates
};

// entry(i, j) must return the Hermitian form on candidate indices; candidates
// are searched greedily by residual diagonal (ties: smallest index).  Stops
// when the residual diagonal falls below rel_tol * max_initial_diag or
// max_rank columns were taken.
PivotedCholesky pivoted_cholesky(const std::vector<std::uint32_t>& candidates,
                                 const std::function<Cx(std::uint32_t, std::uint32_t)>& entry,
                                 double rel_tol, std::uint32_t max_rank);

// Hermitian eigensolve helpers.
Eigen::VectorXd hermitian_eigenvalues(const MatC& A);
double hermitian_min_eigenvalue(const MatC& A);

// Orthonormal basis of the (approximate) nullspace of a PSD Hermitian matrix:
// eigenvectors with eigenvalue <= tol * max(1, |lambda_max|).
MatC psd_nullspace(const MatC& A, double tol);

// Largest singular value with a certified enclosure radius, obtained from the
// residual of the top eigenpair of A^* A.
struct NormCert {
  double value = 0.0;
  double radius = 0.0;  // |true - value| <= radius
};
NormCert operator_norm_certified(const MatC& A);

// Exact pivoted LDL^T of a symmetric rational matrix; reports whether the
// matrix is PSD (all pivots >= 0 and no nonzero row at a zero pivot).
struct RationalLdlReport {
  bool psd = false;
  std::uint32_t rank = 0;
  Rational min_pivot;  // least pivot encountered (0 when rank-deficient PSD)
};
RationalLdlReport rational_psd_check(std::vector<std::vector<Rational>> A);

}  // namespace charlab
