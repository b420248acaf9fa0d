#include "charlab/linalg.hpp"

#include "charlab/error.hpp"

#include <algorithm>
#include <cmath>

namespace charlab {

PivotedCholesky pivoted_cholesky(const std::vector<std::uint32_t>& candidates,
                                 const std::function<Cx(std::uint32_t, std::uint32_t)>& entry,
                                 double rel_tol, std::uint32_t max_rank) {
  const std::size_t m = candidates.size();
  std::vector<double> diag(m);
  double dmax0 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    diag[i] = entry(candidates[i], candidates[i]).real();
    dmax0 = std::max(dmax0, diag[i]);
  }
  const double cutoff = rel_tol * std::max(dmax0, 1e-300);

  PivotedCholesky out;
  // rows[k]: the k-th computed factor column over all candidates.
  std::vector<VecC> cols;
  std::vector<char> used(m, 0);
  while (out.pivots.size() < max_rank) {
    std::size_t best = m;
    double bestd = cutoff;
    for (std::size_t i = 0; i < m; ++i) {
      if (!used[i] && diag[i] > bestd) {
        bestd = diag[i];
        best = i;
      }
    }
    if (best == m) break;
    const std::size_t k = out.pivots.size();
    VecC col(m);
    for (std::size_t i = 0; i < m; ++i) col(i) = used[i] ? Cx(0, 0) : entry(candidates[i], candidates[best]);
    for (std::size_t j = 0; j < k; ++j) {
      const Cx pivval = cols[j](best);
      if (pivval != Cx(0, 0)) {
        for (std::size_t i = 0; i < m; ++i)
          if (!used[i]) col(i) -= cols[j](i) * std::conj(pivval);
      }
    }
    const double d = std::max(col(best).real(), 0.0);
    const double root = std::sqrt(d);
    require(root > 0.0, ErrorKind::Numeric, "pivoted cholesky: vanishing pivot");
    for (std::size_t i = 0; i < m; ++i) col(i) /= root;
    col(best) = Cx(root, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      if (!used[i]) {
        diag[i] -= std::norm(col(i));
        if (diag[i] < 0) diag[i] = 0;
      }
    }
    used[best] = 1;
    diag[best] = 0;
    cols.push_back(std::move(col));
    out.pivots.push_back(candidates[best]);
  }
  double rd = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    if (!used[i]) rd = std::max(rd, diag[i]);
  out.residual_diag_max = rd;

  // Assemble L restricted to the pivot rows, in pivot order.
  const std::size_t r = out.pivots.size();
  // Map candidate index -> position in candidates.
  out.L = MatC::Zero(r, r);
  std::vector<std::size_t> pivot_pos(r);
  for (std::size_t k = 0; k < r; ++k) {
    auto it = std::find(candidates.begin(), candidates.end(), out.pivots[k]);
    pivot_pos[k] = static_cast<std::size_t>(it - candidates.begin());
  }
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = j; i < r; ++i) out.L(i, j) = cols[j](pivot_pos[i]);
  return out;
}

Eigen::VectorXd hermitian_eigenvalues(const MatC& A) {
  Eigen::SelfAdjointEigenSolver<MatC> es(A, Eigen::EigenvaluesOnly);
  require(es.info() == Eigen::Success, ErrorKind::Numeric, "hermitian eigensolve failed");
  return es.eigenvalues();
}

double hermitian_min_eigenvalue(const MatC& A) {
  if (A.rows() == 0) return 0.0;
  return hermitian_eigenvalues(A).minCoeff();
}

MatC psd_nullspace(const MatC& A, double tol) {
  Eigen::SelfAdjointEigenSolver<MatC> es(A);
  require(es.info() == Eigen::Success, ErrorKind::Numeric, "hermitian eigensolve failed");
  const auto& vals = es.eigenvalues();
  const double scale = std::max(1.0, std::abs(vals(vals.size() - 1)));
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    if (vals(i) <= tol * scale) ++count;
  MatC basis(A.rows(), count);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    if (vals(i) <= tol * scale) basis.col(k++) = es.eigenvectors().col(i);
  return basis;
}

NormCert operator_norm_certified(const MatC& A) {
  NormCert out;
  if (A.rows() == 0 || A.cols() == 0) return out;
  const MatC B = A.adjoint() * A;
  Eigen::SelfAdjointEigenSolver<MatC> es(B);
  require(es.info() == Eigen::Success, ErrorKind::Numeric, "eigensolve failed in norm");
  const Eigen::Index top = es.eigenvalues().size() - 1;
  const double lam = std::max(es.eigenvalues()(top), 0.0);
  const VecC u = es.eigenvectors().col(top);
  const double res = (B * u - lam * u).norm();
  // Hermitian perturbation: some eigenvalue of B lies within res of lam, and
  // lambda_max(B) >= u^* B u = lam - O(res); both directions give |err|<=res.
  const double lam_lo = std::max(lam - res, 0.0);
  const double lam_hi = lam + res;
  out.value = std::sqrt(lam);
  out.radius = std::max(std::sqrt(lam_hi) - out.value, out.value - std::sqrt(lam_lo)) + 1e-14 * (1 + out.value);
  return out;
}

RationalLdlReport rational_psd_check(std::vector<std::vector<Rational>> A) {
  const std::size_t n = A.size();
  RationalLdlReport rep;
  rep.min_pivot = Rational(0);
  bool min_set = false;
  std::vector<std::size_t> active(n);
  for (std::size_t i = 0; i < n; ++i) active[i] = i;
  std::size_t rank = 0;
  while (!active.empty()) {
    // Greatest remaining diagonal as pivot (deterministic tie-break: lowest index).
    std::size_t best = 0;
    for (std::size_t i = 1; i < active.size(); ++i)
      if (A[active[i]][active[i]] > A[active[best]][active[best]]) best = i;
    const std::size_t pi = active[best];
    const Rational d = A[pi][pi];
    if (d < 0) {
      rep.psd = false;
      rep.rank = static_cast<std::uint32_t>(rank);
      rep.min_pivot = d;
      return rep;
    }
    if (d == 0) {
      // PSD requires the whole remaining row to vanish.
      for (std::size_t j : active) {
        if (A[pi][j] != 0) {
          rep.psd = false;
          rep.rank = static_cast<std::uint32_t>(rank);
          rep.min_pivot = Rational(0);
          return rep;
        }
      }
      active.erase(active.begin() + static_cast<std::ptrdiff_t>(best));
      continue;
    }
    if (!min_set || d < rep.min_pivot) {
      rep.min_pivot = d;
      min_set = true;
    }
    ++rank;
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best));
    for (std::size_t i : active) {
      if (A[i][pi] == 0) continue;
      const Rational f = A[i][pi] / d;
      for (std::size_t j : active) A[i][j] -= f * A[pi][j];
      A[i][pi] = 0;
    }
  }
  rep.psd = true;
  rep.rank = static_cast<std::uint32_t>(rank);
  if (!min_set) rep.min_pivot = Rational(0);
  return rep;
}

}  // namespace charlab
