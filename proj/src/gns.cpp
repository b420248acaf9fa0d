#include "charlab/gns.hpp"

#include "charlab/error.hpp"
#include "charlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <utility>

namespace charlab {

namespace {

// Gaussian-rational reading of an exact value: re = (z + conj z)/2,
// im = (z - conj z) * (-i) / 2; fails for irrational cyclotomics.
std::optional<RationalComplex> gaussian_of(const Cyclotomic& z) {
  const Cyclotomic zc = z.conj();
  const auto re2 = (z + zc).as_rational();
  if (!re2) return std::nullopt;
  const auto im2 = ((z - zc) * Cyclotomic::root_power(4, 3)).as_rational();
  if (!im2) return std::nullopt;
  return RationalComplex(*re2 / 2, *im2 / 2);
}

double inf_norm(const MatC& A) { return A.cwiseAbs().maxCoeff(); }

// --- exact pivot selection -------------------------------------------------
// Hermitian outer-product elimination over Gaussian rationals; returns the
// pivot order plus the float factor L (pivot Gram = L L^*).
struct ExactPivotResult {
  std::vector<std::uint32_t> pivots;
  MatC L;
};

ExactPivotResult exact_pivot_factor(const GroupHandle& G, const ConjClasses& cls,
                                    const std::vector<RationalComplex>& class_vals) {
  const std::uint32_t N = G.size();
  auto entry = [&](std::uint32_t i, std::uint32_t j) {
    return class_vals[cls.class_of[G.mul(G.inv(i), j)]];
  };
  std::vector<std::vector<RationalComplex>> R(N, std::vector<RationalComplex>(N));
  for (std::uint32_t i = 0; i < N; ++i)
    for (std::uint32_t j = 0; j < N; ++j) R[i][j] = entry(i, j);

  ExactPivotResult out;
  std::vector<Rational> diag_scale;                      // pivot values d_k
  std::vector<std::vector<RationalComplex>> pivot_cols;  // residual columns at selection
  std::vector<char> used(N, 0);
  for (;;) {
    std::uint32_t best = N;
    Rational bestd(0);
    for (std::uint32_t i = 0; i < N; ++i) {
      if (used[i]) continue;
      require(R[i][i].is_real(), ErrorKind::Internal, "exact elimination: diagonal not real");
      if (R[i][i].re > bestd) {
        bestd = R[i][i].re;
        best = i;
      }
    }
    if (best == N) break;
    std::vector<RationalComplex> col(N);
    for (std::uint32_t i = 0; i < N; ++i) col[i] = used[i] ? RationalComplex() : R[i][best];
    for (std::uint32_t i = 0; i < N; ++i) {
      if (used[i] || i == best) continue;
      for (std::uint32_t j = 0; j < N; ++j) {
        if (used[j] || j == best) continue;
        const RationalComplex t = col[i] * col[j].conj();
        R[i][j] = R[i][j] - RationalComplex(t.re / bestd, t.im / bestd);
      }
    }
    used[best] = 1;
    out.pivots.push_back(best);
    diag_scale.push_back(bestd);
    pivot_cols.push_back(std::move(col));
  }
  for (std::uint32_t i = 0; i < N; ++i)
    require(used[i] || R[i][i].re == 0, ErrorKind::Validation,
            "gns: exact elimination found a negative residual; Gram is not positive semidefinite");

  const std::size_t r = out.pivots.size();
  out.L = MatC::Zero(r, r);
  for (std::size_t k = 0; k < r; ++k) {
    const double root = std::sqrt(to_double(diag_scale[k]));
    for (std::size_t i = k; i < r; ++i)
      out.L(i, k) = pivot_cols[k][out.pivots[i]].to_complex() / root;
  }
  return out;
}

}  // namespace

// --- model methods ----------------------------------------------------------

VecC GnsModel::coords(std::uint32_t g) const {
  VecC w(n);
  for (std::uint32_t i = 0; i < n; ++i) w(i) = phi_of(group->mul(group->inv(pivots[i]), g));
  return L.triangularView<Eigen::Lower>().solve(w);
}

MatC GnsModel::pi_of(std::uint32_t g) const {
  MatC C(n, n);
  for (std::uint32_t k = 0; k < n; ++k) C.col(k) = coords(group->mul(g, pivots[k]));
  // pi(g) = C L^{-*}
  return L.triangularView<Eigen::Lower>().solve(C.adjoint()).adjoint();
}

MatC GnsModel::rho_of(std::uint32_t g) const {
  MatC C(n, n);
  const std::uint32_t gi = group->inv(g);
  for (std::uint32_t k = 0; k < n; ++k) C.col(k) = coords(group->mul(pivots[k], gi));
  return L.triangularView<Eigen::Lower>().solve(C.adjoint()).adjoint();
}

MatC GnsModel::conj_of(std::uint32_t g) const { return pi_of(g) * rho_of(g); }

VecC GnsModel::apply_pi(std::uint32_t g, const VecC& x) const {
  const auto w = group->word(g);
  VecC y = x;
  for (auto it = w.rbegin(); it != w.rend(); ++it) y = pi_gen[*it] * y;
  return y;
}

VecC GnsModel::apply_rho(std::uint32_t g, const VecC& x) const {
  const auto w = group->word(g);
  VecC y = x;
  for (auto it = w.rbegin(); it != w.rend(); ++it) y = rho_gen[*it] * y;
  return y;
}

VecC GnsModel::apply_conj(std::uint32_t g, const VecC& x) const {
  return apply_pi(g, apply_rho(g, x));
}

// --- construction -----------------------------------------------------------

GnsModel gns(const Trace& phi, const GnsOptions& opt) {
  require(phi.backend() == Trace::Backend::FiniteClassFunction, ErrorKind::Validation,
          "gns: needs a trace on an enumerated finite group");
  require(opt.rank_tol > 0 && opt.rank_tol <= 1e-2, ErrorKind::Validation,
          "gns: rank tolerance out of (0, 1e-2]");
  const auto& G = *phi.group();
  const auto& cls = phi.classes();
  const std::uint32_t N = G.size();

  if (opt.validate_trace) {
    const auto rep = is_trace(phi, 1e-9, opt.seed);
    require(rep.all_pass(), ErrorKind::Validation,
            "gns: input fails the trace axioms (" + rep.regime + ")");
  }

  GnsModel m;
  m.group = phi.group();
  m.cls = cls;
  m.trace_label = phi.label();
  m.phi_class.resize(cls.count());
  for (std::uint32_t c = 0; c < cls.count(); ++c) m.phi_class[c] = phi.class_value(c);

  auto entry = [&](std::uint32_t i, std::uint32_t j) {
    return m.phi_class[cls.class_of[G.mul(G.inv(i), j)]];
  };

  if (opt.exact) {
    require(N <= 200, ErrorKind::Budget, "gns: exact mode is limited to |G| <= 200");
    require(phi.exact(), ErrorKind::Validation, "gns: exact mode needs exact trace values");
    std::vector<RationalComplex> cg(cls.count());
    for (std::uint32_t c = 0; c < cls.count(); ++c) {
      const auto g2 = gaussian_of(*phi.exact_class_value(c));
      require(g2.has_value(), ErrorKind::Validation,
              "gns: exact mode needs rational or Gaussian-rational values");
      cg[c] = *g2;
    }
    auto ex = exact_pivot_factor(G, cls, cg);
    m.pivots = std::move(ex.pivots);
    m.L = std::move(ex.L);
    m.exact_rank = true;
    m.certification = "exact rational elimination over the full group";
  } else {
    std::vector<std::uint32_t> cand;
    bool sampled = false;
    if (N <= opt.candidate_budget) {
      cand.resize(N);
      for (std::uint32_t i = 0; i < N; ++i) cand[i] = i;
    } else {
      sampled = true;
      std::set<std::uint32_t> seen;
      auto push = [&](std::uint32_t g) {
        if (seen.insert(g).second) cand.push_back(g);
      };
      push(G.identity());
      for (auto s : G.generators()) push(s);
      for (std::uint32_t c = 0; c < cls.count(); ++c) push(cls.rep[c]);
      auto rng = make_rng(opt.seed, "gns.candidates");
      std::uniform_int_distribution<std::uint32_t> pick(0, N - 1);
      while (cand.size() < opt.candidate_budget) push(pick(rng));
    }
    auto run = [&](const std::vector<std::uint32_t>& c) {
      return pivoted_cholesky(c, entry, opt.rank_tol, opt.dim_budget + 1);
    };
    auto fac = run(cand);
    if (sampled && opt.expected_rank && fac.pivots.size() < *opt.expected_rank &&
        cand.size() < N) {
      // widen the sample once before giving up
      std::set<std::uint32_t> seen(cand.begin(), cand.end());
      auto rng = make_rng(opt.seed, "gns.candidates.retry");
      std::uniform_int_distribution<std::uint32_t> pick(0, N - 1);
      const std::size_t target = std::min<std::size_t>(N, std::size_t(cand.size()) * 4);
      while (cand.size() < target) {
        const std::uint32_t g = pick(rng);
        if (seen.insert(g).second) cand.push_back(g);
      }
      fac = run(cand);
    }
    require(fac.pivots.size() <= opt.dim_budget, ErrorKind::Budget,
            "gns: model dimension exceeds the budget");
    m.pivots = fac.pivots;
    m.L = fac.L;
    if (!sampled) {
      m.certification = "residual diagonal swept over the full group";
    } else if (opt.expected_rank) {
      require(fac.pivots.size() >= *opt.expected_rank, ErrorKind::Numeric,
              "gns: rank fell short of the declared value; pivot sample may be incomplete");
      require(fac.pivots.size() <= *opt.expected_rank, ErrorKind::Numeric,
              "gns: rank exceeds the declared value");
      m.certification = "sampled candidates; rank matches the declared value";
    }
    // (sampled without a declared rank: spot check below, after coords exist)
  }
  m.n = static_cast<std::uint32_t>(m.pivots.size());
  require(m.n >= 1, ErrorKind::Internal, "gns: empty model");
  require(m.n <= opt.dim_budget, ErrorKind::Budget, "gns: model dimension exceeds the budget");
  if (opt.expected_rank)
    require(m.n == *opt.expected_rank, ErrorKind::Numeric,
            "gns: rank disagrees with the declared value");

  m.v = m.coords(G.identity());
  if (m.certification.empty()) {
    auto rng = make_rng(opt.seed, "gns.spotcheck");
    std::uniform_int_distribution<std::uint32_t> pick(0, N - 1);
    double worst = 0.0;
    for (int t = 0; t < 500; ++t) {
      const std::uint32_t g = pick(rng);
      const double res = 1.0 - m.coords(g).squaredNorm();
      worst = std::max(worst, std::abs(res));
    }
    require(worst <= 100 * opt.rank_tol, ErrorKind::Numeric,
            "gns: sampled pivot span misses part of the space (residual " + std::to_string(worst) + ")");
    m.certification = "sampled candidates; residual spot check at 500 points";
  }

  for (auto s : G.generators()) {
    m.pi_gen.push_back(m.pi_of(s));
    m.rho_gen.push_back(m.rho_of(s));
  }

  // Model checks: unitarity, left/right commutation, cyclic-vector identity,
  // and the reconstruction sweep over the whole group.
  const MatC eye = MatC::Identity(m.n, m.n);
  for (std::size_t i = 0; i < m.pi_gen.size(); ++i) {
    require(inf_norm(m.pi_gen[i] * m.pi_gen[i].adjoint() - eye) <= 1e-8,
            ErrorKind::Numeric, "gns: left translation image is not unitary (incomplete span?)");
    require(inf_norm(m.rho_gen[i] * m.rho_gen[i].adjoint() - eye) <= 1e-8,
            ErrorKind::Numeric, "gns: right translation image is not unitary (incomplete span?)");
    for (std::size_t j = 0; j < m.rho_gen.size(); ++j)
      require(inf_norm(m.pi_gen[i] * m.rho_gen[j] - m.rho_gen[j] * m.pi_gen[i]) <= 1e-8,
              ErrorKind::Numeric, "gns: left and right translations fail to commute");
    const std::uint32_t s = G.generators()[i];
    require((m.pi_gen[i] * m.v - m.rho_of(G.inv(s)) * m.v).cwiseAbs().maxCoeff() <= 1e-9,
            ErrorKind::Numeric, "gns: cyclic vector identity failed");
  }

  // <pi(g)v, v> = y^* w(g) with y = L^{-*} v; O(n) per element.
  const VecC y = m.L.adjoint().triangularView<Eigen::Upper>().solve(m.v);
  double worst = 0.0;
  for (std::uint32_t g = 0; g < N; ++g) {
    Cx val(0, 0);
    for (std::uint32_t i = 0; i < m.n; ++i)
      val += std::conj(y(i)) * m.phi_of(G.mul(G.inv(m.pivots[i]), g));
    worst = std::max(worst, std::abs(val - m.phi_of(g)));
  }
  m.reconstruction_error = worst;
  require(worst <= 1e-10, ErrorKind::Numeric,
          "gns: reconstruction identity failed (max deviation " + std::to_string(worst) + ")");
  return m;
}

// --- conjugation representation ----------------------------------------------

std::vector<MatC> conjugation_rep(const GnsModel& m) {
  std::vector<MatC> out;
  out.reserve(m.pi_gen.size());
  for (std::size_t i = 0; i < m.pi_gen.size(); ++i) out.push_back(m.pi_gen[i] * m.rho_gen[i]);
  return out;
}

std::uint32_t conjugation_invariant_dim(const GnsModel& m) {
  const MatC eye = MatC::Identity(m.n, m.n);
  MatC A = MatC::Zero(m.n, m.n);
  for (const auto& c : conjugation_rep(m)) {
    const MatC d = c - eye;
    A += d.adjoint() * d;
  }
  return static_cast<std::uint32_t>(psd_nullspace(A, 1e-10).cols());
}

bool is_character(const Trace& phi, const GnsOptions& opt) {
  return conjugation_invariant_dim(gns(phi, opt)) == 1;
}

// --- commutant machinery ------------------------------------------------------

namespace {

struct CommutantResult {
  std::uint32_t dim = 0;
  std::vector<MatC> basis;
};

// Seeded self-adjoint element of the algebra generated by `mats` (which are
// closed under adjoints up to words, being unitary group images).
MatC seeded_selfadjoint(const std::vector<MatC>& mats, std::uint32_t n, std::mt19937_64& rng,
                        int level) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<MatC> words;
  words.push_back(MatC::Identity(n, n));
  for (const auto& A : mats) words.push_back(A);
  if (level >= 2)
    for (const auto& A : mats)
      for (const auto& B : mats) words.push_back(A * B);
  if (level >= 3) {
    const std::size_t base = words.size();
    std::uniform_int_distribution<std::size_t> pick(0, base - 1);
    for (std::size_t t = 0; t < 2 * base; ++t) words.push_back(words[pick(rng)] * words[pick(rng)]);
  }
  MatC W = MatC::Zero(n, n);
  for (const auto& w : words) W += Cx(gauss(rng), gauss(rng)) * w;
  return W + MatC(W.adjoint());
}

// Joint commutant {X : X A = A X for all A in mats}, computed blockwise in the
// eigenbasis of a random self-adjoint algebra element: any solution is block
// diagonal there, so only sum(block^2) unknowns remain, and the block
// constraints X_b U_{bc} = U_{bc} X_c over all pairs are stacked into a normal
// matrix whose nullspace is the commutant.  Correct for any draw; a degenerate
// draw only inflates the unknown count.
CommutantResult commutant_core(const std::vector<MatC>& mats, std::uint32_t n,
                               std::uint64_t seed, std::string_view tag, bool materialize) {
  CommutantResult out;
  if (mats.empty()) {
    out.dim = n * n;
    if (materialize) {
      for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j < n; ++j) {
          MatC E = MatC::Zero(n, n);
          E(i, j) = 1.0;
          out.basis.push_back(std::move(E));
        }
    }
    return out;
  }

  std::string last_err;
  for (int attempt = 0; attempt < 3; ++attempt) {
    auto rng = make_rng(seed + std::uint64_t(attempt), tag);
    const MatC H = seeded_selfadjoint(mats, n, rng, attempt == 0 ? 2 : 3);
    Eigen::SelfAdjointEigenSolver<MatC> es(H);
    require(es.info() == Eigen::Success, ErrorKind::Numeric, "commutant: eigensolve failed");
    const auto& ev = es.eigenvalues();
    const double span = std::max(1.0, std::abs(ev(n - 1)) + std::abs(ev(0)));
    std::vector<std::uint32_t> bsize;
    bsize.push_back(1);
    for (std::uint32_t i = 1; i < n; ++i) {
      if (ev(i) - ev(i - 1) > 1e-6 * span)
        bsize.push_back(1);
      else
        ++bsize.back();
    }
    std::vector<std::uint32_t> boff(bsize.size() + 1, 0);   // eigenvector offsets
    std::vector<std::uint32_t> uoff(bsize.size() + 1, 0);   // unknown offsets
    for (std::size_t b = 0; b < bsize.size(); ++b) {
      boff[b + 1] = boff[b] + bsize[b];
      uoff[b + 1] = uoff[b] + bsize[b] * bsize[b];
    }
    const std::uint32_t munk = uoff[bsize.size()];
    if (munk > 4096 && attempt < 2) continue;
    require(munk <= 4096, ErrorKind::Budget, "commutant: reduced unknown count exceeds 4096");

    const MatC& Q = es.eigenvectors();
    MatC Nmat = MatC::Zero(munk, munk);
    for (const auto& A : mats) {
      const MatC V = Q.adjoint() * A * Q;
      for (std::size_t b = 0; b < bsize.size(); ++b) {
        for (std::size_t c = 0; c < bsize.size(); ++c) {
          const std::uint32_t mb = bsize[b], mc = bsize[c];
          const MatC U = V.block(boff[b], boff[c], mb, mc);
          if (b == c) {
            MatC J = MatC::Zero(std::size_t(mb) * mc, std::size_t(mb) * mb);
            for (std::uint32_t al = 0; al < mb; ++al)
              for (std::uint32_t be = 0; be < mc; ++be) {
                const std::uint32_t row = al * mc + be;
                for (std::uint32_t ga = 0; ga < mb; ++ga) J(row, al * mb + ga) += U(ga, be);
                for (std::uint32_t de = 0; de < mb; ++de) J(row, de * mb + be) -= U(al, de);
              }
            Nmat.block(uoff[b], uoff[b], mb * mb, mb * mb) += J.adjoint() * J;
          } else {
            const std::uint32_t cols = mb * mb + mc * mc;
            MatC J = MatC::Zero(std::size_t(mb) * mc, cols);
            for (std::uint32_t al = 0; al < mb; ++al)
              for (std::uint32_t be = 0; be < mc; ++be) {
                const std::uint32_t row = al * mc + be;
                for (std::uint32_t ga = 0; ga < mb; ++ga) J(row, al * mb + ga) += U(ga, be);
                for (std::uint32_t de = 0; de < mc; ++de)
                  J(row, mb * mb + de * mc + be) -= U(al, de);
              }
            const MatC JJ = J.adjoint() * J;
            Nmat.block(uoff[b], uoff[b], mb * mb, mb * mb) += JJ.topLeftCorner(mb * mb, mb * mb);
            Nmat.block(uoff[b], uoff[c], mb * mb, mc * mc) +=
                JJ.topRightCorner(mb * mb, mc * mc);
            Nmat.block(uoff[c], uoff[b], mc * mc, mb * mb) +=
                JJ.bottomLeftCorner(mc * mc, mb * mb);
            Nmat.block(uoff[c], uoff[c], mc * mc, mc * mc) +=
                JJ.bottomRightCorner(mc * mc, mc * mc);
          }
        }
      }
    }

    Eigen::SelfAdjointEigenSolver<MatC> ns(Nmat);
    require(ns.info() == Eigen::Success, ErrorKind::Numeric, "commutant: eigensolve failed");
    const auto& lam = ns.eigenvalues();
    const double scale = std::max(1.0, lam(munk - 1));
    std::uint32_t dim = 0;
    while (dim < munk && lam(dim) <= 1e-10 * scale) ++dim;
    // demand a clear spectral gap so the dimension is unambiguous
    if (dim < munk && lam(dim) < 1e-7 * scale) {
      last_err = "commutant: no spectral gap at the nullspace boundary";
      continue;
    }

    out.dim = dim;
    out.basis.clear();
    bool ok = true;
    if (materialize) {
      for (std::uint32_t t = 0; t < dim && ok; ++t) {
        MatC X = MatC::Zero(n, n);
        for (std::size_t b = 0; b < bsize.size(); ++b) {
          const std::uint32_t mb = bsize[b];
          MatC Xb(mb, mb);
          for (std::uint32_t i = 0; i < mb; ++i)
            for (std::uint32_t j = 0; j < mb; ++j) Xb(i, j) = ns.eigenvectors()(uoff[b] + i * mb + j, t);
          const auto Qb = Q.middleCols(boff[b], mb);
          X += Qb * Xb * Qb.adjoint();
        }
        for (const auto& A : mats)
          if (inf_norm(X * A - A * X) > 1e-7 * (1.0 + inf_norm(A))) ok = false;
        out.basis.push_back(std::move(X));
      }
    }
    if (!ok) {
      last_err = "commutant: a basis element fails to commute";
      continue;
    }
    return out;
  }
  fail_numeric(last_err.empty() ? "commutant: unknown-count budget exceeded on every attempt"
                                : last_err);
}

std::vector<MatC> all_generator_images(const GnsModel& m) {
  std::vector<MatC> mats = m.pi_gen;
  mats.insert(mats.end(), m.rho_gen.begin(), m.rho_gen.end());
  return mats;
}

std::vector<MatC> minimal_projections_from(const std::vector<MatC>& zbasis,
                                           const std::vector<MatC>& check_mats,
                                           std::uint32_t n, std::uint64_t seed) {
  const std::size_t z = zbasis.size();
  require(z >= 1, ErrorKind::Internal, "projections: empty center basis");
  std::string last_err = "projections: no admissible draw";
  for (int attempt = 0; attempt < 5; ++attempt) {
    auto rng = make_rng(seed + std::uint64_t(attempt), "gns.projections");
    std::normal_distribution<double> gauss(0.0, 1.0);
    MatC A = MatC::Zero(n, n);
    for (const auto& B : zbasis) A += Cx(gauss(rng), gauss(rng)) * B;
    const MatC S = A + MatC(A.adjoint());
    Eigen::SelfAdjointEigenSolver<MatC> es(S);
    require(es.info() == Eigen::Success, ErrorKind::Numeric, "projections: eigensolve failed");
    const auto& ev = es.eigenvalues();
    const double span = std::max(1.0, std::abs(ev(n - 1)) + std::abs(ev(0)));
    std::vector<std::pair<std::uint32_t, std::uint32_t>> clusters;  // (start, len)
    clusters.emplace_back(0, 1);
    for (std::uint32_t i = 1; i < n; ++i) {
      if (ev(i) - ev(i - 1) > 1e-7 * span)
        clusters.emplace_back(i, 1);
      else
        ++clusters.back().second;
    }
    if (clusters.size() != z) {
      last_err = "projections: eigenvalue clusters do not match the center dimension";
      continue;
    }
    std::vector<MatC> projs;
    MatC sum = MatC::Zero(n, n);
    bool ok = true;
    for (const auto& [start, len] : clusters) {
      const auto Qc = es.eigenvectors().middleCols(start, len);
      MatC P = Qc * Qc.adjoint();
      if (inf_norm(P * P - P) > 1e-8 || inf_norm(P - P.adjoint()) > 1e-10) ok = false;
      for (const auto& M : check_mats)
        if (inf_norm(P * M - M * P) > 1e-8) ok = false;
      sum += P;
      projs.push_back(std::move(P));
    }
    if (inf_norm(sum - MatC::Identity(n, n)) > 1e-8) ok = false;
    if (!ok) {
      last_err = "projections: a spectral projection failed verification";
      continue;
    }
    return projs;
  }
  fail_numeric(last_err);
}

}  // namespace

CenterData center(const GnsModel& m, std::uint64_t seed) {
  require(m.n <= 128, ErrorKind::Budget, "center: model dimension exceeds 128");
  CenterData out;
  out.commutant = commutant_core(m.pi_gen, m.n, seed, "gns.commutant", true).basis;
  out.algebra = commutant_core(m.rho_gen, m.n, seed, "gns.algebra", true).basis;
  out.center = commutant_core(all_generator_images(m), m.n, seed, "gns.center", true).basis;
  require(out.center.size() <= out.commutant.size() && out.center.size() <= out.algebra.size(),
          ErrorKind::Internal, "center: center larger than the algebra");
  out.projections = minimal_projections_from(out.center, all_generator_images(m), m.n, seed);
  return out;
}

std::vector<MatC> central_projections(const GnsModel& m, std::uint64_t seed) {
  require(m.n <= 512, ErrorKind::Budget, "central projections: model dimension exceeds 512");
  const auto mats = all_generator_images(m);
  const auto z = commutant_core(mats, m.n, seed, "gns.center", true);
  return minimal_projections_from(z.basis, mats, m.n, seed);
}

std::uint32_t fd_subrep_detector(const GnsModel& m) {
  require(m.n <= 512, ErrorKind::Budget, "subrep detector: model dimension exceeds 512");
  const auto a = commutant_core(m.pi_gen, m.n, 1, "gns.fd", false);
  const auto b = commutant_core(m.pi_gen, m.n, 101, "gns.fd.check", false);
  require(a.dim == b.dim, ErrorKind::Numeric,
          "subrep detector: two independent draws disagree on the dimension");
  return a.dim;
}

// --- decomposition -------------------------------------------------------------

std::vector<TraceComponent> decompose_trace(const Trace& phi,
                                            std::shared_ptr<const CharacterTable> table,
                                            const GnsOptions& opt) {
  const GnsModel m = gns(phi, opt);
  const auto& G = *m.group;
  if (table) {
    require(table->group == G.descriptor() && table->order == G.size(), ErrorKind::Validation,
            "decompose: table belongs to a different group");
  } else {
    table = std::make_shared<CharacterTable>(compute_character_table(G, m.cls));
  }
  const std::uint32_t k = m.cls.count();

  const auto projs = central_projections(m, opt.seed);
  std::vector<TraceComponent> out;
  double wsum = 0.0;
  for (const auto& P : projs) {
    const VecC pv = P * m.v;
    const double w = pv.squaredNorm();
    require(w > 1e-10, ErrorKind::Numeric, "decompose: a central summand misses the cyclic vector");
    const VecC u = pv / std::sqrt(w);
    std::vector<Cx> vals(k);
    for (std::uint32_t c = 0; c < k; ++c) vals[c] = u.dot(m.apply_pi(m.cls.rep[c], u));

    std::uint32_t best = k;
    double best_err = 1e100;
    for (std::uint32_t r = 0; r < k; ++r) {
      double err = 0.0;
      for (std::uint32_t c = 0; c < k; ++c)
        err = std::max(err, std::abs(vals[c] - table->normalized_value(r, c).to_complex()));
      if (err < best_err) {
        best_err = err;
        best = r;
      }
    }
    require(best < k && best_err <= 1e-6, ErrorKind::Numeric,
            "decompose: a recovered summand matches no character row");
    wsum += w;
    out.push_back(TraceComponent{w, best, Trace::character_row(m.group, m.cls, table, best),
                                 best_err});
  }
  require(std::abs(wsum - 1.0) <= 1e-10, ErrorKind::Numeric, "decompose: weights do not sum to 1");
  std::sort(out.begin(), out.end(),
            [](const TraceComponent& a, const TraceComponent& b) { return a.table_row < b.table_row; });
  for (std::size_t i = 1; i < out.size(); ++i)
    require(out[i].table_row != out[i - 1].table_row, ErrorKind::Numeric,
            "decompose: two summands matched the same character row");
  // recombination check against the input
  for (std::uint32_t c = 0; c < k; ++c) {
    Cx acc(0, 0);
    for (const auto& comp : out)
      acc += comp.weight * table->normalized_value(comp.table_row, c).to_complex();
    require(std::abs(acc - m.phi_class[c]) <= 1e-10, ErrorKind::Numeric,
            "decompose: recombined values do not reproduce the input trace");
  }
  return out;
}

// --- serialization ---------------------------------------------------------------

namespace {
nlohmann::json mat_json(const MatC& A) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      row.push_back({A(i, j).real(), A(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}
}  // namespace

nlohmann::json gns_to_json(const GnsModel& m) {
  nlohmann::json j;
  j["schema"] = "charlab.gns.v1";
  j["group"] = m.group->descriptor();
  j["trace"] = m.trace_label;
  j["dim"] = m.n;
  j["pivots"] = m.pivots;
  j["exact_rank"] = m.exact_rank;
  j["certification"] = m.certification;
  j["reconstruction_error"] = m.reconstruction_error;
  j["L"] = mat_json(m.L);
  nlohmann::json v = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.v.size(); ++i) v.push_back({m.v(i).real(), m.v(i).imag()});
  j["cyclic_vector"] = std::move(v);
  j["pi_generators"] = nlohmann::json::array();
  j["rho_generators"] = nlohmann::json::array();
  for (const auto& A : m.pi_gen) j["pi_generators"].push_back(mat_json(A));
  for (const auto& A : m.rho_gen) j["rho_generators"].push_back(mat_json(A));
  return j;
}

}  // namespace charlab
