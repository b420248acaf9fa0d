#include "charlab/gap.hpp"

#include "charlab/error.hpp"
#include "charlab/rng.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <utility>

namespace charlab {
namespace {

using Term = std::pair<std::uint32_t, Cx>;

// Sort by id, merge duplicates, drop zeros; exact layer kept in lockstep.
void normalize_finite(std::vector<std::uint32_t>& ids, std::vector<Cx>& cs,
                      std::optional<std::vector<RationalComplex>>& exact) {
  std::vector<std::size_t> order(ids.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
  std::vector<std::uint32_t> nid;
  std::vector<Cx> ncs;
  std::vector<RationalComplex> nex;
  for (std::size_t t : order) {
    if (!nid.empty() && nid.back() == ids[t]) {
      ncs.back() += cs[t];
      if (exact) nex.back() = nex.back() + (*exact)[t];
    } else {
      nid.push_back(ids[t]);
      ncs.push_back(cs[t]);
      if (exact) nex.push_back((*exact)[t]);
    }
  }
  std::vector<std::uint32_t> fid;
  std::vector<Cx> fcs;
  std::vector<RationalComplex> fex;
  for (std::size_t i = 0; i < nid.size(); ++i) {
    const bool zero = exact ? nex[i].is_zero() : (ncs[i] == Cx(0.0, 0.0));
    if (zero) continue;
    fid.push_back(nid[i]);
    fcs.push_back(exact ? nex[i].to_complex() : ncs[i]);
    if (exact) fex.push_back(nex[i]);
  }
  ids = std::move(fid);
  cs = std::move(fcs);
  if (exact) exact = std::move(fex);
  require(!ids.empty(), ErrorKind::Validation, "group algebra element has empty support");
}

void normalize_matrix(std::vector<IntegerMatrixElement>& mats, std::vector<Cx>& cs,
                      std::optional<std::vector<RationalComplex>>& exact) {
  std::map<std::string, std::size_t> pos;
  std::vector<IntegerMatrixElement> nm;
  std::vector<Cx> ncs;
  std::vector<RationalComplex> nex;
  for (std::size_t t = 0; t < mats.size(); ++t) {
    auto [it, fresh] = pos.emplace(mats[t].key(), nm.size());
    if (fresh) {
      nm.push_back(mats[t]);
      ncs.push_back(cs[t]);
      if (exact) nex.push_back((*exact)[t]);
    } else {
      ncs[it->second] += cs[t];
      if (exact) nex[it->second] = nex[it->second] + (*exact)[t];
    }
  }
  std::vector<IntegerMatrixElement> fm;
  std::vector<Cx> fcs;
  std::vector<RationalComplex> fex;
  for (std::size_t i = 0; i < nm.size(); ++i) {
    const bool zero = exact ? nex[i].is_zero() : (ncs[i] == Cx(0.0, 0.0));
    if (zero) continue;
    fm.push_back(nm[i]);
    fcs.push_back(exact ? nex[i].to_complex() : ncs[i]);
    if (exact) fex.push_back(nex[i]);
  }
  mats = std::move(fm);
  cs = std::move(fcs);
  if (exact) exact = std::move(fex);
  require(!mats.empty(), ErrorKind::Validation, "group algebra element has empty support");
}

// Exact square root of a nonnegative rational, or nullopt when irrational.
std::optional<Rational> rational_sqrt(const Rational& q) {
  if (q == 0) return Rational(0);
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  const BigInt rn = boost::multiprecision::sqrt(num);
  const BigInt rd = boost::multiprecision::sqrt(den);
  if (rn * rn != num || rd * rd != den) return std::nullopt;
  return Rational(rn, rd);
}

}  // namespace

// --- GroupAlgebraElement -------------------------------------------------------

const GroupHandle::Ptr& GroupAlgebraElement::group() const {
  require(backend_ == Backend::Finite, ErrorKind::Validation,
          "group(): element is not over a finite group");
  return group_;
}

const std::vector<std::uint32_t>& GroupAlgebraElement::elements() const {
  require(backend_ == Backend::Finite, ErrorKind::Validation,
          "elements(): element is not over a finite group");
  return ids_;
}

const std::vector<IntegerMatrixElement>& GroupAlgebraElement::matrices() const {
  require(backend_ == Backend::IntegerMatrix, ErrorKind::Validation,
          "matrices(): element is not over the integer matrix group");
  return mats_;
}

std::uint32_t GroupAlgebraElement::dim() const {
  require(backend_ == Backend::IntegerMatrix, ErrorKind::Validation,
          "dim(): element is not over the integer matrix group");
  return dim_;
}

std::optional<RationalComplex> GroupAlgebraElement::exact_coefficient(std::size_t i) const {
  if (!exact_) return std::nullopt;
  return (*exact_)[i];
}

GroupAlgebraElement GroupAlgebraElement::on_group(
    GroupHandle::Ptr G, std::vector<std::pair<std::uint32_t, RationalComplex>> terms) {
  require(G != nullptr, ErrorKind::Validation, "on_group: null group");
  GroupAlgebraElement a;
  a.backend_ = Backend::Finite;
  a.group_ = std::move(G);
  std::vector<RationalComplex> ex;
  for (auto& [g, c] : terms) {
    require(g < a.group_->size(), ErrorKind::Validation, "on_group: element id out of range");
    a.ids_.push_back(g);
    a.coeffs_.push_back(c.to_complex());
    ex.push_back(c);
  }
  a.exact_ = std::move(ex);
  normalize_finite(a.ids_, a.coeffs_, a.exact_);
  return a;
}

GroupAlgebraElement GroupAlgebraElement::on_group_float(
    GroupHandle::Ptr G, std::vector<std::pair<std::uint32_t, Cx>> terms) {
  require(G != nullptr, ErrorKind::Validation, "on_group_float: null group");
  GroupAlgebraElement a;
  a.backend_ = Backend::Finite;
  a.group_ = std::move(G);
  for (auto& [g, c] : terms) {
    require(g < a.group_->size(), ErrorKind::Validation, "on_group_float: element id out of range");
    a.ids_.push_back(g);
    a.coeffs_.push_back(c);
  }
  normalize_finite(a.ids_, a.coeffs_, a.exact_);
  return a;
}

GroupAlgebraElement GroupAlgebraElement::delta(GroupHandle::Ptr G, std::uint32_t g) {
  return on_group(std::move(G), {{g, RationalComplex(Rational(1))}});
}

GroupAlgebraElement GroupAlgebraElement::uniform_on_gens(GroupHandle::Ptr G) {
  require(G != nullptr, ErrorKind::Validation, "uniform_on_gens: null group");
  std::set<std::uint32_t> sym;
  for (std::uint32_t s : G->generators()) {
    sym.insert(s);
    sym.insert(G->inv(s));
  }
  const Rational w(1, static_cast<long>(sym.size()));
  std::vector<std::pair<std::uint32_t, RationalComplex>> terms;
  for (std::uint32_t s : sym) terms.emplace_back(s, RationalComplex(w));
  return on_group(std::move(G), std::move(terms));
}

GroupAlgebraElement GroupAlgebraElement::on_integer_group(
    std::uint32_t dim, std::vector<std::pair<IntegerMatrixElement, RationalComplex>> terms) {
  require(dim >= 1, ErrorKind::Validation, "on_integer_group: dimension must be positive");
  GroupAlgebraElement a;
  a.backend_ = Backend::IntegerMatrix;
  a.dim_ = dim;
  std::vector<RationalComplex> ex;
  for (auto& [M, c] : terms) {
    require(M.d == dim, ErrorKind::Validation, "on_integer_group: matrix dimension mismatch");
    a.mats_.push_back(M);
    a.coeffs_.push_back(c.to_complex());
    ex.push_back(c);
  }
  a.exact_ = std::move(ex);
  normalize_matrix(a.mats_, a.coeffs_, a.exact_);
  return a;
}

GroupAlgebraElement GroupAlgebraElement::uniform_on_elementary(std::uint32_t dim) {
  const auto gens = sl_elementary_generators(dim);
  const Rational w(1, static_cast<long>(gens.size()));
  std::vector<std::pair<IntegerMatrixElement, RationalComplex>> terms;
  for (const auto& M : gens) terms.emplace_back(M, RationalComplex(w));
  return on_integer_group(dim, std::move(terms));
}

double GroupAlgebraElement::l1() const {
  double s = 0.0;
  for (const Cx& c : coeffs_) s += std::abs(c);
  return s;
}

Rational GroupAlgebraElement::l1_exact() const {
  require(exact_.has_value(), ErrorKind::Validation,
          "l1_exact: element has no exact coefficient layer");
  Rational s(0);
  for (const RationalComplex& c : *exact_) {
    const auto root = rational_sqrt(c.re * c.re + c.im * c.im);
    require(root.has_value(), ErrorKind::Validation,
            "l1_exact: coefficient modulus is irrational");
    s += *root;
  }
  return s;
}

GroupAlgebraElement GroupAlgebraElement::star() const {
  GroupAlgebraElement a = *this;
  if (backend_ == Backend::Finite) {
    for (auto& g : a.ids_) g = group_->inv(g);
  } else {
    for (auto& M : a.mats_) M = M.inverse();
  }
  for (auto& c : a.coeffs_) c = std::conj(c);
  if (a.exact_)
    for (auto& c : *a.exact_) c = c.conj();
  if (backend_ == Backend::Finite)
    normalize_finite(a.ids_, a.coeffs_, a.exact_);
  else
    normalize_matrix(a.mats_, a.coeffs_, a.exact_);
  return a;
}

GroupAlgebraElement GroupAlgebraElement::scaled(const RationalComplex& c) const {
  require(!c.is_zero(), ErrorKind::Validation, "scaled: zero scalar empties the support");
  GroupAlgebraElement a = *this;
  if (a.exact_) {
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      (*a.exact_)[i] = (*a.exact_)[i] * c;
      a.coeffs_[i] = (*a.exact_)[i].to_complex();
    }
  } else {
    for (auto& z : a.coeffs_) z *= c.to_complex();
  }
  return a;
}

GroupAlgebraElement GroupAlgebraElement::reduce_to(GroupHandle::Ptr G) const {
  require(backend_ == Backend::IntegerMatrix, ErrorKind::Validation,
          "reduce_to: element is already over a finite group");
  require(G != nullptr, ErrorKind::Validation, "reduce_to: null group");
  GroupAlgebraElement a;
  a.backend_ = Backend::Finite;
  a.group_ = G;
  a.coeffs_ = coeffs_;
  a.exact_ = exact_;
  for (const auto& M : mats_) a.ids_.push_back(G->reduce(M));
  normalize_finite(a.ids_, a.coeffs_, a.exact_);
  return a;
}

GroupAlgebraElement star(const GroupAlgebraElement& a) { return a.star(); }

GroupAlgebraElement mul(const GroupAlgebraElement& a, const GroupAlgebraElement& b) {
  require(a.backend_ == b.backend_, ErrorKind::Validation, "mul: mixed element backends");
  GroupAlgebraElement p;
  p.backend_ = a.backend_;
  const bool exact = a.exact_.has_value() && b.exact_.has_value();
  if (exact) p.exact_.emplace();
  if (a.backend_ == GroupAlgebraElement::Backend::Finite) {
    require(a.group_.get() == b.group_.get(), ErrorKind::Validation,
            "mul: factors live on different groups");
    p.group_ = a.group_;
    for (std::size_t i = 0; i < a.ids_.size(); ++i)
      for (std::size_t j = 0; j < b.ids_.size(); ++j) {
        p.ids_.push_back(a.group_->mul(a.ids_[i], b.ids_[j]));
        p.coeffs_.push_back(a.coeffs_[i] * b.coeffs_[j]);
        if (exact) p.exact_->push_back((*a.exact_)[i] * (*b.exact_)[j]);
      }
    normalize_finite(p.ids_, p.coeffs_, p.exact_);
  } else {
    require(a.dim_ == b.dim_, ErrorKind::Validation, "mul: matrix dimensions differ");
    p.dim_ = a.dim_;
    for (std::size_t i = 0; i < a.mats_.size(); ++i)
      for (std::size_t j = 0; j < b.mats_.size(); ++j) {
        p.mats_.push_back(a.mats_[i].mul(b.mats_[j]));
        p.coeffs_.push_back(a.coeffs_[i] * b.coeffs_[j]);
        if (exact) p.exact_->push_back((*a.exact_)[i] * (*b.exact_)[j]);
      }
    normalize_matrix(p.mats_, p.coeffs_, p.exact_);
  }
  return p;
}

GroupAlgebraElement add(const GroupAlgebraElement& a, const GroupAlgebraElement& b) {
  require(a.backend_ == b.backend_, ErrorKind::Validation, "add: mixed element backends");
  GroupAlgebraElement s;
  s.backend_ = a.backend_;
  const bool exact = a.exact_.has_value() && b.exact_.has_value();
  if (exact) s.exact_.emplace();
  auto push = [&](const GroupAlgebraElement& e) {
    for (std::size_t i = 0; i < e.coeffs_.size(); ++i) {
      if (e.backend_ == GroupAlgebraElement::Backend::Finite)
        s.ids_.push_back(e.ids_[i]);
      else
        s.mats_.push_back(e.mats_[i]);
      s.coeffs_.push_back(e.coeffs_[i]);
      if (exact) s.exact_->push_back((*e.exact_)[i]);
    }
  };
  if (a.backend_ == GroupAlgebraElement::Backend::Finite) {
    require(a.group_.get() == b.group_.get(), ErrorKind::Validation,
            "add: summands live on different groups");
    s.group_ = a.group_;
    push(a);
    push(b);
    normalize_finite(s.ids_, s.coeffs_, s.exact_);
  } else {
    require(a.dim_ == b.dim_, ErrorKind::Validation, "add: matrix dimensions differ");
    s.dim_ = a.dim_;
    push(a);
    push(b);
    normalize_matrix(s.mats_, s.coeffs_, s.exact_);
  }
  return s;
}

// --- trace-side evaluation -----------------------------------------------------

namespace {

void require_finite_on(const GroupHandle& G, const GroupAlgebraElement& a, const char* who) {
  require(a.backend() == GroupAlgebraElement::Backend::Finite, ErrorKind::Validation,
          std::string(who) + ": element is not over a finite group");
  require(a.group()->descriptor() == G.descriptor() && a.group()->size() == G.size(),
          ErrorKind::Validation, std::string(who) + ": element and trace groups differ");
}

}  // namespace

Cx trace_of(const Trace& phi, const GroupAlgebraElement& a) {
  require_finite_on(*phi.group(), a, "trace_of");
  Cx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a.coefficients()[i] * phi.value_at(a.elements()[i]);
  return s;
}

Cx trace_quadratic(const Trace& phi, const GroupAlgebraElement& z, const GroupAlgebraElement& x) {
  require_finite_on(*phi.group(), z, "trace_quadratic");
  require_finite_on(*phi.group(), x, "trace_quadratic");
  const GroupHandle& G = *phi.group();
  Cx s = 0.0;
  for (std::size_t t = 0; t < z.size(); ++t) {
    const std::uint32_t gam = z.elements()[t];
    Cx inner = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const std::uint32_t left = G.mul(G.inv(x.elements()[i]), gam);
      for (std::size_t j = 0; j < x.size(); ++j)
        inner += std::conj(x.coefficients()[i]) * x.coefficients()[j] *
                 phi.value_at(G.mul(left, x.elements()[j]));
    }
    s += z.coefficients()[t] * inner;
  }
  return s;
}

Cx trace_conj_quadratic(const Trace& phi, const GroupAlgebraElement& z,
                        const GroupAlgebraElement& x) {
  require_finite_on(*phi.group(), z, "trace_conj_quadratic");
  require_finite_on(*phi.group(), x, "trace_conj_quadratic");
  const GroupHandle& G = *phi.group();
  Cx s = 0.0;
  for (std::size_t t = 0; t < z.size(); ++t) {
    const std::uint32_t gam = z.elements()[t];
    const std::uint32_t gam_inv = G.inv(gam);
    Cx inner = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const std::uint32_t left = G.mul(G.mul(gam_inv, G.inv(x.elements()[i])), gam);
      for (std::size_t j = 0; j < x.size(); ++j)
        inner += std::conj(x.coefficients()[i]) * x.coefficients()[j] *
                 phi.value_at(G.mul(left, x.elements()[j]));
    }
    s += z.coefficients()[t] * inner;
  }
  return s;
}

MatC algebra_image_pi(const GnsModel& m, const GroupAlgebraElement& a) {
  require_finite_on(*m.group, a, "algebra_image_pi");
  MatC A = MatC::Zero(m.n, m.n);
  for (std::size_t i = 0; i < a.size(); ++i) A += a.coefficients()[i] * m.pi_of(a.elements()[i]);
  return A;
}

MatC algebra_image_conj(const GnsModel& m, const GroupAlgebraElement& a) {
  require_finite_on(*m.group, a, "algebra_image_conj");
  MatC A = MatC::Zero(m.n, m.n);
  for (std::size_t i = 0; i < a.size(); ++i) A += a.coefficients()[i] * m.conj_of(a.elements()[i]);
  return A;
}

// --- two-sided gap checks ------------------------------------------------------

namespace {

std::string id_name(std::uint32_t g) { return "delta[g" + std::to_string(g) + "]"; }

}  // namespace

std::vector<SparseVector> gap_test_vectors(const GnsModel& m, const GapTestPolicy& pol,
                                           std::string& description) {
  const std::uint32_t N = m.group->size();
  std::vector<SparseVector> xs;
  for (std::uint32_t g = 0; g < N; ++g) xs.push_back({{g}, {Cx(1.0, 0.0)}, id_name(g)});
  std::ostringstream desc;
  desc << "standard basis (" << N << ")";
  const bool pairs = pol.pair_combinations && N <= 400;
  if (pairs) {
    for (std::uint32_t g = 0; g < N; ++g)
      for (std::uint32_t h = g + 1; h < N; ++h) {
        xs.push_back({{g, h}, {Cx(1.0, 0.0), Cx(1.0, 0.0)}, id_name(g) + " + " + id_name(h)});
        xs.push_back({{g, h}, {Cx(1.0, 0.0), Cx(-1.0, 0.0)}, id_name(g) + " - " + id_name(h)});
      }
    desc << ", all pairwise sums and differences";
  } else if (pol.pair_combinations) {
    desc << ", pair combinations skipped (group order over 400)";
  }
  if (pol.random_vectors > 0 && N >= 2) {
    auto rng = make_rng(pol.seed, "gap.random-x");
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::uint32_t cap = std::min<std::uint32_t>(std::max<std::uint32_t>(pol.support_cap, 2), N);
    std::uniform_int_distribution<std::uint32_t> pick_size(2, cap);
    std::uniform_int_distribution<std::uint32_t> pick_id(0, N - 1);
    for (std::uint32_t k = 0; k < pol.random_vectors; ++k) {
      const std::uint32_t s = pick_size(rng);
      std::set<std::uint32_t> supp;
      while (supp.size() < s) supp.insert(pick_id(rng));
      SparseVector x;
      for (std::uint32_t g : supp) {
        x.ids.push_back(g);
        x.cs.emplace_back(gauss(rng), gauss(rng));
      }
      x.name = "random#" + std::to_string(k) + " (support " + std::to_string(s) + ")";
      xs.push_back(std::move(x));
    }
    desc << ", " << pol.random_vectors << " random vectors (support <= " << cap << ", seed "
         << pol.seed << ")";
  }
  description = desc.str();
  return xs;
}

// Orthonormal basis of the orthocomplement of a unit vector (n x (n-1)).
MatC complement_basis(const VecC& v) {
  const Eigen::Index n = v.size();
  Eigen::HouseholderQR<MatC> qr(v);
  MatC Q = qr.householderQ() * MatC::Identity(n, n);
  return Q.rightCols(n - 1);
}

// Test vector supported on the pivots whose model image is w.
SparseVector pivot_lift(const GnsModel& m, const VecC& w, std::string name) {
  const VecC c = m.L.triangularView<Eigen::Lower>().adjoint().solve(w);
  SparseVector x;
  x.ids = m.pivots;
  x.cs.assign(c.data(), c.data() + c.size());
  x.name = std::move(name);
  return x;
}

VecC top_right_singular_vector(const MatC& A) {
  Eigen::SelfAdjointEigenSolver<MatC> es(A.adjoint() * A);
  return es.eigenvectors().col(es.eigenvectors().cols() - 1);
}

namespace {

struct Triple {
  double tb = 0.0;  // phi(x* b x), resp. sum_g b_g phi(g* x* g x)
  double t1 = 0.0;  // phi(x* x)
  double tf = 0.0;  // |phi(x)|^2 (conjugation criterion only)
};

Triple trace_triple(const GnsModel& m, const std::vector<Term>& b_terms, const SparseVector& x,
                    bool conjugation) {
  const GroupHandle& G = *m.group;
  const std::size_t s = x.ids.size();
  Cx f1 = 0.0, fb = 0.0, fx = 0.0;
  for (std::size_t i = 0; i < s; ++i) fx += x.cs[i] * m.phi_of(x.ids[i]);
  std::vector<std::uint32_t> inv_ids(s);
  for (std::size_t i = 0; i < s; ++i) inv_ids[i] = G.inv(x.ids[i]);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j)
      f1 += std::conj(x.cs[i]) * x.cs[j] * m.phi_of(G.mul(inv_ids[i], x.ids[j]));
  for (const auto& [gam, bc] : b_terms) {
    const std::uint32_t gam_inv = G.inv(gam);
    Cx inner = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
      const std::uint32_t left =
          conjugation ? G.mul(G.mul(gam_inv, inv_ids[i]), gam) : G.mul(inv_ids[i], gam);
      for (std::size_t j = 0; j < s; ++j)
        inner += std::conj(x.cs[i]) * x.cs[j] * m.phi_of(G.mul(left, x.ids[j]));
    }
    fb += bc * inner;
  }
  return {fb.real(), f1.real(), std::norm(fx)};
}

const double kResidualTol = 1e-9;

std::vector<GapReport> gap_sweep(const GnsModel& m, const GroupAlgebraElement& a,
                                 const std::vector<double>& betas, const GapTestPolicy& pol,
                                 bool conjugation) {
  require_finite_on(*m.group, a, conjugation ? "norm_conj" : "norm_pi");
  require(!betas.empty(), ErrorKind::Validation, "gap check: no beta values");
  for (double beta : betas) {
    require(std::isfinite(beta) && beta > 0.0, ErrorKind::Validation,
            "gap check: beta must be positive");
    if (conjugation)
      require(beta <= 1.0, ErrorKind::Validation,
              "conjugation criterion: beta must lie in (0, 1]");
  }
  if (conjugation) {
    // The criterion compares against the line of the cyclic vector, which
    // c(a) fixes only when the coefficients sum to 1.
    Cx total = 0.0;
    for (const Cx& c : a.coefficients()) total += c;
    require(std::abs(total - Cx(1.0, 0.0)) <= 1e-12, ErrorKind::Validation,
            "conjugation criterion: coefficients must sum to 1");
  }

  // Exact norm side.
  NormCert cert;
  VecC witness_w;
  MatC Q1;
  if (conjugation) {
    const MatC C = algebra_image_conj(m, a);
    if (m.n <= 1) {
      cert = NormCert{0.0, 0.0};
    } else {
      Q1 = complement_basis(m.v);
      const MatC B = Q1.adjoint() * C * Q1;
      cert = operator_norm_certified(B);
      if (pol.analytic_witness) witness_w = Q1 * top_right_singular_vector(B);
    }
  } else {
    const MatC A = algebra_image_pi(m, a);
    cert = operator_norm_certified(A);
    if (pol.analytic_witness) witness_w = top_right_singular_vector(A);
  }

  // Trace-inequality side: precompute per-vector data once, sweep betas.
  const GroupAlgebraElement b = mul(a.star(), a);
  std::vector<Term> b_terms;
  for (std::size_t i = 0; i < b.size(); ++i)
    b_terms.emplace_back(b.elements()[i], b.coefficients()[i]);
  std::string description;
  std::vector<SparseVector> xs = gap_test_vectors(m, pol, description);
  if (pol.analytic_witness && witness_w.size() > 0) {
    xs.push_back(pivot_lift(m, witness_w, "top-singular-vector lift"));
    description += ", top-singular-vector lift";
  }
  std::vector<Triple> triples(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    triples[i] = trace_triple(m, b_terms, xs[i], conjugation);

  std::vector<GapReport> out;
  for (double beta : betas) {
    GapReport r;
    r.kind = conjugation ? "conjugation" : "translation";
    r.beta = beta;
    r.norm = cert.value;
    r.norm_radius = cert.radius;
    r.norm_side = cert.value <= std::sqrt(beta);
    r.test_set = description;
    r.worst_residual = -std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, std::size_t>> violators;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double res = conjugation
                             ? triples[i].tb - beta * triples[i].t1 - (1.0 - beta) * triples[i].tf
                             : triples[i].tb - beta * triples[i].t1;
      r.worst_residual = std::max(r.worst_residual, res);
      if (res > kResidualTol) violators.emplace_back(res, i);
    }
    r.inequality_side = violators.empty();
    std::sort(violators.rbegin(), violators.rend());
    for (std::size_t k = 0; k < violators.size() && k < 3; ++k)
      r.witnesses.push_back(xs[violators[k].second].name);
    const double slack = kResidualTol + cert.radius * (2.0 * cert.value + cert.radius);
    r.borderline = std::abs(cert.value * cert.value - beta) <= slack;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

GapReport norm_pi(const GnsModel& m, const GroupAlgebraElement& a, double beta,
                  const GapTestPolicy& pol) {
  return gap_sweep(m, a, {beta}, pol, false)[0];
}

std::vector<GapReport> norm_pi_sweep(const GnsModel& m, const GroupAlgebraElement& a,
                                     const std::vector<double>& betas, const GapTestPolicy& pol) {
  return gap_sweep(m, a, betas, pol, false);
}

GapReport norm_conj(const GnsModel& m, const GroupAlgebraElement& a, double beta,
                    const GapTestPolicy& pol) {
  return gap_sweep(m, a, {beta}, pol, true)[0];
}

std::vector<GapReport> norm_conj_sweep(const GnsModel& m, const GroupAlgebraElement& a,
                                       const std::vector<double>& betas,
                                       const GapTestPolicy& pol) {
  return gap_sweep(m, a, betas, pol, true);
}

NormCert conj_restricted_norm(const GnsModel& m, const GroupAlgebraElement& a) {
  require_finite_on(*m.group, a, "conj_restricted_norm");
  if (m.n <= 1) return NormCert{0.0, 0.0};
  const MatC C = algebra_image_conj(m, a);
  const MatC Q1 = complement_basis(m.v);
  return operator_norm_certified(Q1.adjoint() * C * Q1);
}

// --- tensor-square criterion ----------------------------------------------------

namespace {

MatC kron(const MatC& A, const MatC& B) {
  MatC K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return K;
}

// phi(x^* gamma y) for sparse x, y.
Cx pair_value(const GnsModel& m, const SparseVector& x, std::uint32_t gamma, const SparseVector& y) {
  const GroupHandle& G = *m.group;
  Cx s = 0.0;
  for (std::size_t i = 0; i < x.ids.size(); ++i) {
    const std::uint32_t left = G.mul(G.inv(x.ids[i]), gamma);
    for (std::size_t j = 0; j < y.ids.size(); ++j)
      s += std::conj(x.cs[i]) * y.cs[j] * m.phi_of(G.mul(left, y.ids[j]));
  }
  return s;
}

}  // namespace

TensorReport norm_tensor(const GnsModel& m, const GroupAlgebraElement& a, double beta,
                         const GapTestPolicy& pol) {
  require_finite_on(*m.group, a, "norm_tensor");
  require(std::isfinite(beta) && beta >= 0.0, ErrorKind::Validation,
          "norm_tensor: beta must be nonnegative");
  require(m.n <= 32, ErrorKind::Budget, "norm_tensor: model dimension over the 32 budget");
  const std::uint32_t n = m.n;

  MatC K = MatC::Zero(std::size_t(n) * n, std::size_t(n) * n);
  Cx coeff_sum = 0.0;
  std::vector<MatC> images(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    images[i] = m.pi_of(a.elements()[i]);
    K += a.coefficients()[i] * kron(images[i].conjugate(), images[i]);
    coeff_sum += a.coefficients()[i];
  }

  // vec(Id) spans an invariant line: every summand fixes it.
  VecC uI = VecC::Zero(std::size_t(n) * n);
  for (std::uint32_t i = 0; i < n; ++i) uI(std::size_t(i) * n + i) = 1.0;
  uI /= std::sqrt(double(n));
  const Cx lambda = uI.dot(K * uI);
  const double invariance = (K * uI - lambda * uI).norm();
  require(invariance <= 1e-8 * (1.0 + std::abs(lambda)), ErrorKind::Numeric,
          "norm_tensor: image fails to preserve the identity line");

  TensorReport rep;
  rep.beta = beta;
  const NormCert full = operator_norm_certified(K);
  rep.full_norm = full.value;
  rep.full_radius = full.radius;
  if (std::size_t(n) * n <= 1) {
    rep.restricted_norm = 0.0;
    rep.restricted_radius = 0.0;
  } else {
    const MatC Q1 = complement_basis(uI);
    const NormCert restr = operator_norm_certified(Q1.adjoint() * K * Q1);
    rep.restricted_norm = restr.value;
    rep.restricted_radius = restr.radius;
  }
  rep.norm_side = rep.restricted_norm <= std::sqrt(beta);

  // Sampled families: rewrite the tensor inner products through the trace and
  // compare against the matrix computation, then run the one-way bound.
  const GroupAlgebraElement b = mul(a.star(), a);
  auto rng = make_rng(pol.seed, "gap.tensor");
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<std::uint32_t> pick_id(0, m.group->size() - 1);
  std::uniform_int_distribution<std::uint32_t> pick_size(1, std::min<std::uint32_t>(4, m.group->size()));
  auto random_sparse = [&]() {
    const std::uint32_t s = pick_size(rng);
    std::set<std::uint32_t> supp;
    while (supp.size() < s) supp.insert(pick_id(rng));
    SparseVector x;
    for (std::uint32_t g : supp) {
      x.ids.push_back(g);
      x.cs.emplace_back(gauss(rng), gauss(rng));
    }
    return x;
  };
  std::vector<std::uint32_t> gammas;
  for (std::size_t i = 0; i < a.size(); ++i) gammas.push_back(a.elements()[i]);
  for (int t = 0; t < 3; ++t) gammas.push_back(pick_id(rng));

  rep.identities_ok = true;
  rep.identity_error = 0.0;
  rep.oneway_ok = true;
  rep.worst_excess = -std::numeric_limits<double>::infinity();
  const std::uint32_t families = 20;
  const bool oneway_applicable =
      rep.norm_side && beta <= 1.0 && std::abs(coeff_sum - Cx(1.0, 0.0)) <= 1e-12;
  for (std::uint32_t fam = 0; fam < families; ++fam) {
    const std::uint32_t k = 1 + fam % 3;
    std::vector<SparseVector> xf, yf;
    std::vector<VecC> xi, eta;
    for (std::uint32_t i = 0; i < k; ++i) {
      xf.push_back(random_sparse());
      yf.push_back(random_sparse());
      VecC x_img = VecC::Zero(n), y_img = VecC::Zero(n);
      for (std::size_t t = 0; t < xf.back().ids.size(); ++t)
        x_img += xf.back().cs[t] * m.coords(xf.back().ids[t]);
      for (std::size_t t = 0; t < yf.back().ids.size(); ++t)
        y_img += yf.back().cs[t] * m.coords(yf.back().ids[t]);
      xi.push_back(x_img);
      eta.push_back(y_img);
    }
    MatC W = MatC::Zero(n, n);
    for (std::uint32_t i = 0; i < k; ++i) W += xi[i] * eta[i].adjoint();

    // |w|^2 against the double trace sum.
    Cx trace_side = 0.0;
    for (std::uint32_t i = 0; i < k; ++i)
      for (std::uint32_t j = 0; j < k; ++j)
        trace_side += pair_value(m, xf[j], 0, xf[i]) * std::conj(pair_value(m, yf[j], 0, yf[i]));
    const double norm_err = std::abs(trace_side - Cx((W.adjoint() * W).trace()));
    rep.identity_error = std::max(rep.identity_error, norm_err);
    if (norm_err > 1e-10 * std::max(1.0, std::abs(trace_side))) rep.identities_ok = false;

    // <(pi (x) pi*)(gamma) w, w> against its trace form, per gamma.
    for (std::uint32_t gam : gammas) {
      const MatC P = m.pi_of(gam);
      Cx lhs = (W.adjoint() * P * W * P.adjoint()).trace();
      Cx rhs = 0.0;
      for (std::uint32_t i = 0; i < k; ++i)
        for (std::uint32_t j = 0; j < k; ++j)
          rhs += pair_value(m, xf[j], gam, xf[i]) * std::conj(pair_value(m, yf[j], gam, yf[i]));
      const double err = std::abs(lhs - rhs);
      rep.identity_error = std::max(rep.identity_error, err);
      if (err > 1e-10 * std::max(1.0, std::abs(rhs))) rep.identities_ok = false;
    }

    if (!oneway_applicable) continue;
    // One-way bound: trace-side LHS against the cubed-dimension right side.
    double lhs = 0.0;
    for (std::uint32_t i = 0; i < k; ++i)
      for (std::uint32_t j = 0; j < k; ++j) {
        Cx term = 0.0;
        for (std::size_t t = 0; t < b.size(); ++t)
          term += b.coefficients()[t] * pair_value(m, xf[j], b.elements()[t], xf[i]) *
                  std::conj(pair_value(m, yf[j], b.elements()[t], yf[i]));
        term -= beta * pair_value(m, xf[j], 0, xf[i]) * std::conj(pair_value(m, yf[j], 0, yf[i]));
        lhs += term.real();
      }
    double l1_sum = 0.0;
    for (std::uint32_t i = 0; i < k; ++i) {
      double lx = 0.0, ly = 0.0;
      for (const Cx& c : xf[i].cs) lx += std::abs(c);
      for (const Cx& c : yf[i].cs) ly += std::abs(c);
      l1_sum += lx * ly;
    }
    const double rhs = (1.0 - beta) * l1_sum * l1_sum / (double(n) * n * n);
    const double excess = lhs - rhs;
    rep.worst_excess = std::max(rep.worst_excess, excess);
    if (excess > kResidualTol) rep.oneway_ok = false;
  }
  std::ostringstream desc;
  desc << families << " random families (k <= 3, seed " << pol.seed << ")";
  if (!oneway_applicable) desc << "; one-way bound vacuous (hypotheses not met)";
  rep.test_set = desc.str();
  if (rep.worst_excess == -std::numeric_limits<double>::infinity()) rep.worst_excess = 0.0;
  return rep;
}

// --- complement-norm criterion ---------------------------------------------------

ComplementNormReport complement_norm_lemma(const MatC& A, const VecC& v, double beta,
                                           std::uint32_t samples, std::uint64_t seed) {
  require(A.rows() == A.cols(), ErrorKind::Validation, "complement_norm_lemma: matrix not square");
  require(v.size() == A.rows(), ErrorKind::Validation,
          "complement_norm_lemma: vector length mismatch");
  require(std::isfinite(beta) && beta > 0.0 && beta < 1.0, ErrorKind::Validation,
          "complement_norm_lemma: beta must lie in (0, 1)");
  require(std::abs(v.norm() - 1.0) <= 1e-9, ErrorKind::Validation,
          "complement_norm_lemma: vector is not a unit vector");
  require((A * v - v).norm() <= 1e-9, ErrorKind::Validation,
          "complement_norm_lemma: vector is not fixed by the operator");
  // The equivalence needs the complement to be invariant as well, which for a
  // fixed unit vector amounts to the adjoint fixing it too.
  require((A.adjoint() * v - v).norm() <= 1e-9, ErrorKind::Validation,
          "complement_norm_lemma: adjoint does not fix the vector");

  ComplementNormReport rep;
  const Eigen::Index n = A.rows();
  MatC Q1;
  if (n <= 1) {
    rep.restricted_norm = 0.0;
    rep.norm_radius = 0.0;
  } else {
    Q1 = complement_basis(v);
    const NormCert cert = operator_norm_certified(Q1.adjoint() * A * Q1);
    rep.restricted_norm = cert.value;
    rep.norm_radius = cert.radius;
  }
  rep.norm_side = rep.restricted_norm <= std::sqrt(beta);

  std::vector<VecC> ws;
  for (Eigen::Index i = 0; i < n; ++i) ws.push_back(VecC::Unit(n, i));
  auto rng = make_rng(seed, "gap.complement");
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::uint32_t k = 0; k < samples; ++k) {
    VecC w(n);
    for (Eigen::Index i = 0; i < n; ++i) w(i) = Cx(gauss(rng), gauss(rng));
    ws.push_back(std::move(w));
  }
  if (n > 1) ws.push_back(Q1 * top_right_singular_vector(MatC(Q1.adjoint() * A * Q1)));

  rep.worst_excess = -std::numeric_limits<double>::infinity();
  for (const VecC& w : ws) {
    const double excess = (A * w).squaredNorm() - beta * w.squaredNorm() +
                          (beta - 1.0) * std::norm(w.dot(v));
    rep.worst_excess = std::max(rep.worst_excess, excess);
  }
  rep.inequality_side = rep.worst_excess <= kResidualTol;
  rep.borderline = std::abs(rep.restricted_norm * rep.restricted_norm - beta) <=
                   kResidualTol + rep.norm_radius * (2.0 * rep.restricted_norm + rep.norm_radius);
  return rep;
}

// --- certificate propagation ------------------------------------------------------

namespace {

struct BallTerm {
  std::size_t ball_index;
  Cx coeff;
};

// Sparse test vector over ball members together with its expanded argument
// lists, so any value table indexed by the ball evaluates the residual.
struct BallVector {
  std::vector<std::size_t> support;  // ball indices of the support
  std::vector<Cx> cs;
  std::vector<BallTerm> tb_terms;  // arguments of the quadratic form with b
  std::vector<BallTerm> t1_terms;  // arguments of phi(x* x)
};

double ball_residual(const BallVector& x, const std::vector<Cx>& values, double beta,
                     GapKind kind) {
  Cx tb = 0.0, t1 = 0.0;
  for (const auto& t : x.tb_terms) tb += t.coeff * values[t.ball_index];
  for (const auto& t : x.t1_terms) t1 += t.coeff * values[t.ball_index];
  double res = tb.real() - beta * t1.real();
  if (kind == GapKind::Conjugation) {
    Cx fx = 0.0;
    for (std::size_t i = 0; i < x.support.size(); ++i)
      fx += x.cs[i] * values[x.support[i]];
    res -= (1.0 - beta) * std::norm(fx);
  }
  return res;
}

}  // namespace

PropagationReport certificate_propagation(const std::vector<Trace>& seq,
                                          const GroupAlgebraElement& a, double beta,
                                          const std::vector<IntegerMatrixElement>& ball,
                                          GapKind kind, const PropagationPolicy& pol) {
  require(!seq.empty(), ErrorKind::Validation, "certificate_propagation: empty trace sequence");
  require(a.backend() == GroupAlgebraElement::Backend::IntegerMatrix, ErrorKind::Validation,
          "certificate_propagation: element must be over the integer matrix group");
  require(!ball.empty(), ErrorKind::Validation, "certificate_propagation: empty ball");
  require(std::isfinite(beta) && beta > 0.0 && beta <= 1.0, ErrorKind::Validation,
          "certificate_propagation: beta must lie in (0, 1]");
  if (kind == GapKind::Conjugation) {
    Cx total = 0.0;
    for (const Cx& c : a.coefficients()) total += c;
    require(std::abs(total - Cx(1.0, 0.0)) <= 1e-12, ErrorKind::Validation,
            "certificate_propagation: conjugation kind needs coefficients summing to 1");
  }
  const std::uint32_t d = a.dim();
  for (const auto& M : ball)
    require(M.d == d, ErrorKind::Validation, "certificate_propagation: ball dimension mismatch");
  for (const Trace& t : seq) {
    require(t.group()->is_matrix_backend(), ErrorKind::Validation,
            "certificate_propagation: trace group has no matrix reduction");
    require(t.group()->mat_dim() == d, ErrorKind::Validation,
            "certificate_propagation: trace and element dimensions differ");
  }

  std::unordered_map<std::string, std::size_t> ball_index;
  for (std::size_t i = 0; i < ball.size(); ++i) ball_index.emplace(ball[i].key(), i);

  const GroupAlgebraElement b = mul(a.star(), a);

  // Argument expansion: for support {M_i} the needed products are
  // M_i^{-1} gamma M_j (translation) or gamma^{-1} M_i^{-1} gamma M_j
  // (conjugation) over gamma in supp(b); phi(x* x) arguments appear at
  // gamma = Id, which b always contains.  A support is usable only when
  // every product stays inside the ball.
  std::vector<IntegerMatrixElement> ball_inv;
  for (const auto& M : ball) ball_inv.push_back(M.inverse());
  auto expand = [&](const std::vector<std::size_t>& support,
                    const std::vector<Cx>& cs) -> std::optional<BallVector> {
    BallVector x;
    x.support = support;
    x.cs = cs;
    for (std::size_t t = 0; t < b.size(); ++t) {
      const IntegerMatrixElement& gam = b.matrices()[t];
      const IntegerMatrixElement gam_inv = gam.inverse();
      for (std::size_t i = 0; i < support.size(); ++i) {
        const IntegerMatrixElement left =
            kind == GapKind::Conjugation
                ? gam_inv.mul(ball_inv[support[i]]).mul(gam)
                : ball_inv[support[i]].mul(gam);
        for (std::size_t j = 0; j < support.size(); ++j) {
          const IntegerMatrixElement arg = left.mul(ball[support[j]]);
          const auto it = ball_index.find(arg.key());
          if (it == ball_index.end()) return std::nullopt;
          const Cx c = std::conj(cs[i]) * cs[j] * b.coefficients()[t];
          x.tb_terms.push_back({it->second, c});
        }
      }
    }
    const IntegerMatrixElement id = IntegerMatrixElement::identity(d);
    for (std::size_t i = 0; i < support.size(); ++i) {
      const IntegerMatrixElement left = ball_inv[support[i]];
      for (std::size_t j = 0; j < support.size(); ++j) {
        const IntegerMatrixElement arg = left.mul(ball[support[j]]);
        const auto it = ball_index.find(arg.key());
        if (it == ball_index.end()) return std::nullopt;
        x.t1_terms.push_back({it->second, std::conj(cs[i]) * cs[j]});
      }
    }
    return x;
  };

  std::vector<BallVector> xs;
  std::vector<std::size_t> singles;
  for (std::size_t i = 0; i < ball.size() && xs.size() < 200; ++i) {
    auto x = expand({i}, {Cx(1.0, 0.0)});
    if (x) {
      xs.push_back(std::move(*x));
      singles.push_back(i);
    }
  }
  const std::size_t pair_pool = std::min<std::size_t>(singles.size(), 20);
  for (std::size_t i = 0; i < pair_pool; ++i)
    for (std::size_t j = i + 1; j < pair_pool; ++j) {
      for (double sgn : {1.0, -1.0}) {
        auto x = expand({singles[i], singles[j]}, {Cx(1.0, 0.0), Cx(sgn, 0.0)});
        if (x) xs.push_back(std::move(*x));
      }
    }
  // Random supports need at least two compatible singles; with one, every
  // draw would be a scalar multiple of an already-tested basis vector.
  if (singles.size() >= 2 && pol.random_vectors > 0) {
    auto rng = make_rng(pol.seed, "gap.propagation");
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::uint32_t cap =
        std::min<std::uint32_t>(std::max<std::uint32_t>(pol.support_cap, 2),
                                static_cast<std::uint32_t>(singles.size()));
    std::uniform_int_distribution<std::uint32_t> pick_size(2, std::max<std::uint32_t>(cap, 2));
    std::uniform_int_distribution<std::size_t> pick(0, singles.size() - 1);
    for (std::uint32_t k = 0; k < pol.random_vectors; ++k) {
      for (int attempt = 0; attempt < 20; ++attempt) {
        const std::uint32_t s = std::min<std::uint32_t>(pick_size(rng), cap);
        std::set<std::size_t> supp;
        while (supp.size() < s) supp.insert(singles[pick(rng)]);
        std::vector<std::size_t> sup(supp.begin(), supp.end());
        std::vector<Cx> cs;
        for (std::size_t i = 0; i < sup.size(); ++i) cs.emplace_back(gauss(rng), gauss(rng));
        auto x = expand(sup, cs);
        if (x) {
          xs.push_back(std::move(*x));
          break;
        }
      }
    }
  }

  PropagationReport rep;
  rep.tested_vectors = static_cast<std::uint32_t>(xs.size());
  if (xs.empty()) {
    rep.note = "no test vector fits inside the ball";
    return rep;
  }

  rep.member_worst = -std::numeric_limits<double>::infinity();
  std::size_t worst_member = 0;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    std::vector<Cx> values;
    values.reserve(ball.size());
    for (const auto& M : ball) values.push_back(seq[k].value_at(M));
    for (const auto& x : xs) {
      const double res = ball_residual(x, values, beta, kind);
      if (res > rep.member_worst) {
        rep.member_worst = res;
        worst_member = k;
      }
    }
  }
  rep.common_beta = rep.member_worst <= pol.tol;

  const LimitReport lim = pointwise_limit(seq, ball, pol.declared_limit_tol);
  rep.achieved_tol = lim.achieved_tol;
  rep.limit_worst = -std::numeric_limits<double>::infinity();
  for (const auto& x : xs)
    rep.limit_worst = std::max(rep.limit_worst, ball_residual(x, lim.values, beta, kind));

  if (!rep.common_beta) {
    rep.propagated = false;
    rep.note = "member " + std::to_string(worst_member) +
               " violates the inequality on the ball (residual " +
               std::to_string(rep.member_worst) + "); no common bound to propagate";
  } else if (rep.limit_worst <= pol.tol) {
    rep.propagated = true;
    rep.note = "limit values satisfy the certificate on the ball";
  } else {
    rep.propagated = false;
    rep.note = "limit values violate the inequality despite a common member bound";
  }
  return rep;
}

// --- reporting ---------------------------------------------------------------------

nlohmann::json gap_report_to_json(const GapReport& r) {
  nlohmann::json j;
  j["schema"] = "charlab.gap.v1";
  j["kind"] = r.kind;
  j["beta"] = r.beta;
  j["norm"] = r.norm;
  j["norm_radius"] = r.norm_radius;
  j["norm_side"] = r.norm_side;
  j["inequality_side"] = r.inequality_side;
  j["worst_residual"] = r.worst_residual;
  j["witnesses"] = r.witnesses;
  j["test_set"] = r.test_set;
  j["borderline"] = r.borderline;
  j["agree"] = r.agree();
  return j;
}

nlohmann::json tensor_report_to_json(const TensorReport& r) {
  nlohmann::json j;
  j["schema"] = "charlab.tensor.v1";
  j["beta"] = r.beta;
  j["full_norm"] = r.full_norm;
  j["full_radius"] = r.full_radius;
  j["restricted_norm"] = r.restricted_norm;
  j["restricted_radius"] = r.restricted_radius;
  j["identities_ok"] = r.identities_ok;
  j["identity_error"] = r.identity_error;
  j["norm_side"] = r.norm_side;
  j["oneway_ok"] = r.oneway_ok;
  j["worst_excess"] = r.worst_excess;
  j["test_set"] = r.test_set;
  return j;
}

nlohmann::json propagation_report_to_json(const PropagationReport& r) {
  nlohmann::json j;
  j["schema"] = "charlab.propagation.v1";
  j["common_beta"] = r.common_beta;
  j["member_worst"] = r.member_worst;
  j["limit_worst"] = r.limit_worst;
  j["propagated"] = r.propagated;
  j["tested_vectors"] = r.tested_vectors;
  j["achieved_tol"] = r.achieved_tol;
  j["note"] = r.note;
  return j;
}

std::string gap_table(const std::vector<GapReport>& rows) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-12s %10s %14s %12s %14s %6s %6s  %s\n", "kind", "beta",
                "norm", "radius", "worst-resid", "n<=rt", "ineq", "verdict");
  out += line;
  for (const GapReport& r : rows) {
    const char* verdict = r.borderline ? "borderline" : (r.agree() ? "agree" : "DISAGREE");
    std::snprintf(line, sizeof(line), "%-12s %10.6f %14.10f %12.2e %14.6e %6s %6s  %s\n",
                  r.kind.c_str(), r.beta, r.norm, r.norm_radius, r.worst_residual,
                  r.norm_side ? "yes" : "no", r.inequality_side ? "yes" : "no", verdict);
    out += line;
  }
  return out;
}

}  // namespace charlab
