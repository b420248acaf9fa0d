#include "charlab/trace.hpp"

#include "charlab/error.hpp"
#include "charlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace charlab {
namespace {

using nlohmann::json;

std::vector<Cx> float_mirror(const std::vector<Cyclotomic>& v) {
  std::vector<Cx> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].to_complex();
  return out;
}

// Exact real/imag parts when the value lies in Q(i); nullopt otherwise.
std::optional<RationalComplex> as_gaussian(const Cyclotomic& z) {
  const Cyclotomic zc = z.conj();
  auto re2 = (z + zc).as_rational();
  auto im2 = ((z - zc) * Cyclotomic::root_power(4, 3)).as_rational();  // (z - z*) * (-i)
  if (!re2 || !im2) return std::nullopt;
  return RationalComplex(*re2 / 2, *im2 / 2);
}

Rational parse_rational(const std::string& s) {
  try {
    return Rational(s);
  } catch (const std::exception&) {
    fail_validation("bad rational literal: " + s);
  }
}

}  // namespace

Trace Trace::class_function(GroupHandle::Ptr G, ConjClasses cls, std::vector<Cyclotomic> values,
                            std::string label) {
  require(G != nullptr, ErrorKind::Validation, "trace: null group");
  require(values.size() == cls.count(), ErrorKind::Validation,
          "trace: need exactly one value per conjugacy class");
  require(values[0] == Cyclotomic::one(), ErrorKind::Validation, "trace: phi(e) must equal 1");
  Trace t;
  t.backend_ = Backend::FiniteClassFunction;
  t.label_ = std::move(label);
  t.group_ = std::move(G);
  t.cls_ = std::move(cls);
  t.values_ = float_mirror(values);
  t.exact_ = std::move(values);
  return t;
}

Trace Trace::class_function_float(GroupHandle::Ptr G, ConjClasses cls, std::vector<Cx> values,
                                  std::string label) {
  require(G != nullptr, ErrorKind::Validation, "trace: null group");
  require(values.size() == cls.count(), ErrorKind::Validation,
          "trace: need exactly one value per conjugacy class");
  require(std::abs(values[0] - Cx(1, 0)) <= 1e-9, ErrorKind::Validation,
          "trace: phi(e) must equal 1");
  Trace t;
  t.backend_ = Backend::FiniteClassFunction;
  t.label_ = std::move(label);
  t.group_ = std::move(G);
  t.cls_ = std::move(cls);
  t.values_ = std::move(values);
  return t;
}

Trace Trace::character_row(GroupHandle::Ptr G, ConjClasses cls,
                           std::shared_ptr<const CharacterTable> table, std::uint32_t row) {
  require(G != nullptr && table != nullptr, ErrorKind::Validation, "character_row: null argument");
  require(table->group == G->descriptor() && table->cols() == cls.count(),
          ErrorKind::Validation, "character_row: table does not match the group");
  require(row < table->rows(), ErrorKind::Validation, "character_row: row out of range");
  std::vector<Cyclotomic> vals(cls.count());
  for (std::uint32_t c = 0; c < cls.count(); ++c) vals[c] = table->normalized_value(row, c);
  Trace t = class_function(std::move(G), std::move(cls), std::move(vals),
                           "row " + std::to_string(row) + " of " + table->group);
  t.table_ = std::move(table);
  t.row_ = row;
  return t;
}

Trace Trace::pulled_back(GroupHandle::Ptr quotient, ConjClasses cls,
                         std::shared_ptr<const CharacterTable> table, std::uint32_t row) {
  require(quotient != nullptr && quotient->is_matrix_backend(), ErrorKind::Validation,
          "pulled_back: quotient must be a matrix-backend group");
  Trace t = character_row(std::move(quotient), std::move(cls), std::move(table), row);
  t.backend_ = Backend::PulledBack;
  t.label_ += " via reduction";
  return t;
}

Trace Trace::delta_e(GroupHandle::Ptr G, ConjClasses cls) {
  std::vector<Cyclotomic> vals(cls.count(), Cyclotomic::zero());
  vals[0] = Cyclotomic::one();
  return class_function(std::move(G), std::move(cls), std::move(vals), "delta_e");
}

Trace Trace::constant_one(GroupHandle::Ptr G, ConjClasses cls) {
  std::vector<Cyclotomic> vals(cls.count(), Cyclotomic::one());
  return class_function(std::move(G), std::move(cls), std::move(vals), "constant one");
}

std::uint32_t Trace::row() const {
  require(row_.has_value(), ErrorKind::Validation, "trace has no character-row provenance");
  return *row_;
}

std::uint32_t Trace::modulus() const {
  require(backend_ == Backend::PulledBack, ErrorKind::Validation,
          "modulus: not a pulled-back trace");
  return group_->modulus();
}

std::optional<Cyclotomic> Trace::exact_class_value(std::uint32_t cls) const {
  if (!exact_) return std::nullopt;
  return exact_->at(cls);
}

Cx Trace::value_at(const IntegerMatrixElement& gamma) const {
  require(group_->is_matrix_backend(), ErrorKind::Validation,
          "matrix evaluation needs a matrix-backend group");
  return values_[cls_.class_of[group_->reduce(gamma)]];
}

Cyclotomic Trace::exact_value_at(const IntegerMatrixElement& gamma) const {
  require(exact_.has_value(), ErrorKind::Validation, "trace has no exact values");
  require(group_->is_matrix_backend(), ErrorKind::Validation,
          "matrix evaluation needs a matrix-backend group");
  return (*exact_)[cls_.class_of[group_->reduce(gamma)]];
}

Trace Trace::as_class_function() const {
  Trace t = *this;
  t.backend_ = Backend::FiniteClassFunction;
  return t;
}

namespace {

struct GramDecision {
  bool positive = false;
  double min_eig = 0.0;
  bool exact_cert = false;
  std::uint32_t rank = 0;
  std::string note;
};

MatC float_gram(const Trace& phi, const std::vector<std::uint32_t>& S) {
  const auto& G = *phi.group();
  const auto N = static_cast<Eigen::Index>(S.size());
  MatC A(N, N);
  for (Eigen::Index j = 0; j < N; ++j) {
    const std::uint32_t sj_inv = G.inv(S[j]);
    for (Eigen::Index i = 0; i < N; ++i) A(i, j) = phi.value_at(G.mul(sj_inv, S[i]));
  }
  return A;
}

GramDecision gram_check(const Trace& phi, const std::vector<std::uint32_t>& S, double tol) {
  const auto& G = *phi.group();
  const std::size_t N = S.size();
  require(N >= 1, ErrorKind::Validation, "is_trace: empty subset");
  require(N <= 4096, ErrorKind::Budget, "is_trace: Gram subset larger than 4096 points");
  GramDecision dec;

  if (tol == 0.0) {
    require(phi.exact(), ErrorKind::Validation, "is_trace: tol 0 requires exact trace values");
    require(N <= 256, ErrorKind::Budget, "is_trace: exact Gram limited to 256 points");
    std::vector<std::vector<Cyclotomic>> Z(N, std::vector<Cyclotomic>(N));
    for (std::size_t j = 0; j < N; ++j) {
      const std::uint32_t sj_inv = G.inv(S[j]);
      for (std::size_t i = 0; i < N; ++i)
        Z[i][j] = *phi.exact_class_value(phi.classes().class_of[G.mul(sj_inv, S[i])]);
    }
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = i + 1; j < N; ++j)
        if (!(Z[j][i] == Z[i][j].conj())) {
          dec.note = "hermiticity violated";
          return dec;  // a positive-definite function must be hermitian
        }
    bool all_real = true;
    std::vector<std::vector<RationalComplex>> W(N, std::vector<RationalComplex>(N));
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) {
        auto g = as_gaussian(Z[i][j]);
        require(g.has_value(), ErrorKind::Validation,
                "is_trace: exact positivity needs rational or Gaussian-rational values");
        W[i][j] = *g;
        all_real = all_real && g->is_real();
      }
    if (all_real) {
      std::vector<std::vector<Rational>> A(N, std::vector<Rational>(N));
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) A[i][j] = W[i][j].re;
      auto rep = rational_psd_check(std::move(A));
      dec.positive = rep.psd;
      dec.rank = rep.rank;
    } else {
      // complex Hermitian H is PSD iff the real symmetric [[Re H, -Im H],[Im H, Re H]] is
      std::vector<std::vector<Rational>> A(2 * N, std::vector<Rational>(2 * N));
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
          A[i][j] = W[i][j].re;
          A[i][j + N] = -W[i][j].im;
          A[i + N][j] = W[i][j].im;
          A[i + N][j + N] = W[i][j].re;
        }
      auto rep = rational_psd_check(std::move(A));
      dec.positive = rep.psd;
      dec.rank = rep.rank / 2;
    }
    dec.exact_cert = true;
    dec.min_eig = hermitian_min_eigenvalue(float_gram(phi, S));
    return dec;
  }

  MatC A = float_gram(phi, S);
  const double herm_defect = (A - A.adjoint()).cwiseAbs().maxCoeff();
  dec.min_eig = hermitian_min_eigenvalue(0.5 * (A + A.adjoint()));
  dec.positive = dec.min_eig >= -tol && herm_defect <= tol;
  if (herm_defect > tol) dec.note = "hermiticity defect " + std::to_string(herm_defect);
  return dec;
}

TraceCheckReport assemble_report(const Trace& phi, const std::vector<std::uint32_t>& S,
                                 double tol, std::string regime) {
  require(tol >= 0.0, ErrorKind::Validation, "is_trace: tolerance must be nonnegative");
  require(std::find(S.begin(), S.end(), phi.group()->identity()) != S.end(),
          ErrorKind::Validation, "is_trace: subset must contain the identity");
  TraceCheckReport rep;
  if (phi.exact())
    rep.normalized = (*phi.exact_class_value(0) == Cyclotomic::one());
  else
    rep.normalized = std::abs(phi.class_value(0) - Cx(1, 0)) <= std::max(tol, 1e-12);
  // class functions are conjugation-invariant by construction; verify on a sample anyway
  rep.conjugation_invariant = true;
  auto rng = make_rng(1, "trace.conj");
  std::uniform_int_distribution<std::uint32_t> pick(0, phi.group()->size() - 1);
  for (int t = 0; t < 100; ++t) {
    const auto g = pick(rng), x = pick(rng);
    if (std::abs(phi.value_at(phi.group()->conjugate(x, g)) - phi.value_at(g)) > 1e-12) {
      rep.conjugation_invariant = false;
      break;
    }
  }
  auto dec = gram_check(phi, S, tol);
  rep.positive = dec.positive;
  rep.min_gram_eigenvalue = dec.min_eig;
  rep.exact_certificate = dec.exact_cert;
  rep.gram_rank = dec.rank;
  rep.regime = std::move(regime);
  if (!dec.note.empty()) rep.regime += "; " + dec.note;
  return rep;
}

}  // namespace

TraceCheckReport is_trace(const Trace& phi, const std::vector<std::uint32_t>& S, double tol) {
  return assemble_report(phi, S, tol,
                         "explicit subset (" + std::to_string(S.size()) + " points)");
}

TraceCheckReport is_trace(const Trace& phi, double tol, std::uint64_t seed) {
  const auto& G = *phi.group();
  if (G.size() <= 2000) {
    std::vector<std::uint32_t> S(G.size());
    std::iota(S.begin(), S.end(), 0);
    return assemble_report(phi, S, tol,
                           tol == 0.0 ? "exact full-group Gram" : "float full-group Gram");
  }
  // sampled regime: cyclic subgroups of all class representatives, plus
  // seeded random subsets; every subset contains the identity
  const std::uint32_t cap = 256;
  std::vector<std::vector<std::uint32_t>> subsets;
  bool truncated = false;
  for (std::uint32_t c = 0; c < phi.classes().count(); ++c) {
    std::vector<std::uint32_t> cyc{G.identity()};
    std::uint32_t x = phi.classes().rep[c];
    while (x != G.identity() && cyc.size() < cap) {
      cyc.push_back(x);
      x = G.mul(x, phi.classes().rep[c]);
    }
    truncated = truncated || (x != G.identity() && cyc.size() >= cap);
    subsets.push_back(std::move(cyc));
  }
  auto rng = make_rng(seed, "trace.sampled-gram");
  std::uniform_int_distribution<std::uint32_t> pick(0, G.size() - 1);
  for (int r = 0; r < 4; ++r) {
    std::set<std::uint32_t> s{G.identity()};
    while (s.size() < 64) s.insert(pick(rng));
    subsets.emplace_back(s.begin(), s.end());
  }
  TraceCheckReport rep;
  bool first = true;
  std::string regime = "sampled: cyclic subgroups of " +
                       std::to_string(phi.classes().count()) +
                       " class representatives + 4 random 64-point subsets";
  if (truncated) regime += " (cyclic parts truncated to 256)";
  for (const auto& S : subsets) {
    auto part = assemble_report(phi, S, tol, regime);
    if (first) {
      rep = part;
      first = false;
    } else {
      rep.positive = rep.positive && part.positive;
      rep.conjugation_invariant = rep.conjugation_invariant && part.conjugation_invariant;
      rep.min_gram_eigenvalue = std::min(rep.min_gram_eigenvalue, part.min_gram_eigenvalue);
      rep.exact_certificate = rep.exact_certificate && part.exact_certificate;
    }
  }
  rep.regime = std::move(regime);
  return rep;
}

TraceCheckReport is_trace(const Trace& phi, const std::vector<IntegerMatrixElement>& S,
                          double tol, std::uint64_t seed) {
  const auto& G = *phi.group();
  require(G.is_matrix_backend(), ErrorKind::Validation,
          "is_trace: integer-matrix subsets need a matrix-backend group");
  std::vector<std::uint32_t> idx(S.size());
  for (std::size_t i = 0; i < S.size(); ++i) idx[i] = G.reduce(S[i]);
  auto rep = assemble_report(phi, idx, tol,
                             "pulled back to mod-" + std::to_string(G.modulus()) +
                                 " quotient (" + std::to_string(S.size()) + " points)");

  // conjugation invariance with honest integer-matrix conjugators (elementary
  // words); only meaningful for special linear groups
  if (G.descriptor().rfind("sl(", 0) == 0 && !S.empty()) {
    auto gens = sl_elementary_generators(G.mat_dim());
    std::vector<std::size_t> inv_of(gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t j = 0; j < gens.size(); ++j)
        if (gens[i].mul(gens[j]) == IntegerMatrixElement::identity(G.mat_dim())) inv_of[i] = j;
    auto rng = make_rng(seed, "trace.int-conj");
    std::uniform_int_distribution<std::size_t> pg(0, S.size() - 1);
    std::uniform_int_distribution<std::size_t> pl(1, 4);
    std::uniform_int_distribution<std::size_t> pw(0, gens.size() - 1);
    for (int t = 0; t < 1000 && rep.conjugation_invariant; ++t) {
      const auto& gamma = S[pg(rng)];
      IntegerMatrixElement x = IntegerMatrixElement::identity(G.mat_dim());
      IntegerMatrixElement xinv = x;
      const std::size_t len = pl(rng);
      std::vector<std::size_t> w(len);
      for (auto& wi : w) wi = pw(rng);
      for (auto wi : w) x = x.mul(gens[wi]);
      for (auto it = w.rbegin(); it != w.rend(); ++it) xinv = xinv.mul(gens[inv_of[*it]]);
      const Cx a = phi.value_at(xinv.mul(gamma).mul(x));
      const Cx b = phi.value_at(gamma);
      if (std::abs(a - b) > std::max(tol, 1e-12)) rep.conjugation_invariant = false;
    }
  }
  return rep;
}

Trace convex_combine(const std::vector<Rational>& weights, const std::vector<Trace>& traces) {
  require(!traces.empty() && weights.size() == traces.size(), ErrorKind::Validation,
          "convex_combine: need matching nonempty weights and traces");
  const Trace& t0 = traces.front();
  for (const auto& t : traces) {
    require(t.backend() == Trace::Backend::FiniteClassFunction, ErrorKind::Validation,
            "convex_combine: mismatched backends (restrict pulled-back traces first)");
    require(t.group()->descriptor() == t0.group()->descriptor() &&
                t.group()->size() == t0.group()->size() &&
                t.classes().count() == t0.classes().count(),
            ErrorKind::Validation, "convex_combine: traces live on different groups");
  }
  Rational total = 0;
  for (const auto& w : weights) {
    require(w >= 0, ErrorKind::Validation, "convex_combine: negative weight");
    total += w;
  }
  require(total == 1, ErrorKind::Validation, "convex_combine: weights must sum to 1");

  const bool exact = std::all_of(traces.begin(), traces.end(),
                                 [](const Trace& t) { return t.exact(); });
  const std::uint32_t k = t0.classes().count();
  const std::string label = "combination of " + std::to_string(traces.size()) + " traces";
  if (exact) {
    std::vector<Cyclotomic> vals(k, Cyclotomic::zero());
    for (std::size_t i = 0; i < traces.size(); ++i)
      for (std::uint32_t c = 0; c < k; ++c)
        vals[c] += traces[i].exact_class_value(c)->scaled(weights[i]);
    return Trace::class_function(t0.group(), t0.classes(), std::move(vals), label);
  }
  std::vector<Cx> vals(k, Cx(0, 0));
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const double w = to_double(weights[i]);
    for (std::uint32_t c = 0; c < k; ++c) vals[c] += w * traces[i].class_value(c);
  }
  return Trace::class_function_float(t0.group(), t0.classes(), std::move(vals), label);
}

bool dominates(const Trace& phi, const Trace& psi, const Rational& alpha,
               std::shared_ptr<const CharacterTable> table) {
  require(alpha > 0 && alpha <= 1, ErrorKind::Validation, "dominates: need 0 < alpha <= 1");
  require(phi.group()->descriptor() == psi.group()->descriptor() &&
              phi.group()->size() == psi.group()->size() &&
              phi.classes().count() == psi.classes().count(),
          ErrorKind::Validation, "dominates: traces live on different groups");
  const auto& G = *phi.group();
  const auto& cls = phi.classes();
  CharacterTable local;
  const CharacterTable* T = table.get();
  if (!T) {
    local = compute_character_table(G, cls);
    T = &local;
  } else {
    require(T->group == G.descriptor() && T->cols() == cls.count(), ErrorKind::Validation,
            "dominates: table does not match the group");
  }

  // phi - alpha psi is positive definite iff all its irreducible-character
  // coefficients are nonnegative (and the function is hermitian)
  if (phi.exact() && psi.exact()) {
    for (std::uint32_t r = 0; r < T->rows(); ++r) {
      Cyclotomic c = Cyclotomic::zero();
      for (std::uint32_t j = 0; j < cls.count(); ++j) {
        Cyclotomic f = *phi.exact_class_value(j) - psi.exact_class_value(j)->scaled(alpha);
        c += (f * T->value(r, j).conj()).scaled(Rational(cls.size[j]));
      }
      if (!(c == c.conj())) return false;  // not hermitian, so not positive definite
      if (c.is_zero()) continue;
      if (auto q = c.as_rational()) {
        if (*q < 0) return false;
        continue;
      }
      const double re = c.to_complex().real();
      require(std::abs(re) > 1e-9, ErrorKind::Numeric,
              "dominates: cannot resolve the sign of a nonzero coefficient");
      if (re < 0) return false;
    }
    return true;
  }

  const double a = to_double(alpha);
  for (std::uint32_t r = 0; r < T->rows(); ++r) {
    Cx c(0, 0);
    for (std::uint32_t j = 0; j < cls.count(); ++j)
      c += double(cls.size[j]) * (phi.class_value(j) - a * psi.class_value(j)) *
           std::conj(T->value(r, j).to_complex());
    if (c.real() / double(G.size()) < -1e-9) return false;
  }
  return true;
}

namespace {

template <class Point>
LimitReport limit_impl(const std::vector<Trace>& seq, const std::vector<Point>& S,
                       double declared_tol,
                       const std::function<Cx(const Trace&, const Point&)>& eval) {
  require(!seq.empty(), ErrorKind::Validation, "pointwise_limit: empty sequence");
  require(declared_tol > 0, ErrorKind::Validation, "pointwise_limit: tolerance must be positive");
  LimitReport rep;
  rep.values.reserve(S.size());
  for (const auto& s : S) rep.values.push_back(eval(seq.back(), s));
  if (seq.size() >= 2) {
    const Trace& prev = seq[seq.size() - 2];
    for (std::size_t i = 0; i < S.size(); ++i)
      rep.achieved_tol = std::max(rep.achieved_tol, std::abs(rep.values[i] - eval(prev, S[i])));
  }
  require(rep.achieved_tol <= declared_tol, ErrorKind::Numeric,
          "pointwise_limit: sequence has not converged on the evaluation set "
          "(last step moved by " +
              std::to_string(rep.achieved_tol) + ")");
  return rep;
}

}  // namespace

LimitReport pointwise_limit(const std::vector<Trace>& seq, const std::vector<std::uint32_t>& S,
                            double declared_tol) {
  for (const auto& t : seq)
    require(t.group()->descriptor() == seq.front().group()->descriptor(), ErrorKind::Validation,
            "pointwise_limit: element-index sets need a common group");
  return limit_impl<std::uint32_t>(
      seq, S, declared_tol,
      [](const Trace& t, const std::uint32_t& g) { return t.value_at(g); });
}

LimitReport pointwise_limit(const std::vector<Trace>& seq,
                            const std::vector<IntegerMatrixElement>& S, double declared_tol) {
  return limit_impl<IntegerMatrixElement>(
      seq, S, declared_tol,
      [](const Trace& t, const IntegerMatrixElement& m) { return t.value_at(m); });
}

void validate_irs(const InvariantRandomSubgroup& mu) {
  require(mu.group != nullptr, ErrorKind::Validation, "irs: null group");
  const auto& G = *mu.group;
  require(!mu.subgroups.empty() && mu.subgroups.size() == mu.weights.size(),
          ErrorKind::Validation, "irs: need matching nonempty subgroups and weights");
  Rational total = 0;
  for (const auto& w : mu.weights) {
    require(w >= 0, ErrorKind::Validation, "irs: negative weight");
    total += w;
  }
  require(total == 1, ErrorKind::Validation, "irs: weights must sum to 1");

  std::map<std::vector<std::uint32_t>, Rational> atom;
  for (std::size_t i = 0; i < mu.subgroups.size(); ++i) {
    const auto& H = mu.subgroups[i];
    require(!H.empty() && std::is_sorted(H.begin(), H.end()) &&
                std::adjacent_find(H.begin(), H.end()) == H.end(),
            ErrorKind::Validation, "irs: atoms must be sorted element lists without repeats");
    require(H.front() == G.identity(), ErrorKind::Validation,
            "irs: every atom must contain the identity");
    std::vector<char> member(G.size(), 0);
    for (auto x : H) {
      require(x < G.size(), ErrorKind::Validation, "irs: element index out of range");
      member[x] = 1;
    }
    for (auto x : H)
      for (auto y : H)
        require(member[G.mul(x, y)], ErrorKind::Validation, "irs: atom is not a subgroup");
    require(atom.emplace(H, mu.weights[i]).second, ErrorKind::Validation,
            "irs: duplicate subgroup atom");
  }
  for (std::size_t i = 0; i < mu.subgroups.size(); ++i)
    for (auto s : G.generators()) {
      std::vector<std::uint32_t> K;
      K.reserve(mu.subgroups[i].size());
      for (auto h : mu.subgroups[i]) K.push_back(G.conjugate(s, h));
      std::sort(K.begin(), K.end());
      auto it = atom.find(K);
      require(it != atom.end() && it->second == mu.weights[i], ErrorKind::Validation,
              "irs: weights are not conjugation-invariant");
    }
}

Trace irs_to_trace(const InvariantRandomSubgroup& mu) {
  validate_irs(mu);
  const auto& G = *mu.group;
  require(G.size() <= 500, ErrorKind::Budget, "irs_to_trace: restricted to groups of order <= 500");
  std::vector<Rational> val(G.size(), Rational(0));
  for (std::size_t i = 0; i < mu.subgroups.size(); ++i)
    for (auto x : mu.subgroups[i]) val[x] += mu.weights[i];
  auto cls = conjugacy_classes(G);
  std::vector<Cyclotomic> cv(cls.count());
  for (std::uint32_t c = 0; c < cls.count(); ++c) cv[c] = Cyclotomic(val[cls.rep[c]]);
  for (std::uint32_t x = 0; x < G.size(); ++x)
    require(val[x] == val[cls.rep[cls.class_of[x]]], ErrorKind::Internal,
            "irs trace not constant on a conjugacy class");
  return Trace::class_function(mu.group, std::move(cls), std::move(cv),
                               "trace of an invariant random subgroup");
}

nlohmann::json cyclotomic_to_json(const Cyclotomic& z) {
  json coeffs = json::array();
  for (const auto& c : z.coeffs()) coeffs.push_back(rational_string(c));
  return json{{"order", z.order()}, {"coeffs", coeffs}};
}

Cyclotomic cyclotomic_from_json(const nlohmann::json& j) {
  require(j.is_object() && j.contains("order") && j.contains("coeffs"), ErrorKind::Validation,
          "cyclotomic JSON needs order and coeffs");
  std::vector<Rational> c;
  for (const auto& s : j.at("coeffs")) c.push_back(parse_rational(s.get<std::string>()));
  return Cyclotomic(j.at("order").get<std::uint32_t>(), std::move(c));
}

nlohmann::json trace_to_json(const Trace& t) {
  json j;
  j["schema"] = "charlab.trace.v1";
  j["backend"] =
      t.backend() == Trace::Backend::PulledBack ? "pulled-back" : "class-function";
  j["group"] = t.group()->descriptor();
  j["label"] = t.label();
  if (t.row_provenance()) j["row"] = *t.row_provenance();
  j["exact"] = t.exact();
  json vals = json::array();
  for (std::uint32_t c = 0; c < t.classes().count(); ++c) {
    if (t.exact())
      vals.push_back(cyclotomic_to_json(*t.exact_class_value(c)));
    else
      vals.push_back(json::array({t.class_value(c).real(), t.class_value(c).imag()}));
  }
  j["values"] = std::move(vals);
  return j;
}

Trace trace_from_json(const nlohmann::json& j) {
  require(j.is_object() && j.value("schema", "") == "charlab.trace.v1", ErrorKind::Validation,
          "not a trace JSON document");
  auto G = GroupHandle::build(j.at("group").get<std::string>());
  auto cls = conjugacy_classes(*G);
  const auto& vals = j.at("values");
  require(vals.is_array() && vals.size() == cls.count(), ErrorKind::Validation,
          "trace JSON: value count does not match the class count");
  const std::string label = j.value("label", "trace");
  Trace t;
  if (j.value("exact", false)) {
    std::vector<Cyclotomic> v;
    v.reserve(vals.size());
    for (const auto& e : vals) v.push_back(cyclotomic_from_json(e));
    t = Trace::class_function(std::move(G), std::move(cls), std::move(v), label);
  } else {
    std::vector<Cx> v;
    v.reserve(vals.size());
    for (const auto& e : vals) v.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    t = Trace::class_function_float(std::move(G), std::move(cls), std::move(v), label);
  }
  if (j.contains("row")) t.row_ = j.at("row").get<std::uint32_t>();
  if (j.value("backend", "") == "pulled-back") {
    require(t.group_->is_matrix_backend(), ErrorKind::Validation,
            "trace JSON: pulled-back backend needs a matrix group");
    t.backend_ = Trace::Backend::PulledBack;
  }
  return t;
}

void write_ball_file(const std::string& path, std::uint32_t dim,
                     const std::vector<IntegerMatrixElement>& ball) {
  json j;
  j["schema"] = "charlab.ball.v1";
  j["dim"] = dim;
  json mats = json::array();
  for (const auto& m : ball) {
    require(m.d == dim, ErrorKind::Validation, "ball file: dimension mismatch");
    mats.push_back(m.a);
  }
  j["matrices"] = std::move(mats);
  std::ofstream out(path);
  require(out.good(), ErrorKind::Validation, "cannot open ball file for writing: " + path);
  out << j.dump(1) << "\n";
}

std::vector<IntegerMatrixElement> read_ball_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::Validation, "cannot open ball file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail_validation("unparseable ball file " + path + ": " + e.what());
  }
  require(j.value("schema", "") == "charlab.ball.v1", ErrorKind::Validation,
          "not a ball file: " + path);
  const auto dim = j.at("dim").get<std::uint32_t>();
  std::vector<IntegerMatrixElement> out;
  for (const auto& m : j.at("matrices"))
    out.emplace_back(dim, m.get<std::vector<std::int64_t>>());
  return out;
}

}  // namespace charlab
