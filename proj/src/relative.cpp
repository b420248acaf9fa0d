#include "charlab/relative.hpp"

#include "charlab/error.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstring>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <utility>

namespace charlab {

namespace {

const double kResidualTol = 1e-9;

std::string shortest_double(double x) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, p);
}

}  // namespace

// --- automorphisms ----------------------------------------------------------------

Automorphism::Automorphism(GroupHandle::Ptr G, std::vector<std::uint32_t> image, Unchecked)
    : group_(std::move(G)), image_(std::move(image)) {}

Automorphism::Automorphism(GroupHandle::Ptr G, std::vector<std::uint32_t> image)
    : group_(std::move(G)), image_(std::move(image)) {
  require(group_ != nullptr, ErrorKind::Validation, "automorphism: null group");
  const std::uint32_t N = group_->size();
  require(image_.size() == N, ErrorKind::Validation,
          "automorphism: image must list every element of the group");
  std::vector<std::uint8_t> seen(N, 0);
  for (std::uint32_t g = 0; g < N; ++g) {
    require(image_[g] < N, ErrorKind::Validation, "automorphism: image id out of range");
    require(!seen[image_[g]], ErrorKind::Validation, "automorphism: image is not injective");
    seen[image_[g]] = 1;
  }
  for (std::uint32_t g = 0; g < N; ++g)
    for (std::uint32_t h = 0; h < N; ++h)
      require(image_[group_->mul(g, h)] == group_->mul(image_[g], image_[h]),
              ErrorKind::Validation, "automorphism: image is not a homomorphism");
}

Automorphism Automorphism::identity(GroupHandle::Ptr G) {
  require(G != nullptr, ErrorKind::Validation, "automorphism: null group");
  std::vector<std::uint32_t> im(G->size());
  std::iota(im.begin(), im.end(), 0u);
  return Automorphism(std::move(G), std::move(im), Unchecked{});
}

Automorphism Automorphism::inner(GroupHandle::Ptr G, std::uint32_t s) {
  require(G != nullptr, ErrorKind::Validation, "automorphism: null group");
  require(s < G->size(), ErrorKind::Validation, "inner automorphism: element id out of range");
  std::vector<std::uint32_t> im(G->size());
  for (std::uint32_t g = 0; g < G->size(); ++g) im[g] = G->conjugate(s, g);
  return Automorphism(std::move(G), std::move(im), Unchecked{});
}

Automorphism Automorphism::linear(GroupHandle::Ptr vec_group, const IntegerMatrixElement& M) {
  require(vec_group != nullptr, ErrorKind::Validation, "linear automorphism: null group");
  require(vec_group->is_matrix_backend(), ErrorKind::Validation,
          "linear automorphism: the group must be a matrix-backend translation group");
  const std::uint32_t D = vec_group->mat_dim();
  const std::int64_t p = vec_group->modulus();
  require(D >= 2 && M.d == D - 1, ErrorKind::Validation,
          "linear automorphism: matrix dimension must match the translation part");
  const std::uint32_t d = D - 1;
  std::vector<std::uint32_t> im(vec_group->size());
  std::vector<std::uint8_t> e(std::size_t(D) * D);
  for (std::uint32_t g = 0; g < vec_group->size(); ++g) {
    const std::uint8_t* src = vec_group->entries(g);
    // Translation vector sits in the last column above the unit pivot.
    std::fill(e.begin(), e.end(), std::uint8_t(0));
    for (std::uint32_t i = 0; i < D; ++i) e[std::size_t(i) * D + i] = 1;
    for (std::uint32_t i = 0; i < d; ++i) {
      std::int64_t acc = 0;
      for (std::uint32_t j = 0; j < d; ++j)
        acc += M.at(i, j) * std::int64_t(src[std::size_t(j) * D + (D - 1)]);
      e[std::size_t(i) * D + (D - 1)] = std::uint8_t(((acc % p) + p) % p);
    }
    const auto idx = vec_group->index_of_entries(e.data());
    require(idx.has_value(), ErrorKind::Validation,
            "linear automorphism: image element is not in the group");
    im[g] = *idx;
  }
  return Automorphism(std::move(vec_group), std::move(im));
}

Automorphism Automorphism::compose(const Automorphism& o) const {
  require(group_ == o.group_, ErrorKind::Validation,
          "automorphism composition: different groups");
  std::vector<std::uint32_t> im(image_.size());
  for (std::uint32_t g = 0; g < image_.size(); ++g) im[g] = image_[o.image_[g]];
  return Automorphism(group_, std::move(im), Unchecked{});
}

Automorphism Automorphism::inverse() const {
  std::vector<std::uint32_t> im(image_.size());
  for (std::uint32_t g = 0; g < image_.size(); ++g) im[image_[g]] = g;
  return Automorphism(group_, std::move(im), Unchecked{});
}

std::string Automorphism::key() const {
  std::string k(image_.size() * 4, '\0');
  for (std::size_t i = 0; i < image_.size(); ++i) {
    const std::uint32_t v = image_[i];
    k[4 * i] = char(v & 0xff);
    k[4 * i + 1] = char((v >> 8) & 0xff);
    k[4 * i + 2] = char((v >> 16) & 0xff);
    k[4 * i + 3] = char((v >> 24) & 0xff);
  }
  return k;
}

AutomorphismAction automorphism_action(GroupHandle::Ptr G, std::vector<Automorphism> gens,
                                       std::uint32_t closure_budget) {
  require(G != nullptr, ErrorKind::Validation, "automorphism action: null group");
  for (const Automorphism& lam : gens)
    require(lam.group() == G, ErrorKind::Validation,
            "automorphism action: generator acts on a different group");

  // Close the generated subgroup of Aut(Gamma); every element of a finite
  // automorphism group is a positive word in the generators.
  std::map<std::string, std::uint32_t> seen;
  std::vector<Automorphism> closure;
  closure.push_back(Automorphism::identity(G));
  seen.emplace(closure[0].key(), 0u);
  for (std::size_t head = 0; head < closure.size(); ++head) {
    for (const Automorphism& lam : gens) {
      Automorphism next = lam.compose(closure[head]);
      std::string k = next.key();
      if (seen.count(k)) continue;
      require(closure.size() < closure_budget, ErrorKind::Budget,
              "automorphism action: closure exceeds the budget");
      seen.emplace(std::move(k), std::uint32_t(closure.size()));
      closure.push_back(std::move(next));
    }
  }

  bool inner_ok = true;
  for (std::uint32_t s : G->generators())
    if (!seen.count(Automorphism::inner(G, s).key())) {
      inner_ok = false;
      break;
    }

  AutomorphismAction act;
  act.gamma = std::move(G);
  act.generators = std::move(gens);
  act.closure_size = static_cast<std::uint32_t>(closure.size());
  act.inner_contained = inner_ok;
  return act;
}

AutomorphismAction inner_action(GroupHandle::Ptr G) {
  require(G != nullptr, ErrorKind::Validation, "inner action: null group");
  std::vector<Automorphism> gens;
  for (std::uint32_t s : G->generators()) gens.push_back(Automorphism::inner(G, s));
  return automorphism_action(std::move(G), std::move(gens));
}

// --- invariance -------------------------------------------------------------------

bool relative_invariance(const Trace& phi, const AutomorphismAction& action) {
  require(action.gamma == phi.group(), ErrorKind::Validation,
          "relative invariance: the action and the trace live on different groups");
  const ConjClasses& cls = phi.classes();
  for (const Automorphism& lam : action.generators) {
    for (std::uint32_t c = 0; c < cls.count(); ++c) {
      const std::uint32_t c2 = cls.class_of[lam(cls.rep[c])];
      if (phi.exact()) {
        if (!(*phi.exact_class_value(c) == *phi.exact_class_value(c2))) return false;
      } else {
        if (std::abs(phi.class_value(c) - phi.class_value(c2)) > 1e-10) return false;
      }
    }
  }
  return true;
}

// --- the extended unitary ---------------------------------------------------------

MatC relative_unitary(const GnsModel& m, const Automorphism& lam) {
  require(lam.group() == m.group, ErrorKind::Validation,
          "relative_unitary: the automorphism acts on a different group");
  // The map delta_g -> delta_{lam(g)} is isometric exactly when phi is
  // invariant; check per class before trusting the matrix.
  for (std::uint32_t c = 0; c < m.cls.count(); ++c) {
    const std::uint32_t c2 = m.cls.class_of[lam(m.cls.rep[c])];
    require(std::abs(m.phi_class[c] - m.phi_class[c2]) <= 1e-10, ErrorKind::Validation,
            "relative_unitary: the trace is not invariant under the automorphism");
  }
  MatC C(m.n, m.n);
  for (std::uint32_t k = 0; k < m.n; ++k) C.col(k) = m.coords(lam(m.pivots[k]));
  // U = C L^{-*}, the same change of frame as the translation images.
  return m.L.triangularView<Eigen::Lower>().solve(C.adjoint()).adjoint();
}

// --- relative gap criterion -------------------------------------------------------

namespace {

// Sum of coeff * U(lam) over the element's support, validating each unitary.
MatC acting_image(const GnsModel& m, const ActingElement& a) {
  MatC A = MatC::Zero(m.n, m.n);
  for (const auto& [lam, c] : a) A += c.to_complex() * relative_unitary(m, lam);
  return A;
}

struct RelTriple {
  double tb = 0.0, t1 = 0.0, tf = 0.0;
};

// tb = sum_mu b_mu phi(x^* x^mu), t1 = phi(x^* x), tf = |phi(x)|^2.
RelTriple relative_triple(const GnsModel& m,
                          const std::vector<std::pair<Automorphism, Cx>>& b_terms,
                          const SparseVector& x) {
  const GroupHandle& G = *m.group;
  const std::size_t s = x.ids.size();
  Cx f1 = 0.0, fb = 0.0, fx = 0.0;
  for (std::size_t i = 0; i < s; ++i) fx += x.cs[i] * m.phi_of(x.ids[i]);
  std::vector<std::uint32_t> inv_ids(s);
  for (std::size_t i = 0; i < s; ++i) inv_ids[i] = G.inv(x.ids[i]);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j)
      f1 += std::conj(x.cs[i]) * x.cs[j] * m.phi_of(G.mul(inv_ids[i], x.ids[j]));
  for (const auto& [mu, bc] : b_terms) {
    Cx inner = 0.0;
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j)
        inner += std::conj(x.cs[i]) * x.cs[j] * m.phi_of(G.mul(inv_ids[i], mu(x.ids[j])));
    fb += bc * inner;
  }
  return {fb.real(), f1.real(), std::norm(fx)};
}

void require_action_extends(const GnsModel& m, const AutomorphismAction& action,
                            const char* where) {
  require(action.gamma == m.group, ErrorKind::Validation,
          std::string(where) + ": the action and the model live on different groups");
  for (const Automorphism& lam : action.generators)
    for (std::uint32_t c = 0; c < m.cls.count(); ++c) {
      const std::uint32_t c2 = m.cls.class_of[lam(m.cls.rep[c])];
      require(std::abs(m.phi_class[c] - m.phi_class[c2]) <= 1e-10, ErrorKind::Validation,
              std::string(where) + ": the action does not extend (trace not invariant)");
    }
}

}  // namespace

GapReport alpha_gap(const GnsModel& m, const AutomorphismAction& action, const ActingElement& a,
                    double beta, const GapTestPolicy& pol) {
  require(!a.empty(), ErrorKind::Validation, "alpha_gap: empty acting element");
  require(std::isfinite(beta) && beta > 0.0 && beta <= 1.0, ErrorKind::Validation,
          "alpha_gap: beta must lie in (0, 1]");
  require_action_extends(m, action, "alpha_gap");
  for (const auto& [lam, c] : a)
    require(lam.group() == m.group, ErrorKind::Validation,
            "alpha_gap: acting element supported outside the model group");
  // The criterion compares against the line of the cyclic vector, which the
  // extended image fixes only when the coefficients sum to 1.
  {
    Cx total = 0.0;
    for (const auto& [lam, c] : a) total += c.to_complex();
    require(std::abs(total - Cx(1.0, 0.0)) <= 1e-12, ErrorKind::Validation,
            "alpha_gap: coefficients must sum to 1");
  }

  // Exact norm side: restrict the extended image to the orthocomplement of
  // the cyclic vector.
  NormCert cert;
  VecC witness_w;
  if (m.n <= 1) {
    cert = NormCert{0.0, 0.0};
  } else {
    const MatC A = acting_image(m, a);
    const MatC Q1 = complement_basis(m.v);
    const MatC B = Q1.adjoint() * A * Q1;
    cert = operator_norm_certified(B);
    if (pol.analytic_witness) witness_w = Q1 * top_right_singular_vector(B);
  }

  // b = a^* a over the acting group, deduplicated by automorphism.
  std::map<std::string, std::pair<Automorphism, RationalComplex>> conv;
  for (const auto& [l1, c1] : a)
    for (const auto& [l2, c2] : a) {
      Automorphism mu = l1.inverse().compose(l2);
      std::string k = mu.key();
      auto it = conv.find(k);
      if (it == conv.end())
        conv.emplace(std::move(k), std::make_pair(std::move(mu), c1.conj() * c2));
      else
        it->second.second = it->second.second + c1.conj() * c2;
    }
  std::vector<std::pair<Automorphism, Cx>> b_terms;
  for (auto& [k, term] : conv)
    if (!term.second.is_zero())
      b_terms.emplace_back(std::move(term.first), term.second.to_complex());

  std::string description;
  std::vector<SparseVector> xs = gap_test_vectors(m, pol, description);
  if (pol.analytic_witness && witness_w.size() > 0) {
    xs.push_back(pivot_lift(m, witness_w, "top-singular-vector lift"));
    description += ", top-singular-vector lift";
  }

  GapReport r;
  r.kind = "relative";
  r.beta = beta;
  r.norm = cert.value;
  r.norm_radius = cert.radius;
  r.norm_side = cert.value <= std::sqrt(beta);
  r.test_set = description;
  r.worst_residual = -std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, std::size_t>> violators;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const RelTriple t = relative_triple(m, b_terms, xs[i]);
    const double res = t.tb - beta * t.t1 - (1.0 - beta) * t.tf;
    r.worst_residual = std::max(r.worst_residual, res);
    if (res > kResidualTol) violators.emplace_back(res, i);
  }
  r.inequality_side = violators.empty();
  std::sort(violators.rbegin(), violators.rend());
  for (std::size_t k = 0; k < violators.size() && k < 3; ++k)
    r.witnesses.push_back(xs[violators[k].second].name);
  const double slack = kResidualTol + cert.radius * (2.0 * cert.value + cert.radius);
  r.borderline = std::abs(cert.value * cert.value - beta) <= slack;
  return r;
}

NormCert alpha_restricted_norm(const GnsModel& m, const ActingElement& a) {
  require(!a.empty(), ErrorKind::Validation, "alpha_restricted_norm: empty acting element");
  if (m.n <= 1) return NormCert{0.0, 0.0};
  const MatC A = acting_image(m, a);
  const MatC Q1 = complement_basis(m.v);
  return operator_norm_certified(Q1.adjoint() * A * Q1);
}

// --- relative-character criterion -------------------------------------------------

RelativeCharacterReport is_relative_character(const GnsModel& m, const AutomorphismAction& action,
                                              std::uint64_t seed) {
  require_action_extends(m, action, "is_relative_character");
  require(action.inner_contained, ErrorKind::Validation,
          "is_relative_character: the action must contain every inner automorphism");

  std::vector<MatC> unitaries;
  for (const Automorphism& lam : action.generators)
    unitaries.push_back(relative_unitary(m, lam));

  // Route 1: dimension of the joint fixed space.  Each 2 - U - U^* is PSD
  // with kernel = fixed vectors of U, so the kernel of the sum is the
  // intersection over the generators (hence over the whole acting group).
  RelativeCharacterReport rep;
  if (unitaries.empty()) {
    rep.dim_invariant = m.n;
  } else {
    MatC K = MatC::Zero(m.n, m.n);
    for (const MatC& U : unitaries)
      K += 2.0 * MatC::Identity(m.n, m.n) - U - U.adjoint();
    Eigen::SelfAdjointEigenSolver<MatC> es(0.5 * (K + K.adjoint()));
    std::uint32_t dim = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()(i) <= 1e-8) ++dim;
    rep.dim_invariant = dim;
  }

  // Route 2: the action permutes the minimal central projections; the fixed
  // space is spanned by one vector per orbit.
  const std::vector<MatC> ps = central_projections(m, seed);
  const std::size_t k = ps.size();
  std::vector<std::size_t> parent(k);
  std::iota(parent.begin(), parent.end(), std::size_t(0));
  auto root = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (const MatC& U : unitaries) {
    for (std::size_t i = 0; i < k; ++i) {
      const MatC X = U * ps[i] * U.adjoint();
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_j = k;
      for (std::size_t j = 0; j < k; ++j) {
        const double dev = (X - ps[j]).norm();
        if (dev < best) {
          best = dev;
          best_j = j;
        }
      }
      require(best <= 1e-7 * (1.0 + ps[i].norm()), ErrorKind::Numeric,
              "is_relative_character: the action does not permute the central projections "
              "(deviation " +
                  shortest_double(best) + ")");
      parent[root(i)] = root(best_j);
    }
  }
  std::uint32_t orbits = 0;
  for (std::size_t i = 0; i < k; ++i)
    if (root(i) == i) ++orbits;
  rep.dim_central = orbits;

  rep.routes_agree = rep.dim_invariant == rep.dim_central;
  rep.relative_character = rep.routes_agree && rep.dim_invariant == 1;
  return rep;
}

// --- rational torus orbits ---------------------------------------------------------

namespace {

// Generator reduced mod q, row-major residues.
std::vector<std::uint32_t> reduced_matrix(const IntegerMatrixElement& M, std::uint32_t q) {
  std::vector<std::uint32_t> r(std::size_t(M.d) * M.d);
  const std::int64_t Q = q;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::uint32_t(((M.a[i] % Q) + Q) % Q);
  return r;
}

std::vector<std::uint32_t> apply_mod(const std::vector<std::uint32_t>& M, std::uint32_t d,
                                     const std::vector<std::uint32_t>& p, std::uint32_t q) {
  std::vector<std::uint32_t> w(d);
  for (std::uint32_t i = 0; i < d; ++i) {
    std::uint64_t acc = 0;
    for (std::uint32_t j = 0; j < d; ++j)
      acc = (acc + std::uint64_t(M[std::size_t(i) * d + j]) * p[j]) % q;
    w[i] = std::uint32_t(acc);
  }
  return w;
}

}  // namespace

RationalOrbit orbit(const RationalPoint& v, const std::vector<IntegerMatrixElement>& gens,
                    std::uint64_t budget) {
  const std::uint32_t d = static_cast<std::uint32_t>(v.num.size());
  require(d >= 1, ErrorKind::Validation, "orbit: empty starting point");
  require(v.q >= 1, ErrorKind::Validation, "orbit: denominator must be positive");
  for (const IntegerMatrixElement& g : gens)
    require(g.d == d, ErrorKind::Validation, "orbit: generator dimension mismatch");
  const std::uint32_t q = v.q;

  std::vector<std::vector<std::uint32_t>> mats;
  for (const IntegerMatrixElement& g : gens) {
    mats.push_back(reduced_matrix(g, q));
    mats.push_back(reduced_matrix(g.inverse(), q));
  }

  std::vector<std::uint32_t> start(d);
  for (std::uint32_t i = 0; i < d; ++i) start[i] = v.num[i] % q;

  RationalOrbit O;
  O.d = d;
  O.q = q;
  std::set<std::vector<std::uint32_t>> seen;
  seen.insert(start);
  O.points.push_back(std::move(start));
  for (std::size_t head = 0; head < O.points.size(); ++head) {
    for (const auto& M : mats) {
      std::vector<std::uint32_t> w = apply_mod(M, d, O.points[head], q);
      if (seen.count(w)) continue;
      require(O.points.size() < budget, ErrorKind::Budget, "orbit: size exceeds the budget");
      seen.insert(w);
      O.points.push_back(std::move(w));
    }
  }
  return O;
}

// --- the Fourier trace of an orbit -------------------------------------------------

TorusTrace::TorusTrace(RationalOrbit O) : orbit_(std::move(O)) {
  require(!orbit_.points.empty(), ErrorKind::Validation, "orbit trace: empty orbit");
  require(orbit_.q >= 1, ErrorKind::Validation, "orbit trace: denominator must be positive");
  const double tau = 6.283185307179586476925286766559;
  roots_.resize(orbit_.q);
  for (std::uint32_t k = 0; k < orbit_.q; ++k)
    roots_[k] = std::polar(1.0, tau * double(k) / double(orbit_.q));
}

TorusTrace orbit_trace(RationalOrbit O) { return TorusTrace(std::move(O)); }

namespace {

// <x, m> mod q with m pre-reduced to [0, q).
std::uint32_t pairing_mod(const std::vector<std::uint32_t>& x,
                          const std::vector<std::uint32_t>& m_red, std::uint32_t q) {
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    acc = (acc + std::uint64_t(x[i]) * m_red[i]) % q;
  return std::uint32_t(acc);
}

std::vector<std::uint32_t> reduce_lattice_point(const std::vector<std::int64_t>& m,
                                                std::uint32_t q) {
  const std::int64_t Q = q;
  std::vector<std::uint32_t> r(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) r[i] = std::uint32_t(((m[i] % Q) + Q) % Q);
  return r;
}

}  // namespace

Cx TorusTrace::value(const std::vector<std::int64_t>& m) const {
  require(m.size() == orbit_.d, ErrorKind::Validation, "orbit trace: lattice point dimension");
  const std::vector<std::uint32_t> mr = reduce_lattice_point(m, orbit_.q);
  Cx acc = 0.0;
  for (const auto& x : orbit_.points) acc += roots_[pairing_mod(x, mr, orbit_.q)];
  return acc / double(orbit_.points.size());
}

Cyclotomic TorusTrace::exact_value(const std::vector<std::int64_t>& m) const {
  require(m.size() == orbit_.d, ErrorKind::Validation, "orbit trace: lattice point dimension");
  require(orbit_.q <= 64, ErrorKind::Validation,
          "orbit trace: exact values are limited to denominators <= 64");
  const std::vector<std::uint32_t> mr = reduce_lattice_point(m, orbit_.q);
  std::vector<std::int64_t> counts(orbit_.q, 0);
  for (const auto& x : orbit_.points) ++counts[pairing_mod(x, mr, orbit_.q)];
  Cyclotomic s = Cyclotomic::zero();
  const std::int64_t size = std::int64_t(orbit_.points.size());
  for (std::uint32_t k = 0; k < orbit_.q; ++k)
    if (counts[k] != 0) s = s + Cyclotomic::root_power(orbit_.q, k, rational_of(counts[k], size));
  return s;
}

std::optional<Rational> TorusTrace::rational_value(const std::vector<std::int64_t>& m) const {
  if (orbit_.q > 64) return std::nullopt;
  return exact_value(m).as_rational();
}

double TorusTrace::eval_error_bound() const {
  return 8.0 * std::numeric_limits<double>::epsilon() *
         double(orbit_.points.size() + orbit_.q);
}

// --- lattice-ball checks -----------------------------------------------------------

namespace {

// Lexicographic walk over {-ball..ball}^d; returns false once exhausted.
bool next_lattice_point(std::vector<std::int64_t>& m, std::int64_t ball) {
  for (std::size_t i = m.size(); i-- > 0;) {
    if (m[i] < ball) {
      ++m[i];
      std::fill(m.begin() + std::ptrdiff_t(i) + 1, m.end(), -ball);
      return true;
    }
  }
  return false;
}

bool is_zero_point(const std::vector<std::int64_t>& m) {
  return std::all_of(m.begin(), m.end(), [](std::int64_t x) { return x == 0; });
}

}  // namespace

bool relative_invariance(const TorusTrace& phi, const std::vector<IntegerMatrixElement>& gens,
                         std::int64_t ball) {
  require(ball >= 1, ErrorKind::Validation, "relative invariance: ball radius must be positive");
  const std::uint32_t d = phi.dim();
  for (const IntegerMatrixElement& g : gens)
    require(g.d == d, ErrorKind::Validation, "relative invariance: generator dimension mismatch");
  const bool exact = phi.denominator() <= 64;
  const double tol = 1e-9 + 2.0 * phi.eval_error_bound();
  std::vector<std::int64_t> m(d, -ball);
  do {
    if (is_zero_point(m)) continue;
    for (const IntegerMatrixElement& A : gens) {
      // The pushforward under x -> Ax pairs with m through the transpose.
      std::vector<std::int64_t> t(d, 0);
      for (std::uint32_t i = 0; i < d; ++i)
        for (std::uint32_t j = 0; j < d; ++j) t[i] += A.at(j, i) * m[j];
      if (exact) {
        if (!(phi.exact_value(t) == phi.exact_value(m))) return false;
      } else {
        if (std::abs(phi.value(t) - phi.value(m)) > tol) return false;
      }
    }
  } while (next_lattice_point(m, ball));
  return true;
}

TorusTraceCheck torus_trace_check(const TorusTrace& phi, std::int64_t ball, double tol) {
  require(ball >= 1, ErrorKind::Validation, "orbit trace check: ball radius must be positive");
  const std::uint32_t d = phi.dim();
  std::vector<std::vector<std::int64_t>> pts;
  std::vector<std::int64_t> m(d, -ball);
  do {
    pts.push_back(m);
  } while (next_lattice_point(m, ball));

  const std::size_t N = pts.size();
  MatC G(N, N);
  std::vector<std::int64_t> diff(d);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      for (std::uint32_t t = 0; t < d; ++t) diff[t] = pts[i][t] - pts[j][t];
      G(i, j) = phi.value(diff);
    }

  TorusTraceCheck rep;
  rep.hermitian = (G - G.adjoint()).cwiseAbs().maxCoeff() <= tol;
  Eigen::SelfAdjointEigenSolver<MatC> es(0.5 * (G + G.adjoint()));
  rep.min_gram_eigenvalue = es.eigenvalues().minCoeff();
  rep.positive = rep.min_gram_eigenvalue >= -tol;
  return rep;
}

// --- the denominator scan ----------------------------------------------------------

TorusScanSeries torus_limit_scan(std::uint32_t d, const std::vector<std::uint32_t>& denominators,
                                 std::int64_t ball, std::uint64_t orbit_budget) {
  require(d >= 2, ErrorKind::Validation, "torus scan: dimension must be at least 2");
  require(ball >= 1, ErrorKind::Validation, "torus scan: ball radius must be positive");
  require(!denominators.empty(), ErrorKind::Validation, "torus scan: no denominators");

  const std::vector<IntegerMatrixElement> raw_gens = sl_elementary_generators(d);

  TorusScanSeries series;
  series.d = d;
  series.ball = ball;

  for (std::uint32_t q : denominators) {
    require(q >= 1, ErrorKind::Validation, "torus scan: denominator must be positive");
    std::uint64_t total = 1;
    for (std::uint32_t i = 0; i < d; ++i) {
      require(total <= orbit_budget / std::max<std::uint64_t>(q, 1), ErrorKind::Budget,
              "torus scan: denominator grid exceeds the orbit budget");
      total *= q;
    }

    std::vector<std::vector<std::uint32_t>> mats;
    for (const IntegerMatrixElement& g : raw_gens) {
      mats.push_back(reduced_matrix(g, q));
      mats.push_back(reduced_matrix(g.inverse(), q));
    }

    TorusScanRow row;
    row.q = q;
    std::vector<std::uint8_t> visited(total, 0);
    auto encode = [&](const std::vector<std::uint32_t>& p) {
      std::uint64_t idx = 0;
      for (std::uint32_t i = 0; i < d; ++i) idx = idx * q + p[i];
      return idx;
    };

    std::vector<std::uint32_t> p(d, 0);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      // Decode with p[0] most significant: index order = lexicographic order.
      std::uint64_t t = idx;
      for (std::uint32_t i = d; i-- > 0;) {
        p[i] = std::uint32_t(t % q);
        t /= q;
      }
      std::uint32_t g = q;
      for (std::uint32_t i = 0; i < d; ++i) g = std::gcd(g, p[i]);
      if (g != 1 || visited[idx]) continue;

      // Orbit of points with denominator exactly q (the gcd condition is
      // preserved: the generators are invertible mod every prime dividing q).
      RationalOrbit O;
      O.d = d;
      O.q = q;
      visited[idx] = 1;
      O.points.push_back(p);
      for (std::size_t head = 0; head < O.points.size(); ++head)
        for (const auto& M : mats) {
          std::vector<std::uint32_t> w = apply_mod(M, d, O.points[head], q);
          const std::uint64_t widx = encode(w);
          if (visited[widx]) continue;
          visited[widx] = 1;
          O.points.push_back(std::move(w));
        }

      TorusOrbitRow orow;
      orow.orbit_id = static_cast<std::uint32_t>(row.orbits.size());
      orow.orbit_size = O.points.size();
      const TorusTrace phi(std::move(O));

      std::vector<std::int64_t> m(d, -ball);
      double best = -1.0;
      std::vector<std::int64_t> best_m;
      do {
        if (is_zero_point(m)) continue;
        const double val = std::abs(phi.value(m));
        if (val > best) {
          best = val;
          best_m = m;
        }
      } while (next_lattice_point(m, ball));
      orow.max_abs = best;
      orow.argmax_m = best_m;
      if (q <= 64) {
        if (auto r = phi.rational_value(best_m)) orow.max_abs_exact = boost::multiprecision::abs(*r);
      }
      row.max_abs = std::max(row.max_abs, orow.max_abs);
      row.orbits.push_back(std::move(orow));
    }

    if (q == 1) row.flag = "trivial denominator";
    if (d == 2) {
      if (!row.flag.empty()) row.flag += "; ";
      row.flag += "d = 2: outside the certified range";
    }
    series.rows.push_back(std::move(row));
  }
  return series;
}

std::string torus_scan_csv(const TorusScanSeries& s) {
  std::string out = "q,orbit,orbit_size,argmax_m,abs_phi,abs_phi_exact,flag\n";
  for (const TorusScanRow& row : s.rows)
    for (const TorusOrbitRow& o : row.orbits) {
      out += std::to_string(row.q) + "," + std::to_string(o.orbit_id) + "," +
             std::to_string(o.orbit_size) + ",";
      for (std::size_t i = 0; i < o.argmax_m.size(); ++i) {
        if (i) out += " ";
        out += std::to_string(o.argmax_m[i]);
      }
      out += "," + shortest_double(o.max_abs) + ",";
      if (o.max_abs_exact) out += rational_string(*o.max_abs_exact);
      out += "," + row.flag + "\n";
    }
  return out;
}

nlohmann::json torus_scan_to_json(const TorusScanSeries& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (const TorusScanRow& row : s.rows) {
    nlohmann::json orbits = nlohmann::json::array();
    for (const TorusOrbitRow& o : row.orbits) {
      nlohmann::json jo{{"id", o.orbit_id},
                        {"size", o.orbit_size},
                        {"argmax_m", o.argmax_m},
                        {"abs_phi", o.max_abs}};
      if (o.max_abs_exact)
        jo["abs_phi_exact"] = rational_string(*o.max_abs_exact);
      else
        jo["abs_phi_exact"] = nullptr;
      orbits.push_back(std::move(jo));
    }
    rows.push_back(nlohmann::json{{"q", row.q},
                                  {"flag", row.flag},
                                  {"max_abs", row.max_abs},
                                  {"orbits", std::move(orbits)}});
  }
  return nlohmann::json{{"schema", "charlab.torus-scan.v1"},
                        {"d", s.d},
                        {"ball", s.ball},
                        {"rows", std::move(rows)}};
}

}  // namespace charlab
