#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "charlab/char_table.hpp"
#include "charlab/error.hpp"
#include "charlab/gap.hpp"
#include "charlab/gns.hpp"
#include "charlab/group.hpp"
#include "charlab/intmatrix.hpp"
#include "charlab/rng.hpp"
#include "charlab/trace.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace charlab;

namespace {

struct Lab {
  GroupHandle::Ptr G;
  ConjClasses cls;
  std::shared_ptr<CharacterTable> T;
};

Lab lab(const std::string& descriptor) {
  Lab l;
  l.G = GroupHandle::build(descriptor);
  l.cls = conjugacy_classes(*l.G);
  l.T = std::make_shared<CharacterTable>(compute_character_table(*l.G, l.cls));
  return l;
}

std::uint32_t row_of_degree(const CharacterTable& T, std::uint32_t d, std::uint32_t skip = 0) {
  for (std::uint32_t r = 0; r < T.rows(); ++r)
    if (T.degree[r] == d) {
      if (skip == 0) return r;
      --skip;
    }
  REQUIRE(false);
  return 0;
}

std::uint32_t max_degree_row(const CharacterTable& T) {
  std::uint32_t best = 0;
  for (std::uint32_t r = 1; r < T.rows(); ++r)
    if (T.degree[r] > T.degree[best]) best = r;
  return best;
}

Trace row_trace(const Lab& l, std::uint32_t r) { return Trace::character_row(l.G, l.cls, l.T, r); }

RationalComplex rc(std::int64_t num, std::int64_t den = 1) {
  return RationalComplex(rational_of(num, den));
}

// Half-weight on e and on a chosen involution-free... element g.
GroupAlgebraElement half_e_half(const Lab& l, std::uint32_t g) {
  return GroupAlgebraElement::on_group(l.G, {{l.G->identity(), rc(1, 2)}, {g, rc(1, 2)}});
}

GroupAlgebraElement random_element(const Lab& l, std::uint32_t terms, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> pick(0, l.G->size() - 1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::pair<std::uint32_t, Cx>> ts;
  for (std::uint32_t i = 0; i < terms; ++i) ts.emplace_back(pick(rng), Cx(gauss(rng), gauss(rng)));
  return GroupAlgebraElement::on_group_float(l.G, ts);
}

// pi(x) v for a sparse x, straight from translate coordinates.
VecC model_vector(const GnsModel& m, const GroupAlgebraElement& x) {
  VecC w = VecC::Zero(m.n);
  for (std::size_t i = 0; i < x.size(); ++i) w += x.coefficients()[i] * m.coords(x.elements()[i]);
  return w;
}

}  // namespace

TEST_CASE("star and multiplication on group algebra elements") {
  auto q8 = lab("q8");
  auto rng = make_rng(7, "gap.test.elements");

  // delta_g^* = delta_{g^{-1}}
  for (std::uint32_t g = 0; g < q8.G->size(); ++g) {
    const auto s = GroupAlgebraElement::delta(q8.G, g).star();
    REQUIRE(s.size() == 1);
    CHECK(s.elements()[0] == q8.G->inv(g));
    CHECK(s.coefficients()[0] == Cx(1.0, 0.0));
  }

  // g^2 = e makes a = (delta_e + delta_g)/2 a projection: a*a = a.
  std::uint32_t invol = 0;
  for (std::uint32_t g = 1; g < q8.G->size(); ++g)
    if (q8.G->order_of(g) == 2) invol = g;
  REQUIRE(invol != 0);
  const auto a = half_e_half(q8, invol);
  const auto b = mul(a.star(), a);
  REQUIRE(b.size() == 2);
  CHECK(b.elements()[0] == q8.G->identity());
  CHECK(b.elements()[1] == invol);
  CHECK(*b.exact_coefficient(0) == rc(1, 2));
  CHECK(*b.exact_coefficient(1) == rc(1, 2));

  // submultiplicativity of the l1 norm on random 5-term elements
  for (int t = 0; t < 20; ++t) {
    const auto x = random_element(q8, 5, rng);
    const auto y = random_element(q8, 5, rng);
    CHECK(mul(x, y).l1() <= x.l1() * y.l1() + 1e-10);
    const auto xss = x.star().star();
    REQUIRE(xss.size() == x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      CHECK(xss.elements()[i] == x.elements()[i]);
      CHECK(std::abs(xss.coefficients()[i] - x.coefficients()[i]) == 0.0);
    }
  }

  // duplicate ids merge; full cancellation is rejected
  const auto merged = GroupAlgebraElement::on_group(q8.G, {{invol, rc(1, 3)}, {invol, rc(2, 3)}});
  REQUIRE(merged.size() == 1);
  CHECK(*merged.exact_coefficient(0) == rc(1));
  CHECK_THROWS_AS(GroupAlgebraElement::on_group(q8.G, {{invol, rc(1)}, {invol, rc(-1)}}),
                  Error);
}

TEST_CASE("exact and floating l1 norms") {
  auto z6 = lab("cyclic(6)");
  const auto a = GroupAlgebraElement::on_group(
      z6.G, {{0, RationalComplex(rational_of(3, 5))},
             {1, RationalComplex(Rational(0), rational_of(-4, 5))},
             {2, rc(-2)}});
  CHECK(a.l1_exact() == rational_of(3 * 1 + 4 * 1 + 2 * 5, 5));  // 3/5 + 4/5 + 2
  CHECK(a.l1() == doctest::Approx(to_double(a.l1_exact())).epsilon(1e-14));

  // |1 + i| is irrational: the exact norm must refuse
  const auto bad = GroupAlgebraElement::on_group(
      z6.G, {{1, RationalComplex(Rational(1), Rational(1))}});
  CHECK_THROWS_AS(bad.l1_exact(), Error);
  CHECK(bad.l1() == doctest::Approx(std::sqrt(2.0)));

  // no exact layer, no exact norm
  CHECK_THROWS_AS(GroupAlgebraElement::on_group_float(z6.G, {{1, Cx(0.5, 0.0)}}).l1_exact(),
                  Error);
}

TEST_CASE("integer matrix elements: inverses, uniform elementary element, reduction") {
  const auto gens = sl_elementary_generators(2);
  REQUIRE(gens.size() == 4);
  for (const auto& M : word_ball(gens, 3)) {
    const auto MI = M.mul(M.inverse());
    CHECK(MI == IntegerMatrixElement::identity(2));
  }
  const auto gens3 = sl_elementary_generators(3);
  for (const auto& M : word_ball(gens3, 2))
    CHECK(M.inverse().mul(M) == IntegerMatrixElement::identity(3));

  const auto a = GroupAlgebraElement::uniform_on_elementary(2);
  REQUIRE(a.size() == 4);
  CHECK(a.l1_exact() == Rational(1));
  for (std::size_t i = 0; i < 4; ++i) CHECK(*a.exact_coefficient(i) == rc(1, 4));
  // the elementary set is inverse-closed, so a is self-adjoint (as a set;
  // canonical term order follows first appearance)
  const auto as = a.star();
  REQUIRE(as.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    bool found = false;
    for (std::size_t j = 0; j < 4; ++j)
      if (as.matrices()[i] == a.matrices()[j]) {
        found = true;
        CHECK(*as.exact_coefficient(i) == *a.exact_coefficient(j));
      }
    CHECK(found);
  }

  auto s3 = lab("sl(2,3)");
  const auto red = a.reduce_to(s3.G);
  REQUIRE(red.size() == 4);
  CHECK(red.l1_exact() == Rational(1));

  // entries congruent mod 3 collapse to one term
  const auto twist = GroupAlgebraElement::on_integer_group(
      2, {{IntegerMatrixElement::elementary(2, 0, 1, 3), rc(1, 2)},
          {IntegerMatrixElement::identity(2), rc(1, 2)}});
  const auto collapsed = twist.reduce_to(s3.G);
  REQUIRE(collapsed.size() == 1);
  CHECK(collapsed.elements()[0] == s3.G->identity());
  CHECK(*collapsed.exact_coefficient(0) == rc(1));
}

TEST_CASE("translation norms: sign character, trivial trace, regular trace") {
  // sign character of Z/2 sends the projection (delta_e + delta_g)/2 to zero
  auto z2 = lab("cyclic(2)");
  const auto sign = gns(row_trace(z2, 1));
  const auto a2 = half_e_half(z2, 1);
  const auto r0 = norm_pi(sign, a2, 0.01);
  CHECK(r0.norm <= 1e-10);
  CHECK(r0.norm_side);
  CHECK(r0.inequality_side);
  CHECK(r0.agree());

  // the trivial trace sends any probability element to norm 1
  auto q8 = lab("q8");
  const auto one = gns(Trace::constant_one(q8.G, q8.cls));
  const auto prob = GroupAlgebraElement::on_group(
      q8.G, {{0, rc(1, 4)}, {2, rc(1, 4)}, {5, rc(1, 4)}, {7, rc(1, 4)}});
  const auto r1 = norm_pi(one, prob, 0.9);
  CHECK(r1.norm == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_FALSE(r1.norm_side);
  CHECK_FALSE(r1.inequality_side);  // a violating x must be exhibited
  CHECK(!r1.witnesses.empty());
  CHECK(r1.agree());
  CHECK(norm_pi(one, prob, 1.0).borderline);

  // regular trace of Z/3 with the full averaging element: eigenvalues {1,0,0}
  auto z3 = lab("cyclic(3)");
  const auto reg = gns(Trace::delta_e(z3.G, z3.cls));
  const auto avg = GroupAlgebraElement::on_group(
      z3.G, {{0, rc(1, 3)}, {1, rc(1, 3)}, {2, rc(1, 3)}});
  const auto r2 = norm_pi(reg, avg, 1.0);
  CHECK(r2.norm == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(r2.worst_residual) <= 1e-9);
  CHECK(r2.borderline);
  CHECK(r2.inequality_side);
}

TEST_CASE("translation criterion is two-sided across a beta sweep") {
  auto q8 = lab("q8");
  auto s3 = lab("sl(2,3)");
  struct Probe {
    GnsModel m;
    GroupAlgebraElement a;
  };
  std::vector<Probe> probes;
  probes.push_back({gns(Trace::delta_e(q8.G, q8.cls)), GroupAlgebraElement::uniform_on_gens(q8.G)});
  probes.push_back({gns(row_trace(s3, row_of_degree(*s3.T, 2))),
                    GroupAlgebraElement::uniform_on_gens(s3.G)});
  auto rng = make_rng(3, "gap.test.sweep");
  probes.push_back({gns(row_trace(q8, row_of_degree(*q8.T, 2))), random_element(q8, 4, rng)});

  GapTestPolicy pol;
  pol.random_vectors = 300;
  for (const auto& p : probes) {
    const double n2 = norm_pi(p.m, p.a, 1.0, pol).norm;
    std::vector<double> betas;
    for (double off : {-0.3, -0.1, -0.02, -1e-7, 1e-7, 0.02, 0.1, 0.3}) {
      const double beta = n2 * n2 + off;
      if (beta > 1e-6) betas.push_back(beta);
    }
    for (const auto& rep : norm_pi_sweep(p.m, p.a, betas, pol)) {
      CHECK(rep.agree());
      if (!rep.borderline && !rep.norm_side) CHECK(!rep.witnesses.empty());
    }
  }
}

TEST_CASE("conjugation norms: abelian saturation and the Z/2 regular trace") {
  // abelian: c is trivial, so the restricted norm is 1 exactly when dim > 1
  auto z5 = lab("cyclic(5)");
  const auto reg5 = gns(Trace::delta_e(z5.G, z5.cls));
  const auto a5 = GroupAlgebraElement::uniform_on_gens(z5.G);
  CHECK(conj_restricted_norm(reg5, a5).value == doctest::Approx(1.0).epsilon(1e-10));
  const auto lin = gns(row_trace(z5, 1));
  CHECK(conj_restricted_norm(lin, a5).value == 0.0);

  // dim-1 model: inequality holds at any beta and the sides agree
  const auto rl = norm_conj(lin, a5, 0.5);
  CHECK(rl.norm_side);
  CHECK(rl.inequality_side);

  // saturation at beta = 1 for the 5-dimensional regular model
  const auto sat = norm_conj(reg5, a5, 1.0);
  CHECK(sat.borderline);
  CHECK(sat.worst_residual <= 1e-9);
  CHECK(sat.inequality_side);
  // strictly inside, the violation must be found
  const auto mid = norm_conj(reg5, a5, 0.5);
  CHECK_FALSE(mid.norm_side);
  CHECK_FALSE(mid.inequality_side);
  CHECK(mid.agree());

  // Z/2 regular trace: conjugation acts trivially on the 2-dim class-function
  // space, explicit matrices included
  auto z2 = lab("cyclic(2)");
  const auto reg2 = gns(Trace::delta_e(z2.G, z2.cls));
  const auto a2 = half_e_half(z2, 1);
  CHECK((algebra_image_conj(reg2, a2) - MatC::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(conj_restricted_norm(reg2, a2).value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("conjugation criterion: genuine gap on a matrix-group character") {
  auto s3 = lab("sl(2,3)");
  const auto m = gns(row_trace(s3, row_of_degree(*s3.T, 2)));
  const auto a = GroupAlgebraElement::uniform_on_gens(s3.G);
  const auto cert = conj_restricted_norm(m, a);
  CHECK(cert.value < 0.999);  // the conjugation walk has a spectral gap
  CHECK(cert.radius < 1e-8);

  const double n2 = cert.value * cert.value;
  GapTestPolicy pol;
  pol.random_vectors = 400;
  const auto above = norm_conj(m, a, std::min(1.0, (n2 + 1.0) / 2.0), pol);
  CHECK(above.norm_side);
  CHECK(above.inequality_side);
  CHECK(above.agree());
  const auto below = norm_conj(m, a, n2 * 0.8, pol);
  CHECK_FALSE(below.norm_side);
  CHECK_FALSE(below.inequality_side);
  CHECK(!below.witnesses.empty());
  CHECK(below.agree());

  // full sweep stays two-sided
  for (const auto& rep : norm_conj_sweep(m, a, {0.1, 0.3, n2 - 0.01, n2 + 0.01, 0.9, 1.0}, pol))
    CHECK(rep.agree());

  // the equivalence is only asserted for coefficient sum 1
  CHECK_THROWS_AS(norm_conj(m, GroupAlgebraElement::delta(s3.G, 2).scaled(rc(2)), 0.5), Error);
}

TEST_CASE("trace identities behind the norm formulas hold to 1e-10") {
  auto q8 = lab("q8");
  auto s3 = lab("sl(2,3)");
  auto z6 = lab("cyclic(6)");
  struct Probe {
    Lab* l;
    Trace phi;
  };
  std::vector<Probe> probes;
  probes.push_back({&q8, Trace::delta_e(q8.G, q8.cls)});
  probes.push_back({&s3, row_trace(s3, row_of_degree(*s3.T, 2))});
  probes.push_back({&z6, Trace::delta_e(z6.G, z6.cls)});

  auto rng = make_rng(19, "gap.test.identities");
  for (auto& p : probes) {
    const auto m = gns(p.phi);
    const auto e = GroupAlgebraElement::delta(p.l->G, p.l->G->identity());
    std::uniform_int_distribution<std::uint32_t> pick(0, p.l->G->size() - 1);
    double worst_norm = 0.0, worst_conj = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const auto x = random_element(*p.l, 1 + t % 5, rng);
      const VecC w = model_vector(m, x);

      // |pi(x) v|^2 = phi(x* x)
      const Cx rhs1 = trace_quadratic(p.phi, e, x);
      worst_norm = std::max(worst_norm, std::abs(Cx(w.squaredNorm()) - rhs1));

      // <c(gamma) w, w> = phi(gamma* x* gamma x)
      const std::uint32_t gamma = pick(rng);
      const Cx lhs2 = w.dot(m.apply_conj(gamma, w));
      const Cx rhs2 = trace_conj_quadratic(p.phi, GroupAlgebraElement::delta(p.l->G, gamma), x);
      worst_conj = std::max(worst_conj, std::abs(lhs2 - rhs2));
    }
    CHECK(worst_norm <= 1e-10 * 50);  // scaled: random x have l1 up to ~10
    CHECK(worst_conj <= 1e-10 * 50);
  }
}

TEST_CASE("tensor square: linear characters, Z/2 doubling, probability elements") {
  // linear character: the tensor representation is trivial and the
  // complement of Id is zero-dimensional
  auto z3 = lab("cyclic(3)");
  const auto lin = gns(row_trace(z3, 1));
  const auto a3 = GroupAlgebraElement::uniform_on_gens(z3.G);
  const auto t0 = norm_tensor(lin, a3, 0.25);
  CHECK(t0.full_norm == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(t0.restricted_norm == 0.0);
  CHECK(t0.norm_side);
  CHECK(t0.identities_ok);
  CHECK(t0.oneway_ok);

  // regular trace of Z/2: pi tensor pi* is two copies of the regular
  // representation; norm 1 and the identity line is preserved
  auto z2 = lab("cyclic(2)");
  const auto reg2 = gns(Trace::delta_e(z2.G, z2.cls));
  const auto a2 = GroupAlgebraElement::uniform_on_gens(z2.G);
  const auto t1 = norm_tensor(reg2, a2, 1.0);
  CHECK(t1.full_norm == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(t1.restricted_norm == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(t1.identities_ok);
  CHECK(t1.oneway_ok);

  // probability elements give full tensor norm exactly 1 (Id eigenvector)
  auto q8 = lab("q8");
  const auto chi = gns(row_trace(q8, row_of_degree(*q8.T, 2)));
  const auto t2 = norm_tensor(chi, GroupAlgebraElement::uniform_on_gens(q8.G), 1.0);
  CHECK(t2.full_norm == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(t2.identities_ok);
  CHECK(t2.oneway_ok);
  CHECK(t2.identity_error <= 1e-9);

  // the one-way bound is also exercised on the 8-dim regular model of q8
  const auto t3 = norm_tensor(gns(Trace::delta_e(q8.G, q8.cls)),
                              GroupAlgebraElement::uniform_on_gens(q8.G), 1.0);
  CHECK(t3.identities_ok);
  CHECK(t3.oneway_ok);

  // dimension budget: 32 is the cap for the 1024-dim superoperator
  auto s5 = lab("sl(2,5)");
  const auto big = gns(row_trace(s5, max_degree_row(*s5.T)));
  CHECK_THROWS_AS(norm_tensor(big, GroupAlgebraElement::uniform_on_gens(s5.G), 1.0), Error);
}

TEST_CASE("complement norm criterion on explicit matrices") {
  // A = diag(1, 0), v = e1: restricted norm 0, inequality holds at beta = 1/4
  MatC A = MatC::Zero(2, 2);
  A(0, 0) = 1.0;
  VecC v = VecC::Zero(2);
  v(0) = 1.0;
  const auto r0 = complement_norm_lemma(A, v, 0.25);
  CHECK(r0.restricted_norm == 0.0);
  CHECK(r0.norm_side);
  CHECK(r0.inequality_side);
  CHECK(r0.worst_excess <= 1e-12);
  CHECK(r0.agree());

  // A = Id: restricted norm 1 > sqrt(1/2); w = e2 is the witness
  const auto r1 = complement_norm_lemma(MatC::Identity(2, 2), v, 0.5);
  CHECK_FALSE(r1.norm_side);
  CHECK_FALSE(r1.inequality_side);
  CHECK(r1.worst_excess >= 0.5 - 1e-12);
  CHECK(r1.agree());

  // preconditions
  CHECK_THROWS_AS(complement_norm_lemma(MatC::Identity(2, 2), 2.0 * v, 0.5), Error);
  CHECK_THROWS_AS(complement_norm_lemma(A, VecC::Unit(2, 1), 0.5), Error);  // Av != v
  CHECK_THROWS_AS(complement_norm_lemma(MatC::Identity(2, 2), v, 0.0), Error);
  CHECK_THROWS_AS(complement_norm_lemma(MatC::Identity(2, 2), v, 1.0), Error);
}

TEST_CASE("complement norm criterion agrees with exact restricted norms") {
  auto rng = make_rng(23, "gap.test.complement");
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  for (std::uint32_t n = 2; n <= 10; ++n) {
    for (int inst = 0; inst < 50; ++inst) {
      // random block operator fixing a random unit vector two-sidedly
      VecC v(n);
      for (std::uint32_t i = 0; i < n; ++i) v(i) = Cx(gauss(rng), gauss(rng));
      v.normalize();
      MatC full(n, 1);
      full.col(0) = v;
      Eigen::HouseholderQR<MatC> qr(full);
      const MatC Q1 = (qr.householderQ() * MatC::Identity(n, n)).rightCols(n - 1);
      MatC M(n - 1, n - 1);
      for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index j = 0; j < M.cols(); ++j) M(i, j) = Cx(gauss(rng), gauss(rng));
      const double beta = unit(rng);
      // scale the block so the restricted norm brackets sqrt(beta) both ways
      const double target = std::sqrt(beta) * (inst % 2 == 0 ? 0.7 : 1.4);
      M *= target / operator_norm_certified(M).value;
      const MatC A = v * v.adjoint() + Q1 * M * Q1.adjoint();

      const auto rep = complement_norm_lemma(A, v, beta, 120, 1000 + inst);
      CHECK(rep.agree());
      CHECK(rep.norm_side == (inst % 2 == 0));
      CHECK(std::abs(rep.restricted_norm - target) <= 1e-8);
    }
  }

  // a random unitary fixing v has restricted norm exactly 1
  for (int inst = 0; inst < 10; ++inst) {
    const std::uint32_t n = 4;
    VecC v(n);
    for (std::uint32_t i = 0; i < n; ++i) v(i) = Cx(gauss(rng), gauss(rng));
    v.normalize();
    MatC full(n, 1);
    full.col(0) = v;
    Eigen::HouseholderQR<MatC> qr(full);
    const MatC Q1 = (qr.householderQ() * MatC::Identity(n, n)).rightCols(n - 1);
    MatC R(n - 1, n - 1);
    for (Eigen::Index i = 0; i < R.rows(); ++i)
      for (Eigen::Index j = 0; j < R.cols(); ++j) R(i, j) = Cx(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<MatC> qru(R);
    const MatC U = qru.householderQ() * MatC::Identity(n - 1, n - 1);
    const MatC A = v * v.adjoint() + Q1 * U * Q1.adjoint();
    const auto rep = complement_norm_lemma(A, v, 0.99, 150, 2000 + inst);
    CHECK(rep.restricted_norm == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_FALSE(rep.norm_side);
    CHECK_FALSE(rep.inequality_side);
    CHECK(rep.agree());
  }
}

TEST_CASE("certificate propagation: constant sequences carry their gap to the limit") {
  auto s3 = lab("sl(2,3)");
  const std::uint32_t row = max_degree_row(*s3.T);
  const auto m = gns(row_trace(s3, row));
  const auto a = GroupAlgebraElement::uniform_on_elementary(2);
  const auto a_fin = a.reduce_to(s3.G);
  const auto cert = conj_restricted_norm(m, a_fin);
  const double beta = std::min(1.0, cert.value * cert.value + 0.05);

  const Trace pulled = Trace::pulled_back(s3.G, s3.cls, s3.T, row);
  const std::vector<Trace> seq = {pulled, pulled, pulled};
  // conjugation arguments fold back into the ball only from radius 6 on
  const auto ball = word_ball(sl_elementary_generators(2), 6);
  const auto rep = certificate_propagation(seq, a, beta, ball, GapKind::Conjugation);
  CHECK(rep.common_beta);
  CHECK(rep.propagated);
  CHECK(rep.tested_vectors > 10);
  CHECK(rep.member_worst <= 1e-8);
  CHECK(rep.limit_worst <= 1e-8);
  CHECK(rep.achieved_tol == 0.0);  // constant sequence
}

TEST_CASE("certificate propagation: regular traces of distinct moduli share a bound") {
  const auto a = GroupAlgebraElement::uniform_on_elementary(2);
  std::vector<Trace> seq;
  for (const char* desc : {"sl(2,5)", "sl(2,7)"}) {
    auto G = GroupHandle::build(desc);
    auto cls = conjugacy_classes(*G);
    seq.push_back(Trace::delta_e(G, cls));
  }

  // no radius-4 word except the identity is congruent to 1 mod 5 or mod 7,
  // so both members restrict to the same indicator on the ball; the walk
  // operator has norm exactly 1 (probabilities on a unitary image)
  const auto ball = word_ball(sl_elementary_generators(2), 4);
  const auto rep = certificate_propagation(seq, a, 1.0, ball, GapKind::Translation);
  CHECK(rep.common_beta);
  CHECK(rep.propagated);
  CHECK(rep.achieved_tol == 0.0);
  CHECK(rep.tested_vectors > 10);
  CHECK(rep.member_worst <= 1e-8);
  CHECK(rep.limit_worst <= 1e-8);
}

TEST_CASE("certificate propagation: shrinking gaps are flagged, not propagated") {
  auto s3 = lab("sl(2,3)");
  const auto a = GroupAlgebraElement::uniform_on_elementary(2);
  const auto a_fin = a.reduce_to(s3.G);

  const Trace chi = row_trace(s3, row_of_degree(*s3.T, 2));
  const Trace one = Trace::constant_one(s3.G, s3.cls);
  // the trivial component grows along the sequence, pushing the translation
  // norm toward 1
  std::vector<Trace> seq = {
      chi,
      convex_combine({rational_of(1, 2), rational_of(1, 2)}, {chi, one}),
      convex_combine({rational_of(1, 6), rational_of(5, 6)}, {chi, one}),
  };
  const auto m = gns(chi);
  const double n2 = norm_pi(m, a_fin, 1.0).norm;
  const double beta = std::min(1.0, (n2 * n2 + 1.0) / 2.0);  // first member passes, later ones cannot

  const auto ball = word_ball(sl_elementary_generators(2), 3);
  PropagationPolicy pol;
  pol.declared_limit_tol = 1.0;
  const auto rep = certificate_propagation(seq, a, beta, ball, GapKind::Translation, pol);
  CHECK_FALSE(rep.common_beta);
  CHECK_FALSE(rep.propagated);
  CHECK(rep.member_worst > 1e-8);
  CHECK(rep.note.find("no common") != std::string::npos);
}

TEST_CASE("reports serialize and tabulate") {
  auto z3 = lab("cyclic(3)");
  const auto reg = gns(Trace::delta_e(z3.G, z3.cls));
  const auto a = GroupAlgebraElement::uniform_on_gens(z3.G);
  const auto rep = norm_pi(reg, a, 1.0);
  const auto j = gap_report_to_json(rep);
  CHECK(j["schema"] == "charlab.gap.v1");
  CHECK(j["kind"] == "translation");
  CHECK(j.contains("norm"));
  CHECK(j.contains("worst_residual"));
  CHECK(j.contains("witnesses"));
  CHECK(j["agree"].get<bool>());

  const auto table = gap_table(norm_pi_sweep(reg, a, {0.5, 1.0}));
  CHECK(table.find("beta") != std::string::npos);
  CHECK(table.find("translation") != std::string::npos);

  const auto t = norm_tensor(gns(row_trace(z3, 1)), a, 0.5);
  CHECK(tensor_report_to_json(t)["schema"] == "charlab.tensor.v1");
}
