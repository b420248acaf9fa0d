#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "charlab/char_table.hpp"
#include "charlab/error.hpp"
#include "charlab/gap.hpp"
#include "charlab/gns.hpp"
#include "charlab/group.hpp"
#include "charlab/intmatrix.hpp"
#include "charlab/relative.hpp"
#include "charlab/trace.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

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

std::uint32_t max_degree_row(const CharacterTable& T) {
  std::uint32_t best = 0;
  for (std::uint32_t r = 1; r < T.rows(); ++r)
    if (T.degree[r] > T.degree[best]) best = r;
  return best;
}

Cyclotomic cyc(std::int64_t num, std::int64_t den) {
  return Cyclotomic(1, {rational_of(num, den)});
}

// Element id of the translation by (v1, v2) in vec(3,2).
std::uint32_t vec_id(const GroupHandle& G, std::uint32_t v1, std::uint32_t v2) {
  const std::uint32_t D = G.mat_dim();
  std::vector<std::uint8_t> e(std::size_t(D) * D, 0);
  for (std::uint32_t i = 0; i < D; ++i) e[std::size_t(i) * D + i] = 1;
  e[0 * D + (D - 1)] = std::uint8_t(v1);
  e[1 * D + (D - 1)] = std::uint8_t(v2);
  const auto idx = G.index_of_entries(e.data());
  REQUIRE(idx.has_value());
  return *idx;
}

// Uniform distribution on the eight nontrivial additive characters: 1 at the
// origin, -1/8 elsewhere.
Trace dual_orbit_trace(const Lab& l) {
  std::vector<Cyclotomic> vals(l.cls.count(), cyc(-1, 8));
  vals[l.cls.class_of[l.G->identity()]] = Cyclotomic::one();
  return Trace::class_function(l.G, l.cls, vals, "f3-plane dual orbit");
}

// The four elementary shears mod 3, as automorphisms of the translation plane.
std::vector<Automorphism> shear_gens(const Lab& l) {
  std::vector<Automorphism> gens;
  for (auto [i, j] : {std::pair{0u, 1u}, std::pair{1u, 0u}})
    for (std::int64_t c : {1, 2})
      gens.push_back(Automorphism::linear(l.G, IntegerMatrixElement::elementary(2, i, j, c)));
  return gens;
}

RationalComplex rc(std::int64_t num, std::int64_t den = 1) {
  return RationalComplex(rational_of(num, den));
}

// Equal weights on the symmetrized generator set of G, once as a group
// algebra element and once as the matching inner acting element.
std::pair<GroupAlgebraElement, ActingElement> inner_pair(const Lab& l) {
  std::vector<std::uint32_t> sym;
  for (std::uint32_t s : l.G->generators())
    for (std::uint32_t g : {s, l.G->inv(s)})
      if (std::find(sym.begin(), sym.end(), g) == sym.end()) sym.push_back(g);
  const RationalComplex w = rc(1, std::int64_t(sym.size()));
  std::vector<std::pair<std::uint32_t, RationalComplex>> terms;
  ActingElement acting;
  for (std::uint32_t g : sym) {
    terms.emplace_back(g, w);
    acting.emplace_back(Automorphism::inner(l.G, g), w);
  }
  return {GroupAlgebraElement::on_group(l.G, terms), std::move(acting)};
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  REQUIRE(false);
  return ErrorKind::Internal;
}

}  // namespace

TEST_CASE("automorphism construction validates bijection and homomorphism") {
  Lab z4 = lab("cyclic(4)");
  const Automorphism id = Automorphism::identity(z4.G);
  for (std::uint32_t g = 0; g < z4.G->size(); ++g) CHECK(id(g) == g);

  // Inversion is an automorphism of an abelian group; built by hand.
  std::vector<std::uint32_t> neg(z4.G->size());
  for (std::uint32_t g = 0; g < z4.G->size(); ++g) neg[g] = z4.G->inv(g);
  const Automorphism inv_map(z4.G, neg);
  CHECK(inv_map.compose(inv_map) == id);
  CHECK(inv_map.inverse() == inv_map);
  CHECK(inv_map.key() != id.key());

  // Swapping the generator with its square breaks the homomorphism law.
  const std::uint32_t s = z4.G->generators()[0];
  const std::uint32_t s2 = z4.G->mul(s, s);
  std::vector<std::uint32_t> swapped(z4.G->size());
  for (std::uint32_t g = 0; g < z4.G->size(); ++g) swapped[g] = g;
  std::swap(swapped[s], swapped[s2]);
  CHECK_THROWS_AS(Automorphism(z4.G, swapped), Error);

  // Non-injective image.
  CHECK_THROWS_AS(Automorphism(z4.G, std::vector<std::uint32_t>(z4.G->size(), 0u)), Error);
  // Wrong size.
  CHECK_THROWS_AS(Automorphism(z4.G, {0u, 1u}), Error);

  Lab q8 = lab("q8");
  const std::uint32_t t = q8.G->generators()[0];
  const Automorphism conj_t = Automorphism::inner(q8.G, t);
  CHECK(conj_t.compose(Automorphism::inner(q8.G, q8.G->inv(t))) == Automorphism::identity(q8.G));
  for (std::uint32_t g = 0; g < q8.G->size(); ++g) CHECK(conj_t(g) == q8.G->conjugate(t, g));
}

TEST_CASE("linear automorphisms act on the translation plane") {
  Lab f9 = lab("vec(3,2)");
  REQUIRE(f9.G->size() == 9);

  const Automorphism shear = Automorphism::linear(f9.G, IntegerMatrixElement::elementary(2, 0, 1, 1));
  // (v1, v2) -> (v1 + v2, v2).
  CHECK(shear(vec_id(*f9.G, 1, 0)) == vec_id(*f9.G, 1, 0));
  CHECK(shear(vec_id(*f9.G, 0, 1)) == vec_id(*f9.G, 1, 1));
  CHECK(shear(vec_id(*f9.G, 2, 2)) == vec_id(*f9.G, 1, 2));
  CHECK(shear(f9.G->identity()) == f9.G->identity());

  // Negative entries reduce mod p.
  const Automorphism unshear = Automorphism::linear(f9.G, IntegerMatrixElement::elementary(2, 0, 1, -1));
  CHECK(shear.compose(unshear) == Automorphism::identity(f9.G));
  CHECK(shear.inverse() == unshear);

  CHECK_THROWS_AS(Automorphism::linear(f9.G, IntegerMatrixElement::identity(3)), Error);
  Lab z6 = lab("cyclic(6)");
  CHECK_THROWS_AS(Automorphism::linear(z6.G, IntegerMatrixElement::identity(2)), Error);

  const AutomorphismAction act = automorphism_action(f9.G, shear_gens(f9));
  CHECK(act.closure_size == 24);  // the shears generate SL_2(F_3)
  CHECK(act.inner_contained);     // abelian group: every inner map is trivial
  CHECK(act.generators.size() == 4);

  CHECK(kind_of([&] { automorphism_action(f9.G, shear_gens(f9), 5); }) == ErrorKind::Budget);
  CHECK_THROWS_AS(automorphism_action(z6.G, shear_gens(f9)), Error);
}

TEST_CASE("inner action closure and trace invariance") {
  Lab sl = lab("sl(2,3)");
  const AutomorphismAction inn = inner_action(sl.G);
  CHECK(inn.closure_size == 12);  // SL_2(F_3) / center
  CHECK(inn.inner_contained);

  // Any character row is a class function, hence invariant under conjugation.
  const Trace chi = Trace::character_row(sl.G, sl.cls, sl.T, max_degree_row(*sl.T));
  CHECK(relative_invariance(chi, inn));

  Lab f9 = lab("vec(3,2)");
  const AutomorphismAction act = automorphism_action(f9.G, shear_gens(f9));
  CHECK(relative_invariance(dual_orbit_trace(f9), act));
  CHECK(relative_invariance(Trace::delta_e(f9.G, f9.cls), act));
  CHECK(relative_invariance(Trace::constant_one(f9.G, f9.cls), act));

  // A single nontrivial character of the plane is moved by some shear.
  for (std::uint32_t r = 0; r < f9.T->rows(); ++r) {
    bool all_one = true;
    for (std::uint32_t c = 0; c < f9.cls.count(); ++c)
      all_one = all_one && std::abs(Trace::character_row(f9.G, f9.cls, f9.T, r).class_value(c) -
                                    Cx(1.0, 0.0)) < 1e-12;
    if (all_one) continue;
    CHECK_FALSE(relative_invariance(Trace::character_row(f9.G, f9.cls, f9.T, r), act));
  }

  CHECK_THROWS_AS(relative_invariance(chi, act), Error);  // different groups
}

TEST_CASE("extended unitary: isometry, fixed vector, intertwining") {
  Lab f9 = lab("vec(3,2)");
  const GnsModel m = gns(dual_orbit_trace(f9));
  REQUIRE(m.n == 8);

  const Automorphism shear = Automorphism::linear(f9.G, IntegerMatrixElement::elementary(2, 0, 1, 1));
  const MatC U = relative_unitary(m, shear);
  CHECK((U.adjoint() * U - MatC::Identity(m.n, m.n)).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK((U * m.v - m.v).norm() <= 1e-9);
  for (std::uint32_t g = 0; g < f9.G->size(); ++g)
    CHECK((U * m.pi_of(g) * U.adjoint() - m.pi_of(shear(g))).cwiseAbs().maxCoeff() <= 1e-8);

  // For an inner automorphism the extension is the conjugation image: the
  // unique unitary fixing the cyclic vector with the intertwining property.
  Lab sl = lab("sl(2,3)");
  const GnsModel mc = gns(Trace::character_row(sl.G, sl.cls, sl.T, max_degree_row(*sl.T)));
  const std::uint32_t s = sl.G->generators()[0];
  const MatC Ui = relative_unitary(mc, Automorphism::inner(sl.G, s));
  CHECK((Ui - mc.conj_of(s)).cwiseAbs().maxCoeff() <= 1e-8);

  // A trace that is not invariant under the automorphism has no extension.
  std::uint32_t moved = 0;
  for (std::uint32_t r = 0; r < f9.T->rows(); ++r) {
    const Trace row = Trace::character_row(f9.G, f9.cls, f9.T, r);
    bool inv = true;
    for (std::uint32_t c = 0; c < f9.cls.count(); ++c)
      inv = inv && std::abs(row.class_value(c) - row.class_value(f9.cls.class_of[shear(f9.cls.rep[c])])) < 1e-12;
    if (inv) continue;
    moved = r;
    break;
  }
  const GnsModel bad = gns(Trace::character_row(f9.G, f9.cls, f9.T, moved));
  CHECK_THROWS_AS(relative_unitary(bad, shear), Error);
}

TEST_CASE("relative gap matches the conjugation gap for inner actions") {
  Lab sl = lab("sl(2,3)");
  const GnsModel m = gns(Trace::character_row(sl.G, sl.cls, sl.T, max_degree_row(*sl.T)));
  const AutomorphismAction inn = inner_action(sl.G);
  auto [a_conj, a_rel] = inner_pair(sl);

  // The pushforward along gamma -> Inn(gamma) turns the conjugation image
  // into the extended image, so both routes must produce the same row.
  const NormCert nc = conj_restricted_norm(m, a_conj);
  const NormCert na = alpha_restricted_norm(m, a_rel);
  CHECK(std::abs(nc.value - na.value) <= 1e-9);
  REQUIRE(nc.value > 0.3);
  REQUIRE(nc.value < 0.999);

  for (double beta : {std::min(1.0, nc.value * nc.value + 0.05), nc.value * nc.value - 0.05}) {
    const GapReport rc_ = norm_conj(m, a_conj, beta);
    const GapReport ra = alpha_gap(m, inn, a_rel, beta);
    CHECK(ra.kind == "relative");
    CHECK(std::abs(ra.norm - rc_.norm) <= 1e-9);
    CHECK(std::abs(ra.worst_residual - rc_.worst_residual) <= 1e-9);
    CHECK(ra.norm_side == rc_.norm_side);
    CHECK(ra.inequality_side == rc_.inequality_side);
    CHECK(ra.agree());
  }
}

TEST_CASE("relative gap on the dual orbit of the translation plane") {
  Lab f9 = lab("vec(3,2)");
  const GnsModel m = gns(dual_orbit_trace(f9));
  const AutomorphismAction act = automorphism_action(f9.G, shear_gens(f9));

  ActingElement a;
  for (const Automorphism& lam : act.generators) a.emplace_back(lam, rc(1, 4));

  // Independent oracle: the extended image permutes the eight nontrivial
  // characters chi_w by w -> M^T w; the restricted norm is the second
  // largest eigenvalue modulus of the averaged permutation matrix.
  std::vector<std::pair<int, int>> duals;
  for (int w1 = 0; w1 < 3; ++w1)
    for (int w2 = 0; w2 < 3; ++w2)
      if (w1 || w2) duals.emplace_back(w1, w2);
  MatC P = MatC::Zero(8, 8);
  for (auto [i, j] : {std::pair{0, 1}, std::pair{1, 0}})
    for (int c : {1, 2}) {
      for (std::size_t k = 0; k < duals.size(); ++k) {
        auto [w1, w2] = duals[k];
        // transpose of the shear with entry c at (i, j)
        int u1 = w1, u2 = w2;
        if (i == 0 && j == 1) u2 = (w2 + c * w1) % 3;
        if (i == 1 && j == 0) u1 = (w1 + c * w2) % 3;
        const auto it = std::find(duals.begin(), duals.end(), std::pair{u1, u2});
        REQUIRE(it != duals.end());
        P(std::size_t(it - duals.begin()), k) += 0.25;
      }
    }
  Eigen::SelfAdjointEigenSolver<MatC> es(0.5 * (P + P.adjoint()));
  std::vector<double> mags(8);
  for (int k = 0; k < 8; ++k) mags[k] = std::abs(es.eigenvalues()(k));
  std::sort(mags.rbegin(), mags.rend());
  CHECK(std::abs(mags[0] - 1.0) <= 1e-9);  // the cyclic vector itself
  const double expected = mags[1];
  REQUIRE(expected > 0.05);
  REQUIRE(expected < 0.999);

  const NormCert cert = alpha_restricted_norm(m, a);
  CHECK(std::abs(cert.value - expected) <= 1e-9);

  const GapReport above = alpha_gap(m, act, a, std::min(1.0, expected * expected + 0.05));
  CHECK(above.norm_side);
  CHECK(above.inequality_side);
  CHECK(above.agree());
  CHECK(above.worst_residual <= 1e-9);

  const GapReport below = alpha_gap(m, act, a, std::max(0.01, expected * expected - 0.05));
  CHECK_FALSE(below.norm_side);
  CHECK_FALSE(below.inequality_side);
  CHECK(below.agree());
  CHECK(!below.witnesses.empty());

  // The identity acting element has restricted norm exactly 1.
  ActingElement one;
  one.emplace_back(Automorphism::identity(f9.G), rc(1));
  const GapReport idr = alpha_gap(m, act, one, 1.0);
  CHECK(idr.norm == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(idr.norm_side);
  CHECK(idr.inequality_side);

  // Coefficients must sum to 1; beta must sit in (0, 1].
  ActingElement half;
  half.emplace_back(Automorphism::identity(f9.G), rc(1, 2));
  CHECK_THROWS_AS(alpha_gap(m, act, half, 0.5), Error);
  CHECK_THROWS_AS(alpha_gap(m, act, {}, 0.5), Error);
  CHECK_THROWS_AS(alpha_gap(m, act, one, 0.0), Error);
  CHECK_THROWS_AS(alpha_gap(m, act, one, 1.5), Error);
}

TEST_CASE("relative character criterion: dual orbit, mixture, regular trace") {
  Lab f9 = lab("vec(3,2)");
  const AutomorphismAction act = automorphism_action(f9.G, shear_gens(f9));

  // The dual orbit trace is extreme among invariant traces: the shears act
  // transitively on its eight character components.
  const RelativeCharacterReport orb = is_relative_character(gns(dual_orbit_trace(f9)), act);
  CHECK(orb.dim_invariant == 1);
  CHECK(orb.dim_central == 1);
  CHECK(orb.routes_agree);
  CHECK(orb.relative_character);

  // Mixing in the trivial character splits the invariant space in two.
  const Trace mix = convex_combine({rational_of(1, 2), rational_of(1, 2)},
                                   {Trace::constant_one(f9.G, f9.cls), dual_orbit_trace(f9)});
  const RelativeCharacterReport mixed = is_relative_character(gns(mix), act);
  CHECK(mixed.dim_invariant == 2);
  CHECK(mixed.dim_central == 2);
  CHECK(mixed.routes_agree);
  CHECK_FALSE(mixed.relative_character);

  // The regular trace sees one invariant dimension per orbit on the group:
  // the origin and everything else.
  const RelativeCharacterReport reg = is_relative_character(gns(Trace::delta_e(f9.G, f9.cls)), act);
  CHECK(reg.dim_invariant == 2);
  CHECK(reg.dim_central == 2);
  CHECK(reg.routes_agree);
  CHECK_FALSE(reg.relative_character);

  // Relative to the inner action the criterion reduces to extremality.
  Lab sl = lab("sl(2,3)");
  const GnsModel mc = gns(Trace::character_row(sl.G, sl.cls, sl.T, max_degree_row(*sl.T)));
  const RelativeCharacterReport ext = is_relative_character(mc, inner_action(sl.G));
  CHECK(ext.dim_invariant == 1);
  CHECK(ext.relative_character);

  Lab z2 = lab("cyclic(2)");
  const Trace half = convex_combine(
      {rational_of(1, 2), rational_of(1, 2)},
      {Trace::constant_one(z2.G, z2.cls), Trace::character_row(z2.G, z2.cls, z2.T, 1)});
  const RelativeCharacterReport notext = is_relative_character(gns(half), inner_action(z2.G));
  CHECK(notext.dim_invariant == 2);
  CHECK(notext.dim_central == 2);
  CHECK_FALSE(notext.relative_character);

  // Without all inner automorphisms the two routes are not comparable.
  Lab q8 = lab("q8");
  const AutomorphismAction trivial_act = automorphism_action(q8.G, {});
  CHECK_FALSE(trivial_act.inner_contained);
  const GnsModel mq = gns(Trace::delta_e(q8.G, q8.cls));
  CHECK_THROWS_AS(is_relative_character(mq, trivial_act), Error);
}

TEST_CASE("rational orbits under the elementary generators") {
  const auto gens3 = sl_elementary_generators(3);

  const RationalOrbit half = orbit({2, {1, 0, 0}}, gens3);
  CHECK(half.q == 2);
  CHECK(half.points.size() == 7);  // every nonzero point mod 2
  CHECK(half.points[0] == std::vector<std::uint32_t>{1, 0, 0});

  const RationalOrbit fifth = orbit({5, {1, 0, 0}}, gens3);
  CHECK(fifth.points.size() == 124);  // 5^3 - 1: transitivity on nonzero points

  // Denominator 4: the primitive points form one orbit, the doubled copy of
  // the mod-2 orbit another.
  CHECK(orbit({4, {1, 0, 0}}, gens3).points.size() == 56);
  CHECK(orbit({4, {2, 0, 0}}, gens3).points.size() == 7);

  CHECK(kind_of([&] { orbit({5, {1, 0, 0}}, gens3, 100); }) == ErrorKind::Budget);
  CHECK_THROWS_AS(orbit({5, {1, 0}}, gens3), Error);   // dimension mismatch
  CHECK_THROWS_AS(orbit({0, {1, 0, 0}}, gens3), Error);  // zero denominator
}

TEST_CASE("orbit traces: exact values and positivity") {
  const auto gens3 = sl_elementary_generators(3);

  const TorusTrace phi2 = orbit_trace(orbit({2, {1, 0, 0}}, gens3));
  CHECK(std::abs(phi2.value({0, 0, 0}) - Cx(1.0, 0.0)) <= 1e-12);
  CHECK(std::abs(phi2.value({1, 0, 0}) - Cx(-1.0 / 7.0, 0.0)) <= 1e-12);
  CHECK(phi2.rational_value({1, 0, 0}) == rational_of(-1, 7));
  CHECK(phi2.rational_value({1, 1, 1}) == rational_of(-1, 7));
  CHECK(phi2.rational_value({2, 0, 0}) == rational_of(1));  // congruent to the origin

  const TorusTrace phi5 = orbit_trace(orbit({5, {1, 0, 0}}, gens3));
  CHECK(phi5.rational_value({3, 1, 0}) == rational_of(-1, 124));
  CHECK(phi5.rational_value({5, 0, 0}) == rational_of(1));

  // Composite denominator: the primitive orbit vanishes at primitive duals
  // and matches the mod-2 value on doubled ones.
  const TorusTrace phi4 = orbit_trace(orbit({4, {1, 0, 0}}, gens3));
  CHECK(phi4.rational_value({1, 0, 0}) == rational_of(0));
  CHECK(phi4.rational_value({2, 0, 0}) == rational_of(-1, 7));

  const TorusTraceCheck psd = torus_trace_check(phi2, 1);
  CHECK(psd.hermitian);
  CHECK(psd.positive);
  CHECK(psd.pass());
  CHECK(torus_trace_check(phi4, 1).pass());

  // Exact evaluation is capped at denominator 64.
  const TorusTrace big = orbit_trace(RationalOrbit{2, 72, {{1, 0}}});
  CHECK(std::abs(big.value({0, 0}) - Cx(1.0, 0.0)) <= 1e-12);
  CHECK_THROWS_AS(big.exact_value({1, 0}), Error);
  CHECK_FALSE(big.rational_value({1, 0}).has_value());

  CHECK_THROWS_AS(phi2.value({1, 0}), Error);  // dimension mismatch
  CHECK_THROWS_AS(orbit_trace(RationalOrbit{3, 5, {}}), Error);
}

TEST_CASE("torus invariance on the lattice ball") {
  const auto gens3 = sl_elementary_generators(3);
  const TorusTrace phi2 = orbit_trace(orbit({2, {1, 0, 0}}, gens3));
  CHECK(relative_invariance(phi2, gens3, 2));

  const TorusTrace phi5 = orbit_trace(orbit({5, {1, 0, 0}}, gens3));
  CHECK(relative_invariance(phi5, gens3, 1));

  // A point mass off the orbit closure is positive definite but not
  // invariant: it is a character of the lattice, moved by the shears.
  const TorusTrace point = orbit_trace(RationalOrbit{3, 3, {{1, 0, 0}}});
  CHECK(torus_trace_check(point, 1).pass());
  CHECK_FALSE(relative_invariance(point, gens3, 1));

  CHECK_THROWS_AS(relative_invariance(phi2, sl_elementary_generators(2), 1), Error);
  CHECK_THROWS_AS(relative_invariance(phi2, gens3, 0), Error);
}

TEST_CASE("denominator scan rows, flags, and serialization") {
  const TorusScanSeries s = torus_limit_scan(3, {1, 2, 3, 5}, 1);
  REQUIRE(s.rows.size() == 4);
  CHECK(s.d == 3);
  CHECK(s.ball == 1);

  CHECK(s.rows[0].q == 1);
  CHECK(s.rows[0].flag == "trivial denominator");
  REQUIRE(s.rows[0].orbits.size() == 1);
  CHECK(s.rows[0].orbits[0].orbit_size == 1);
  CHECK(s.rows[0].max_abs == doctest::Approx(1.0));
  CHECK(s.rows[0].orbits[0].max_abs_exact == rational_of(1));

  // Prime denominators: a single orbit of size q^3 - 1 whose trace is the
  // complete character sum, |phi| = 1/(q^3 - 1) everywhere off the origin.
  const std::uint32_t primes[] = {2, 3, 5};
  for (std::size_t k = 1; k < 4; ++k) {
    const TorusScanRow& row = s.rows[k];
    const std::uint64_t expect = std::uint64_t(primes[k - 1]) * primes[k - 1] * primes[k - 1] - 1;
    CHECK(row.flag.empty());
    REQUIRE(row.orbits.size() == 1);
    CHECK(row.orbits[0].orbit_size == expect);
    CHECK(row.orbits[0].max_abs_exact == rational_of(1, std::int64_t(expect)));
    CHECK(row.max_abs == doctest::Approx(1.0 / double(expect)));
  }

  // The two-dimensional regime is reported but labeled.
  const TorusScanSeries flat = torus_limit_scan(2, {5}, 1);
  CHECK(flat.rows[0].flag.find("d = 2") != std::string::npos);
  REQUIRE(flat.rows[0].orbits.size() == 1);
  CHECK(flat.rows[0].orbits[0].orbit_size == 24);
  CHECK(flat.rows[0].orbits[0].max_abs_exact == rational_of(1, 24));

  CHECK(kind_of([&] { torus_limit_scan(3, {5}, 1, 100); }) == ErrorKind::Budget);
  CHECK_THROWS_AS(torus_limit_scan(1, {5}, 1), Error);
  CHECK_THROWS_AS(torus_limit_scan(3, {5}, 0), Error);
  CHECK_THROWS_AS(torus_limit_scan(3, {}, 1), Error);

  const std::string csv = torus_scan_csv(s);
  CHECK(csv.find("q,orbit,orbit_size,argmax_m,abs_phi,abs_phi_exact,flag") == 0);
  CHECK(csv.find("trivial denominator") != std::string::npos);
  CHECK(csv.find(",1/7,") != std::string::npos);
  CHECK(csv.find("2,0,7,") != std::string::npos);

  const nlohmann::json j = torus_scan_to_json(s);
  CHECK(j.at("schema") == "charlab.torus-scan.v1");
  CHECK(j.at("d") == 3);
  CHECK(j.at("rows").size() == 4);
  CHECK(j.at("rows")[1].at("orbits")[0].at("size") == 7);
  CHECK(j.at("rows")[1].at("orbits")[0].at("abs_phi_exact") == "1/7");
  CHECK(j.at("rows")[0].at("orbits")[0].at("abs_phi_exact") == "1");
}
