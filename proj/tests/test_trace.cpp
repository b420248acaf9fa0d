#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "charlab/char_table.hpp"
#include "charlab/error.hpp"
#include "charlab/group.hpp"
#include "charlab/trace.hpp"

#include <algorithm>
#include <cstdio>

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

}  // namespace

TEST_CASE("axiom check on basic traces") {
  auto l = lab("q8");
  auto d = Trace::delta_e(l.G, l.cls);
  auto rep = is_trace(d, 0.0);  // exact full-group Gram
  CHECK(rep.all_pass());
  CHECK(rep.exact_certificate);
  CHECK(rep.gram_rank == 8);  // delta_e Gram is the identity matrix
  CHECK(rep.min_gram_eigenvalue == doctest::Approx(1.0));

  auto one = Trace::constant_one(l.G, l.cls);
  auto rep1 = is_trace(one, 0.0);
  CHECK(rep1.all_pass());
  CHECK(rep1.gram_rank == 1);

  // phi = (1, -1, -1) on Z/3 is not positive definite
  auto z3 = GroupHandle::build("cyclic(3)");
  auto c3 = conjugacy_classes(*z3);
  auto bad = Trace::class_function(
      z3, c3, {Cyclotomic::one(), Cyclotomic(Rational(-1)), Cyclotomic(Rational(-1))}, "bad");
  auto repb = is_trace(bad);
  CHECK(repb.normalized);
  CHECK(repb.conjugation_invariant);
  CHECK_FALSE(repb.positive);
  CHECK(repb.min_gram_eigenvalue == doctest::Approx(-1.0));  // spectrum {2, 2, -1}
  auto repb0 = is_trace(bad, 0.0);
  CHECK_FALSE(repb0.positive);
  CHECK(repb0.exact_certificate);
}

TEST_CASE("exact positivity through the Gaussian embedding") {
  auto l = lab("cyclic(4)");
  // a linear character with values in Q(i)
  std::uint32_t r = 0;
  for (std::uint32_t i = 0; i < l.T->rows(); ++i)
    if (!(l.T->value(i, 1).as_rational().has_value())) r = i;
  auto chi = Trace::character_row(l.G, l.cls, l.T, r);
  auto rep = is_trace(chi, 0.0);
  CHECK(rep.all_pass());
  CHECK(rep.exact_certificate);
  CHECK(rep.gram_rank == 1);

  // zeta_3 values are outside Q(i): the exact path refuses them
  auto m = lab("cyclic(3)");
  auto psi = Trace::character_row(m.G, m.cls, m.T, 1);
  CHECK_THROWS_AS(is_trace(psi, 0.0), Error);
  CHECK(is_trace(psi).all_pass());  // float path is fine
}

TEST_CASE("convex combinations") {
  auto z2 = GroupHandle::build("cyclic(2)");
  auto c2 = conjugacy_classes(*z2);
  auto d = Trace::delta_e(z2, c2);
  auto one = Trace::constant_one(z2, c2);
  auto half = convex_combine({Rational(1, 2), Rational(1, 2)}, {d, one});
  CHECK(*half.exact_class_value(0) == Cyclotomic::one());
  CHECK(*half.exact_class_value(1) == Cyclotomic(Rational(1, 2)));

  auto same = convex_combine({Rational(1), Rational(0)}, {d, one});
  for (std::uint32_t c = 0; c < 2; ++c)
    CHECK(*same.exact_class_value(c) == *d.exact_class_value(c));

  auto l = lab("sl(2,3)");
  auto triv = Trace::character_row(l.G, l.cls, l.T, 0);
  auto st = Trace::character_row(l.G, l.cls, l.T, row_of_degree(*l.T, 3));
  auto mix = convex_combine({Rational(1, 2), Rational(1, 2)}, {triv, st});
  CHECK(is_trace(mix).all_pass());

  CHECK_THROWS_AS(convex_combine({Rational(1, 2), Rational(1, 2)}, {d, triv}), Error);
  CHECK_THROWS_AS(convex_combine({Rational(1, 2), Rational(1, 4)}, {d, one}), Error);
}

TEST_CASE("domination order") {
  auto l = lab("sl(2,3)");
  auto delta = Trace::delta_e(l.G, l.cls);
  CHECK(dominates(delta, delta, Rational(1), l.T));

  // delta_e = sum_i (d_i^2/|G|) chi_i/d_i, and each weight is sharp
  for (std::uint32_t r = 0; r < l.T->rows(); ++r) {
    auto chi = Trace::character_row(l.G, l.cls, l.T, r);
    const Rational alpha(std::uint64_t(l.T->degree[r]) * l.T->degree[r], l.G->size());
    CHECK(dominates(delta, chi, alpha, l.T));
    CHECK_FALSE(dominates(delta, chi, alpha + Rational(1, 1000), l.T));
  }

  auto z3 = lab("cyclic(3)");
  auto triv = Trace::character_row(z3.G, z3.cls, z3.T, 0);
  auto lin = Trace::character_row(z3.G, z3.cls, z3.T, 1);
  CHECK_FALSE(dominates(triv, lin, Rational(1), z3.T));
  CHECK_THROWS_AS(dominates(triv, lin, Rational(2), z3.T), Error);

  // alpha-additivity on a convex split
  auto z4 = lab("cyclic(4)");
  auto dd = Trace::delta_e(z4.G, z4.cls);
  auto a = Trace::character_row(z4.G, z4.cls, z4.T, 1);
  auto b = Trace::character_row(z4.G, z4.cls, z4.T, 2);
  CHECK(dominates(dd, a, Rational(1, 4), z4.T));
  CHECK(dominates(dd, b, Rational(1, 4), z4.T));
  auto mix = convex_combine({Rational(1, 2), Rational(1, 2)}, {a, b});
  CHECK(dominates(dd, mix, Rational(1, 2), z4.T));
}

TEST_CASE("pulled-back rows") {
  auto l = lab("sl(2,3)");
  auto triv = Trace::pulled_back(l.G, l.cls, l.T, 0);
  CHECK(triv.backend() == Trace::Backend::PulledBack);
  CHECK(triv.modulus() == 3);
  auto ball = word_ball(sl_elementary_generators(2), 3);
  for (const auto& g : ball) CHECK(triv.exact_value_at(g) == Cyclotomic::one());

  // central -Id under a faithful row: a unit-modulus scalar
  std::uint32_t fr = 0;
  for (std::uint32_t r = 0; r < l.T->rows(); ++r)
    if (is_row_faithful(*l.T, r)) {
      fr = r;
      break;
    }
  auto faithful = Trace::pulled_back(l.G, l.cls, l.T, fr);
  IntegerMatrixElement minus_id(2, {-1, 0, 0, -1});
  CHECK(faithful.exact_value_at(minus_id).abs_squared() == Cyclotomic::one());

  // the degree-3 row vanishes on mod-3 unipotents (order divisible by 3)
  auto st = Trace::pulled_back(l.G, l.cls, l.T, row_of_degree(*l.T, 3));
  IntegerMatrixElement u(2, {1, 1, 0, 1});
  CHECK(st.exact_value_at(u).is_zero());
  CHECK(std::abs(st.value_at(u)) < 1e-12);

  auto rep = is_trace(st, ball);
  CHECK(rep.all_pass());
  CHECK(rep.regime.find("mod-3") != std::string::npos);
}

TEST_CASE("pointwise limits") {
  auto l = lab("q8");
  auto d = Trace::delta_e(l.G, l.cls);
  std::vector<std::uint32_t> S(l.G->size());
  for (std::uint32_t i = 0; i < l.G->size(); ++i) S[i] = i;
  auto rep = pointwise_limit({d, d, d}, S, 1e-12);
  CHECK(rep.achieved_tol == 0.0);
  for (std::uint32_t i = 0; i < l.G->size(); ++i)
    CHECK(rep.values[i] == d.value_at(i));

  auto z3 = lab("cyclic(3)");
  auto triv = Trace::character_row(z3.G, z3.cls, z3.T, 0);
  auto lin = Trace::character_row(z3.G, z3.cls, z3.T, 1);
  std::vector<std::uint32_t> S3{0, 1, 2};
  CHECK_THROWS_AS(pointwise_limit({triv, lin, triv, lin}, S3, 1e-6), Error);
}

TEST_CASE("invariant random subgroups") {
  auto q8 = GroupHandle::build("q8");
  auto subs = enumerate_subgroups(*q8);

  auto whole_it = std::find_if(subs.begin(), subs.end(),
                               [](const auto& H) { return H.size() == 8; });
  REQUIRE(whole_it != subs.end());
  InvariantRandomSubgroup whole{q8, {*whole_it}, {Rational(1)}};
  auto one = irs_to_trace(whole);
  for (std::uint32_t c = 0; c < one.classes().count(); ++c)
    CHECK(*one.exact_class_value(c) == Cyclotomic::one());

  InvariantRandomSubgroup point{q8, {{0}}, {Rational(1)}};
  auto d = irs_to_trace(point);
  CHECK(*d.exact_class_value(0) == Cyclotomic::one());
  for (std::uint32_t c = 1; c < d.classes().count(); ++c)
    CHECK(d.exact_class_value(c)->is_zero());

  // uniform measure on the three cyclic subgroups of order 4
  std::vector<std::vector<std::uint32_t>> quarts;
  for (const auto& H : subs)
    if (H.size() == 4) quarts.push_back(H);
  REQUIRE(quarts.size() == 3);
  InvariantRandomSubgroup mu{
      q8, quarts, {Rational(1, 3), Rational(1, 3), Rational(1, 3)}};
  auto phi = irs_to_trace(mu);
  CHECK(is_trace(phi, 0.0).all_pass());
  const auto i = q8->generators()[0];
  const auto minus1 = q8->mul(i, i);
  CHECK(*phi.exact_class_value(phi.classes().class_of[minus1]) == Cyclotomic::one());
  CHECK(*phi.exact_class_value(phi.classes().class_of[i]) == Cyclotomic(Rational(1, 3)));

  // a non-normal subgroup alone is not conjugation-invariant
  auto sl = GroupHandle::build("sl(2,3)");
  const auto u = sl->reduce(IntegerMatrixElement(2, {1, 1, 0, 1}));
  std::vector<std::uint32_t> cyc{0};
  for (std::uint32_t x = u; x != 0; x = sl->mul(x, u)) cyc.push_back(x);
  std::sort(cyc.begin(), cyc.end());
  InvariantRandomSubgroup badmu{sl, {cyc}, {Rational(1)}};
  CHECK_THROWS_AS(irs_to_trace(badmu), Error);
}

TEST_CASE("sampled regime beyond 2000 elements") {
  auto G = GroupHandle::build("sl(2,13)");
  REQUIRE(G->size() == 2184);
  auto cls = conjugacy_classes(*G);
  auto d = Trace::delta_e(G, cls);
  auto rep = is_trace(d);
  CHECK(rep.all_pass());
  CHECK(rep.regime.find("sampled") != std::string::npos);
}

TEST_CASE("serialization round trips") {
  auto l = lab("sl(2,3)");
  auto chi = Trace::character_row(l.G, l.cls, l.T, row_of_degree(*l.T, 2));
  auto j = trace_to_json(chi);
  auto back = trace_from_json(j);
  CHECK(back.exact());
  CHECK(back.label() == chi.label());
  CHECK(back.row() == chi.row());
  for (std::uint32_t c = 0; c < l.cls.count(); ++c)
    CHECK(*back.exact_class_value(c) == *chi.exact_class_value(c));

  // float backend round trip
  std::vector<Cx> fv(l.cls.count());
  for (std::uint32_t c = 0; c < l.cls.count(); ++c) fv[c] = chi.class_value(c);
  auto ft = Trace::class_function_float(l.G, l.cls, fv, "float copy");
  auto fb = trace_from_json(trace_to_json(ft));
  CHECK_FALSE(fb.exact());
  for (std::uint32_t c = 0; c < l.cls.count(); ++c)
    CHECK(fb.class_value(c) == ft.class_value(c));

  // pulled-back tag survives
  auto pb = Trace::pulled_back(l.G, l.cls, l.T, 0);
  auto pj = trace_to_json(pb);
  CHECK(trace_from_json(pj).backend() == Trace::Backend::PulledBack);

  // ball files
  auto ball = word_ball(sl_elementary_generators(2), 2);
  const std::string path = "test_ball_roundtrip.json";
  write_ball_file(path, 2, ball);
  auto loaded = read_ball_file(path);
  CHECK(loaded == ball);
  std::remove(path.c_str());
}
