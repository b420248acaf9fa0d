#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "charlab/error.hpp"
#include "charlab/group.hpp"
#include "charlab/rng.hpp"

#include <algorithm>
#include <set>

using namespace charlab;

namespace {

// |SL_2(F_p)| = p(p^2 - 1)
std::uint64_t sl2_order(std::uint64_t p) { return p * (p * p - 1); }

void check_group_axioms(const GroupHandle& G, std::uint64_t seed) {
  auto rng = make_rng(seed, "axioms");
  std::uniform_int_distribution<std::uint32_t> pick(0, G.size() - 1);
  for (int i = 0; i < 1000; ++i) {
    const auto x = pick(rng), y = pick(rng), z = pick(rng);
    CHECK(G.mul(G.mul(x, y), z) == G.mul(x, G.mul(y, z)));
    CHECK(G.mul(x, G.inv(x)) == G.identity());
    CHECK(G.mul(G.inv(x), x) == G.identity());
  }
}

}  // namespace

TEST_CASE("cyclic groups") {
  auto G = GroupHandle::build("cyclic(5)");
  CHECK(G->size() == 5);
  CHECK(G->mul(3, 4) == 2);
  CHECK(G->inv(2) == 3);
  auto cls = conjugacy_classes(*G);
  CHECK(cls.count() == 5);  // abelian: all classes singletons
  for (auto s : cls.size) CHECK(s == 1);
  CHECK(group_exponent(*G, cls) == 5);

  CHECK(GroupHandle::build("cyclic(1)")->size() == 1);
}

TEST_CASE("SL(2,Z/3)") {
  auto G = GroupHandle::build("sl(2,3)");
  CHECK(G->size() == 24);  // 3 * (9-1)
  auto cls = conjugacy_classes(*G);
  CHECK(cls.count() == 7);
  CHECK(cls.size[0] == 1);
  CHECK(cls.rep[0] == G->identity());
  std::uint32_t total = 0;
  for (auto s : cls.size) total += s;
  CHECK(total == 24);
  // inverse-class map is an involution
  for (std::uint32_t c = 0; c < cls.count(); ++c)
    CHECK(cls.inverse_class[cls.inverse_class[c]] == c);
  CHECK(group_exponent(*G, cls) == 12);
  check_group_axioms(*G, 11);

  // words reproduce elements
  for (std::uint32_t g = 0; g < G->size(); ++g) {
    std::uint32_t acc = G->identity();
    for (auto gi : G->word(g)) acc = G->mul(acc, G->generators()[gi]);
    CHECK(acc == g);
  }
}

TEST_CASE("SL(2,*) orders and class counts") {
  CHECK(GroupHandle::build("sl(2,5)")->size() == sl2_order(5));
  CHECK(GroupHandle::build("sl(2,7)")->size() == sl2_order(7));
  // SL_2(Z/4): 2^3 * |SL_2(F_2)| = 8 * 6
  CHECK(GroupHandle::build("sl(2,4)")->size() == 48);
  // class count of SL(2, F_p) is p + 4 for odd primes
  for (std::uint32_t p : {5u, 7u, 11u, 13u, 17u, 19u, 23u}) {
    auto G = GroupHandle::build("sl(2," + std::to_string(p) + ")");
    CHECK(G->size() == sl2_order(p));
    CHECK(conjugacy_classes(*G).count() == p + 4);
  }
}

TEST_CASE("quaternion group") {
  auto G = GroupHandle::build("q8");
  CHECK(G->size() == 8);
  auto cls = conjugacy_classes(*G);
  CHECK(cls.count() == 5);
  check_group_axioms(*G, 12);
  // i^2 = j^2 = -1, and i has order 4
  const auto i = G->generators()[0], j = G->generators()[1];
  CHECK(G->mul(i, i) == G->mul(j, j));
  CHECK(G->order_of(i) == 4);
  CHECK(G->order_of(G->mul(i, i)) == 2);

  auto subs = enumerate_subgroups(*G);
  CHECK(subs.size() == 6);  // 1, Z/2 center, <i>, <j>, <k>, Q8
}

TEST_CASE("semidirect and vector groups") {
  auto A = GroupHandle::build("aff(2,3)");
  CHECK(A->size() == 216);  // |SL_2(F_3)| * 9
  auto V = GroupHandle::build("vec(3,2)");
  CHECK(V->size() == 9);
  auto cls = conjugacy_classes(*V);
  CHECK(cls.count() == 9);
  CHECK(group_exponent(*V, cls) == 3);
  CHECK_THROWS_AS(GroupHandle::build("aff(2,4)"), Error);  // p must be prime
}

TEST_CASE("reduction from integer matrices") {
  auto G2 = GroupHandle::build("sl(2,2)");
  auto G3 = GroupHandle::build("sl(2,3)");
  auto E12 = IntegerMatrixElement(2, {1, 1, 0, 1});
  // entries already reduced
  const auto r2 = G2->reduce(E12);
  const std::uint8_t* e = G2->entries(r2);
  CHECK((e[0] == 1 && e[1] == 1 && e[2] == 0 && e[3] == 1));
  // [[4,1],[3,1]] mod 3 = [[1,1],[0,1]]
  auto M = IntegerMatrixElement(2, {4, 1, 3, 1});
  CHECK(G3->reduce(M) == G3->reduce(E12));
  // homomorphism on sampled pairs of ball elements
  auto ball = word_ball(sl_elementary_generators(2), 3);
  auto rng = make_rng(5, "reduce.hom");
  std::uniform_int_distribution<std::size_t> pick(0, ball.size() - 1);
  for (int t = 0; t < 1000; ++t) {
    const auto& a = ball[pick(rng)];
    const auto& b = ball[pick(rng)];
    CHECK(G3->reduce(a.mul(b)) == G3->mul(G3->reduce(a), G3->reduce(b)));
  }
  // shape mismatch rejected
  CHECK_THROWS_AS(G3->reduce(IntegerMatrixElement::identity(3)), Error);
}

TEST_CASE("budgets") {
  CHECK_THROWS_AS(GroupHandle::build("cyclic(600000)"), Error);
  BuildOptions tiny;
  tiny.budget = 10;
  CHECK_THROWS_AS(GroupHandle::build("sl(2,3)", tiny), Error);
  auto G = GroupHandle::build("sl(2,5)");
  CHECK_THROWS_AS(enumerate_subgroups(*G, 100), Error);
}

TEST_CASE("explicit table validation") {
  // Z/2 as a table
  auto T = GroupHandle::from_table("table2", {{0, 1}, {1, 0}}, {1});
  CHECK(T->size() == 2);
  CHECK(T->inv(1) == 1);
  // identity must be index 0
  CHECK_THROWS_AS(GroupHandle::from_table("bad", {{1, 0}, {0, 1}}, {1}), Error);
  // non-associative Latin square (order 5 loop)
  std::vector<std::vector<std::uint32_t>> loop = {
      {0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}};
  CHECK_THROWS_AS(GroupHandle::from_table("loop5", loop, {1}), Error);
}

TEST_CASE("conjugate closure yields full classes") {
  // in SL(2,3) every class is closed under conjugation by all elements
  auto G = GroupHandle::build("sl(2,3)");
  auto cls = conjugacy_classes(*G);
  for (std::uint32_t x = 0; x < G->size(); ++x)
    for (std::uint32_t s = 0; s < G->size(); ++s)
      CHECK(cls.class_of[G->conjugate(s, x)] == cls.class_of[x]);
}
