#include <doctest.h>

#include "modlat/error.hpp"
#include "modlat/glueing.hpp"

using namespace modlat;

namespace {

// Elements of M3: 0, a, b, c, 1.
const FiniteLattice& m3() {
  static const FiniteLattice L = make_m3();
  return L;
}

GluedSumSpec chain_spec() {
  GluedSumSpec sp;
  sp.skeleton = FiniteLattice::chain(3);
  sp.components.assign(3, FiniteLattice::chain(3));
  sp.glue = {{0, 1, {{1, 0}, {2, 1}}}, {1, 2, {{1, 0}, {2, 1}}}};
  return sp;
}

}  // namespace

TEST_CASE("two 2-chains glued at a point give a 3-chain") {
  auto c2 = FiniteLattice::chain(2);
  auto G = dilworth_hall({c2, c2}, {{{1, 0}}});
  CHECK(isomorphic(G.lattice, FiniteLattice::chain(3)));
}

TEST_CASE("two M3 glued along a prime quotient") {
  auto G = dilworth_hall({m3(), m3()}, {{{1, 0}, {4, 1}}});
  CHECK(G.lattice.size() == 8);
  CHECK(!is_modular(G.lattice));
  CHECK(!check_lattice_axioms(G.lattice));
  CHECK(verify_simple(G).simple);
  CHECK(isomorphic(G.lattice, order_completion(G.spec)));
}

TEST_CASE("M3 glued at a point is modular but not simple") {
  auto G = dilworth_hall({m3(), m3()}, {{{4, 0}}});
  CHECK(G.lattice.size() == 9);
  CHECK(!is_modular(G.lattice));
  auto S = verify_simple(G);
  CHECK(!S.simple);
  CHECK(S.witness);
  CHECK(S.components_simple);
}

TEST_CASE("non-bijective glue maps are rejected") {
  CHECK_THROWS_AS(dilworth_hall({m3(), m3()}, {{{1, 0}, {4, 0}}}), Error);
  // [a, 1] in M3 is not an ideal image of a 3-element filter.
  CHECK_THROWS_AS(dilworth_hall({m3(), m3()}, {{{0, 0}, {1, 1}, {4, 4}}}), Error);
}

TEST_CASE("M3 skeleton with 2-chain components glued at endpoints is rejected") {
  GluedSumSpec sp;
  sp.skeleton = m3();
  sp.components.assign(5, FiniteLattice::chain(2));
  for (Elem x = 0; x < 5; ++x)
    for (Elem y : m3().covers(x)) sp.glue.push_back({x, y, {{1, 0}}});
  CHECK_THROWS_AS(glued_sum(sp), Error);
  // The order completion collapses it to a 4-element lattice.
  CHECK(order_completion(sp).size() == 4);
}

TEST_CASE("glued sum over the M3 skeleton of L(Z/4 + Z/4)") {
  LAModel LA = build_LA(2, {2, 2});
  CHECK(isomorphic(LA.skeleton, m3()));
  GluedLattice G = glued_sum(LA.glued.spec);
  CHECK(G.lattice.size() == LA.lattice.size());
  CHECK(isomorphic(G.lattice, LA.lattice));
  CHECK(isomorphic(G.lattice, order_completion(LA.glued.spec)));
  for (Elem x = 0; x < LA.skeleton.size(); ++x) CHECK(G.lattice.leq(G.sigma[x], G.pi[x]));
}

TEST_CASE("chain skeleton: glued_sum agrees with dilworth_hall") {
  GluedSumSpec sp = chain_spec();
  auto A = glued_sum(sp);
  auto B = dilworth_hall(sp.components, {sp.glue[0].pairs, sp.glue[1].pairs});
  CHECK(isomorphic(A.lattice, B.lattice));
  CHECK(A.lattice.size() == 5);
}

TEST_CASE("L(A) reports") {
  for (auto shape : std::vector<std::vector<unsigned>>{{2, 1}, {2, 2, 1}, {2, 2}}) {
    LAModel M = build_LA(2, shape);
    LAReport r = check_LA(M);
    CHECK_MESSAGE(r.ok(), r.failure);
  }
  LAReport r3 = check_LA(build_LA(3, {2, 1}));
  CHECK_MESSAGE(r3.ok(), r3.failure);
}

TEST_CASE("congruences and simplicity") {
  auto c2 = FiniteLattice::chain(2);
  CHECK(!verify_simple(product(c2, c2)).simple);
  CHECK(verify_simple(m3()).simple);
  CHECK(verify_simple(c2).simple);
  CHECK(!verify_simple(FiniteLattice::chain(1)).simple);
  auto n5 = make_n5();
  auto theta = congruence_generated(n5, n5.bottom(), n5.top());
  for (Elem a = 0; a < n5.size(); ++a) CHECK(theta[a] == theta[0]);
}

TEST_CASE("L(G) models") {
  LGModel M(Group::cyclic(2), 2, {2, 2, 2, 1});
  CHECK(!M.check_embeddings());
  auto S = M.psi0();
  LGOracle O(M);
  CHECK(!check_skew_frame<Submodule>(O, S));
  LGModel T(Group::trivial(), 2, {2, 1});
  CHECK(!T.check_embeddings());
  CHECK(T.members().size() == T.A().all_submodules().size());
}

TEST_CASE("rewire keeps the ideal below U") {
  GluedLattice G = glued_sum(chain_spec());
  RewireResult same = rewire(G, {1}, G.spec.glue);
  CHECK(isomorphic(same.glued.lattice, G.lattice));
  CHECK(same.ideal_iso);
  CHECK(same.ideal == std::vector<Elem>{0});
}

TEST_CASE("rewire conditions are enforced") {
  GluedLattice G = glued_sum(chain_spec());
  SUBCASE("off U the maps must agree") {
    CHECK_THROWS_WITH_AS(rewire(G, {2}, {{0, 1, {{2, 0}}}}), doctest::Contains("condition (1)"), Error);
  }
  SUBCASE("below 1_{u,x} the map must follow the transported glue") {
    CHECK_THROWS_WITH_AS(rewire(G, {1}, {{1, 2, {{2, 0}}}}), doctest::Contains("condition (2)"), Error);
  }
  SUBCASE("U must be an antichain") { CHECK_THROWS_AS(rewire(G, {0, 1}, {}), Error); }
}

TEST_CASE("rewire condition above 1_{u,x}") {
  // L1 is M3 with a new bottom, L2 is M3 with a new top; the glue is the
  // identity between the two M3 parts.
  FiniteLattice L1 = FiniteLattice::from_order(
      6, {{0, 1}, {1, 2}, {1, 3}, {1, 4}, {2, 5}, {3, 5}, {4, 5}}, {"0", "1", "a", "b", "c", "t"});
  GluedSumSpec sp;
  sp.skeleton = FiniteLattice::chain(3);
  FiniteLattice L2 = FiniteLattice::from_order(
      6, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 4}, {3, 4}, {4, 5}}, {"0", "a", "b", "c", "1", "t"});
  sp.components = {FiniteLattice::chain(3), L1, L2};
  sp.glue = {{0, 1, {{1, 0}, {2, 1}}}, {1, 2, {{1, 0}, {2, 1}, {3, 2}, {4, 3}, {5, 4}}}};
  GluedLattice G = glued_sum(sp);
  CHECK(!is_modular(G.lattice));
  // Swapping a and b agrees below 1_{u,x} = 1 but not above it.
  GlueMap swapped{1, 2, {{1, 0}, {2, 2}, {3, 1}, {4, 3}, {5, 4}}};
  CHECK_THROWS_WITH_AS(rewire(G, {1}, {swapped}), doctest::Contains("condition (3)"), Error);
}

TEST_CASE("glued spec json round trip") {
  auto G = dilworth_hall({m3(), m3()}, {{{1, 0}, {4, 1}}});
  auto back = glued_spec_from_json(to_json(G.spec));
  CHECK(isomorphic(glued_sum(back).lattice, G.lattice));
}
