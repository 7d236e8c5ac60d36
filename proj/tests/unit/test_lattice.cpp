#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "modlat/acceptance.hpp"
#include "modlat/error.hpp"
#include "modlat/lattice.hpp"

using namespace modlat;

TEST_CASE("named lattices") {
  FiniteLattice m3 = make_m3(), n5 = make_n5();
  CHECK(m3.size() == 5);
  CHECK(n5.size() == 5);
  CHECK(!check_lattice_axioms(m3));
  CHECK(!check_lattice_axioms(n5));
  CHECK(!is_modular(m3));
  CHECK(is_modular(n5));
  CHECK(find_pentagon(n5));
  CHECK(!find_pentagon(m3));
  CHECK(!is_modular(make_boolean(3)));
  CHECK(make_boolean(3).size() == 8);
  CHECK(FiniteLattice::chain(6).height() == 5);
}

TEST_CASE("N5 witness violates the modular law and is least") {
  FiniteLattice n5 = make_n5();
  auto w = is_modular(n5);
  REQUIRE(w);
  auto [x, y, z] = *w;
  CHECK(n5.meet(x, n5.join(y, n5.meet(x, z))) != n5.join(n5.meet(x, y), n5.meet(x, z)));
  for (Elem a = 0; a < n5.size(); ++a)
    for (Elem b = 0; b < n5.size(); ++b)
      for (Elem c = 0; c < n5.size(); ++c) {
        if (Triple{a, b, c} >= *w) continue;
        CHECK(n5.meet(a, n5.join(b, n5.meet(a, c))) == n5.join(n5.meet(a, b), n5.meet(a, c)));
      }
}

TEST_CASE("from_order rejects non-lattices and cycles") {
  // Two incomparable maximal elements have no join.
  CHECK_THROWS_AS(FiniteLattice::from_order(3, {{0, 1}, {0, 2}}), Error);
  CHECK_THROWS_AS(FiniteLattice::from_order(2, {{0, 1}, {1, 0}}), Error);
}

TEST_CASE("oracles agree on the corpus") {
  for (const auto& [name, L] : lattice_corpus()) {
    if (L.size() > 60) continue;
    CAPTURE(name);
    CHECK(!check_lattice_axioms(L));
    bool m = !is_modular(L).has_value();
    CHECK(m == !find_pentagon(L).has_value());
    CHECK(is_modular(L) == is_modular_serial(L));
  }
}

TEST_CASE("products and intervals") {
  FiniteLattice p = product(make_m3(), FiniteLattice::chain(2));
  CHECK(p.size() == 10);
  CHECK(!is_modular(p));
  FiniteLattice q = product(make_n5(), FiniteLattice::chain(2));
  CHECK(is_modular(q));
  std::vector<Elem> emb;
  FiniteLattice I = interval(p, p.bottom(), p.top(), &emb);
  CHECK(isomorphic(I, p));
  CHECK(emb.size() == p.size());
  CHECK(isomorphic(product(make_boolean(1), make_boolean(2)), make_boolean(3)));
  CHECK(!isomorphic(make_m3(), make_n5()));
}

TEST_CASE("identity checks on random terms agree with direct evaluation") {
  std::mt19937_64 rng(11);
  FiniteLattice n5 = make_n5();
  const std::vector<std::string> vars{"x", "y", "z"};
  for (int i = 0; i < 40; ++i) {
    Term s = testing::random_term(rng, vars, 3), t = testing::random_term(rng, vars, 3);
    auto r = holds_identity(n5, s, t, vars);
    auto serial = holds_identity_serial(n5, s, t, vars);
    CHECK(r.holds == serial.holds);
    CHECK(r.counterexample == serial.counterexample);
    CHECK(r.assignments_checked == serial.assignments_checked);
  }
  auto mod = holds_identity(n5, parse_term("x(y + x z)"), parse_term("x y + x z"), vars);
  CHECK(!mod.holds);
  CHECK(mod.counterexample.size() == 3);
  CHECK(holds_identity(make_m3(), parse_term("x(y + x z)"), parse_term("x y + x z"), vars).holds);
  CHECK(!holds_identity(make_m3(), parse_term("x(y + z)"), parse_term("x y + x z"), vars).holds);
}

TEST_CASE("cancellation quasi-identity separates M3 and N5 from distributive lattices") {
  const std::vector<std::string> vars{"x", "y", "z"};
  const std::vector<std::pair<Term, Term>> ante{{parse_term("x + y"), parse_term("x + z")},
                                                {parse_term("x y"), parse_term("x z")}};
  const Term y = parse_term("y"), z = parse_term("z");
  for (const auto& L : {make_m3(), make_n5()}) {
    auto r = holds_quasi_identity(L, ante, y, z, vars);
    REQUIRE(!r.holds);
    const Elem x = r.counterexample[0], a = r.counterexample[1], b = r.counterexample[2];
    CHECK(L.join(x, a) == L.join(x, b));
    CHECK(L.meet(x, a) == L.meet(x, b));
    CHECK(a != b);
  }
  CHECK(holds_quasi_identity(make_boolean(3), ante, y, z, vars).holds);
  // No antecedent is the identity check; an antecedent that forces s = t
  // makes any conclusion hold.
  std::mt19937_64 rng(4);
  FiniteLattice n5 = make_n5();
  for (int i = 0; i < 20; ++i) {
    Term s = testing::random_term(rng, vars, 3), t = testing::random_term(rng, vars, 3);
    auto q = holds_quasi_identity(n5, {}, s, t, vars);
    auto id = holds_identity(n5, s, t, vars);
    CHECK(q.holds == id.holds);
    CHECK(q.counterexample == id.counterexample);
    CHECK(holds_quasi_identity(n5, {{s, t}}, s, t, vars).holds);
  }
}

TEST_CASE("json round trip") {
  for (const auto& [name, L] : lattice_corpus()) {
    if (L.size() > 40) continue;
    FiniteLattice back = lattice_from_json(to_json(L));
    CHECK(back.size() == L.size());
    CHECK(back.labels() == L.labels());
    bool same = true;
    for (Elem a = 0; a < L.size(); ++a)
      for (Elem b = 0; b < L.size(); ++b) same = same && back.leq(a, b) == L.leq(a, b);
    CHECK_MESSAGE(same, name);
  }
  CHECK_THROWS(lattice_from_json(nlohmann::json::parse(R"({"n": 2, "leq": ["3"]})")));
}
