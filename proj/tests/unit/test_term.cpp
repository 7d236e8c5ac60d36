#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "modlat/error.hpp"
#include "modlat/term.hpp"

using namespace modlat;

TEST_CASE("normal form is commutative, idempotent and flat") {
  Term x = Term::var("x"), y = Term::var("y"), z = Term::var("z");
  CHECK(x + y == y + x);
  CHECK(x * y == y * x);
  CHECK(x + x == x);
  CHECK(x * x == x);
  CHECK((x + y) + z == x + (y + z));
  CHECK(((x + y) + z).children().size() == 3);
  CHECK((x * (y * z)).children().size() == 3);
  CHECK(x + y != x * y);
}

TEST_CASE("normalize agrees with the factories on raw trees") {
  Term x = Term::var("x"), y = Term::var("y");
  Term raw = Term::raw(Kind::Join, "", {Term::raw(Kind::Join, "", {y, x}), x});
  CHECK(normalize(raw) == x + y);
  Term single = Term::raw(Kind::Meet, "", {x, x});
  CHECK(normalize(single) == x);
}

TEST_CASE("print and parse round trip on random terms") {
  std::mt19937_64 rng(7);
  const std::vector<std::string> vars{"x", "y", "z", "w"};
  for (int i = 0; i < 500; ++i) {
    Term t = testing::random_term(rng, vars, 4);
    Term back = parse_term(t.str());
    CHECK_MESSAGE(back == t, t.str());
  }
}

TEST_CASE("parser precedence and juxtaposition") {
  CHECK(parse_term("x y + z") == (Term::var("x") * Term::var("y")) + Term::var("z"));
  CHECK(parse_term("x(y + z)") == Term::var("x") * (Term::var("y") + Term::var("z")));
  CHECK(parse_term("x*y") == parse_term("x y"));
  Term o = parse_term("?f(x, y + z)");
  CHECK(o.kind() == Kind::Opaque);
  CHECK(o.name() == "f");
  CHECK(o.children().size() == 2);
}

TEST_CASE("parser rejects malformed input with an offset") {
  CHECK_THROWS_AS(parse_term("x + "), ParseError);
  CHECK_THROWS_AS(parse_term("(x"), ParseError);
  CHECK_THROWS_AS(parse_term("x)"), ParseError);
  std::set<std::string> vars{"x"};
  ParseOptions o;
  o.variables = &vars;
  CHECK_THROWS_AS(parse_term("x + y", o), ParseError);
}

TEST_CASE("constants and symbols") {
  ParseOptions o;
  o.constants = {"a1"};
  Term t = parse_term("a1 + x", o);
  CHECK(symbols(t) == std::set<std::string>{"a1", "x"});
  bool has_const = false;
  for (const auto& c : t.children()) has_const = has_const || (c.kind() == Kind::Const && c.name() == "a1");
  CHECK(has_const);
}

TEST_CASE("substitution renormalizes") {
  Term t = parse_term("x + y z");
  Substitution s{{"x", Term::var("y")}, {"y", Term::var("y")}, {"z", Term::var("y")}};
  CHECK(substitute(t, s) == Term::var("y"));
  CHECK_THROWS_AS(substitute(t, {{"x", Term::var("a")}}), Error);
  CHECK(substitute(t, {{"x", Term::var("a")}}, true) == parse_term("a + y z"));
}

TEST_CASE("opaque arguments keep their order") {
  Term a = Term::opaque("f", {Term::var("x"), Term::var("y")});
  Term b = Term::opaque("f", {Term::var("y"), Term::var("x")});
  CHECK(a != b);
  CHECK(a.hash() == Term::opaque("f", {Term::var("x"), Term::var("y")}).hash());
}
