#include <doctest.h>

#include <random>

#include "modlat/error.hpp"
#include "modlat/reducer.hpp"

using namespace modlat;

namespace {

Word random_word(std::mt19937_64& rng, std::size_t gens, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len), g(0, gens - 1);
  std::bernoulli_distribution inv(0.3);
  Word w;
  for (std::size_t i = len(rng); i > 0; --i) w.push_back({g(rng), inv(rng) ? -1 : 1});
  return w;
}

GroupPresentation s3_presentation() {
  const std::vector<std::string> gens{"g", "h"};
  return {gens, {parse_word("g g", gens), parse_word("h h h", gens), parse_word("g h g h", gens)}};
}

}  // namespace

TEST_CASE("word parsing") {
  const std::vector<std::string> gens{"g", "h", "gh"};
  CHECK(parse_word("g h'", gens) == Word{{0, 1}, {1, -1}});
  // Without spaces the longest generator name wins.
  CHECK(parse_word("ghg", gens) == Word{{2, 1}, {0, 1}});
  CHECK(parse_word("", gens).empty());
  CHECK(parse_word("1", gens).empty());
  CHECK_THROWS_AS(parse_word("x", gens), Error);
  CHECK(inverse(parse_word("g h'", gens)) == parse_word("h g'", gens));
  GroupPresentation P{{"g", "h"}, {parse_word("g h", {"g", "h"})}};
  CHECK(P.word_str(P.relators[0]) == "g h");
  auto back = group_presentation_from_json(to_json(P));
  CHECK(back.generators == P.generators);
  CHECK(back.relators == P.relators);
  CHECK_THROWS_AS(group_presentation_from_json(nlohmann::json::parse(R"({"generators": ["g", "g"]})")), Error);
  CHECK_THROWS_AS(group_presentation_from_json(nlohmann::json::parse(R"({"generators": ["g"], "relators": ["h"]})")),
                  Error);
}

TEST_CASE("generator names may not clash with frame symbols") {
  GroupPresentation P{{"c13"}, {}};
  CHECK_THROWS_AS(lambda_presentation(P), Error);
}

TEST_CASE("lambda presentation shape") {
  GroupPresentation P{{"g"}, {parse_word("g g", {"g"})}};
  Presentation lam = lambda_presentation(P);
  CHECK(lam.generators().size() == 9);
  CHECK(lam.relations().size() == frame_presentation(4).relations().size() + 3);
}

TEST_CASE("lambda axis readings") {
  GroupPresentation P{{"g"}, {parse_word("g g", {"g"})}};
  Presentation a3 = lambda_presentation(P), a2 = lambda_presentation(P, LambdaAxis::Axis2);
  CHECK(a2.generators() == a3.generators());
  CHECK(a2.relations().size() == a3.relations().size());
  LambdaModel C2 = canonical_lambda_model(P, Group::cyclic(2), {1}, 2);
  const Relation trivial{Term::constant("c13"), Term::constant("c13")};
  CHECK(search_consequence<Submodule>(a3, trivial, {model_ref(C2)}).models_checked == 1);
  auto r2 = search_consequence<Submodule>(a2, trivial, {model_ref(C2)});
  CHECK(r2.models_checked == 0);
  REQUIRE(!r2.warnings.empty());
  CHECK(r2.warnings[0].find("a2") != std::string::npos);
}

TEST_CASE("word terms are homomorphic") {
  std::mt19937_64 rng(5);
  GroupPresentation P = s3_presentation();
  Group S3 = Group::symmetric3();
  // g a transposition, h a 3-cycle.
  std::vector<std::uint32_t> h;
  for (std::uint32_t a = 0; a < 6 && h.empty(); ++a)
    for (std::uint32_t b = 0; b < 6 && h.empty(); ++b)
      if (a != S3.identity() && b != S3.identity() && eval_word(S3, P.relators[0], {a, b}) == S3.identity() &&
          eval_word(S3, P.relators[1], {a, b}) == S3.identity() && eval_word(S3, P.relators[2], {a, b}) == S3.identity())
        h = {a, b};
  REQUIRE(h.size() == 2);
  LambdaModel L = canonical_lambda_model(P, S3, h, 2);
  CHECK(!satisfies_presentation(*L.module, lambda_presentation(P), L.assignment));
  int structural = 0, semantic = 0;
  for (int i = 0; i < 1000; ++i) {
    Word u = random_word(rng, 2, 4), v = random_word(rng, 2, 4);
    if (concat(u, v).size() == u.size() + v.size() && parse_word(P.word_str(concat(u, v)), P.generators) == concat(u, v))
      ++structural;
    if (i % 10 == 0 &&
        L.eval_word_term(P, concat(u, v)) == L.ring->mul(L.eval_word_term(P, u), L.eval_word_term(P, v)))
      ++semantic;
  }
  CHECK(structural == 1000);
  CHECK(semantic == 100);
}

TEST_CASE("word terms equal c13 exactly on the kernel") {
  std::mt19937_64 rng(9);
  struct Case {
    GroupPresentation P;
    Group G;
  };
  std::vector<Case> cases{{{{"g"}, {parse_word("g g", {"g"})}}, Group::cyclic(2)},
                          {{{"g"}, {parse_word("g g g", {"g"})}}, Group::cyclic(3)},
                          {s3_presentation(), Group::symmetric3()}};
  for (auto& [P, G] : cases) {
    const std::size_t n = P.generators.size();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= G.order();
    for (std::uint64_t code = 0; code < total; ++code) {
      std::vector<std::uint32_t> h(n);
      std::uint64_t c = code;
      for (auto& x : h) x = std::uint32_t(c % G.order()), c /= G.order();
      bool ok = true;
      for (const auto& r : P.relators) ok = ok && eval_word(G, r, h) == G.identity();
      if (!ok) {
        CHECK_THROWS_AS(canonical_lambda_model(P, G, h, 2), Error);
        continue;
      }
      LambdaModel L = canonical_lambda_model(P, G, h, 2);
      int mismatches = 0;
      for (int i = 0; i < 100; ++i) {
        Word w = random_word(rng, n, 6);
        bool lattice = L.eval_word_term(P, w) == L.frame.cij(1, 3);
        bool group = eval_word(G, w, h) == G.identity();
        if (lattice != group) ++mismatches;
      }
      CHECK_MESSAGE(mismatches == 0, L.name);
    }
  }
}

TEST_CASE("consequence search") {
  GroupPresentation P{{"g"}, {parse_word("g g", {"g"})}};
  Presentation lam = lambda_presentation(P);
  LambdaModel C2 = canonical_lambda_model(P, Group::cyclic(2), {1}, 2);
  auto rho = [&](const std::string& w) {
    return Relation{lambda_word_term(P, parse_word(w, P.generators)), Term::constant("c13")};
  };
  auto g = search_consequence<Submodule>(lam, rho("g"), {model_ref(C2)});
  CHECK(!g.consistent);
  CHECK(g.refuting_model == std::size_t(0));
  auto gg = search_consequence<Submodule>(lam, rho("g g"), {model_ref(C2)});
  CHECK(gg.consistent);
  auto none = search_consequence<Submodule>(lam, rho("g"), {});
  CHECK(none.consistent);
  CHECK(none.models_checked == 0);
  CHECK(!none.warnings.empty());
  // A C3 model does not satisfy the presentation of C2 and is skipped.
  GroupPresentation P3{{"g"}, {parse_word("g g g", {"g"})}};
  LambdaModel C3 = canonical_lambda_model(P3, Group::cyclic(3), {1}, 2);
  auto skipped = search_consequence<Submodule>(lam, rho("g"), {model_ref(C3), model_ref(C2)}, SearchOptions{2});
  CHECK(skipped.models_checked == 1);
  CHECK(!skipped.consistent);
  CHECK(skipped.refuting_model == std::size_t(1));
  CHECK(!skipped.warnings.empty());
}

TEST_CASE("term packs") {
  TermPack pack;
  pack.set_concrete("f.x", {"u", "v"}, parse_term("u + v"));
  pack.set_opaque("t.s1", {"u"});
  CHECK(opaque_kind("t.s1") == "t");
  CHECK(pack.has("f.x"));
  CHECK(pack.concrete("f.x"));
  CHECK(!pack.concrete("t.s1"));
  CHECK(pack.apply("f.x", {Term::var("a"), Term::var("b")}) == Term::var("a") + Term::var("b"));
  CHECK(pack.apply("t.s1", {Term::var("a")}).kind() == Kind::Opaque);
  CHECK_THROWS_AS(pack.apply("f.x", {Term::var("a")}), Error);
  CHECK_THROWS_AS(pack.set_concrete("g.y", {"u"}, parse_term("u + w")), Error);
  TermPack back = term_pack_from_json(to_json(pack));
  CHECK(back.apply("f.x", {Term::var("a"), Term::var("b")}) == Term::var("a") + Term::var("b"));
  CHECK(!back.concrete("t.s1"));
}

TEST_CASE("term dags share subterms") {
  Term s = parse_term("x y + z");
  auto dag = term_dag({{"l", s + Term::var("w")}, {"r", s * Term::var("w")}});
  CHECK(dag["roots"].size() == 2);
  // x, y, z, w, x y, x y + z, and the two roots.
  CHECK(dag["nodes"].size() == 8);
}

TEST_CASE("beta* compilation") {
  GroupPresentation P{{"g"}, {parse_word("g g", {"g"})}};
  auto q = word_problem_instance(P, parse_word("g", P.generators));
  CHECK(q.vars == 1);
  CHECK(q.antecedent.size() == 1);
  for (int n : {1, 3}) {
    GroupPresentation Q{std::vector<std::string>(std::size_t(n), ""), {}};
    for (int i = 0; i < n; ++i) Q.generators[std::size_t(i)] = "g" + std::to_string(i + 1);
    auto qi = word_problem_instance(Q, parse_word("g1", Q.generators));
    BetaStar B = compile_beta_star(qi, TermPack{}, n);
    CHECK(B.variables.size() == std::size_t(n + 6));
    CHECK(opaque_kinds(B.lhs + B.rhs) == std::set<std::string>{"t", "u"});
    CHECK(!B.deferred.empty());
  }
  BetaStar B = compile_beta_star(q, identity_u_pack(1), 1);
  // With u the identity only the t slots stay opaque.
  CHECK(opaque_kinds(B.lhs + B.rhs) == std::set<std::string>{"t"});
  CHECK_THROWS_AS(compile_beta_star(q, TermPack{}, 0), Error);
}

TEST_CASE("reduction plans") {
  GroupPresentation P{{"g", "h"}, {parse_word("g h", {"g", "h"})}};
  ReductionPlan plan = build_plan(P);
  CHECK(plan.n == 2);
  CHECK(plan.mu == 3);
  REQUIRE(plan.stages.size() == 3);
  CHECK(plan.stages[0].kind == StageCase::LowerReduction);
  CHECK(plan.stages[1].kind == StageCase::LowerReduction);
  CHECK(plan.stages[2].kind == StageCase::UpperReduction);
  CHECK(!plan.deferred.empty());
  for (const auto& d : plan.deferred) CHECK(d.find("deferred to term pack") != std::string::npos);
  auto j = to_json(plan);
  CHECK(j["stages"].size() == 3);
  ReductionPlan concrete = build_plan(P, degenerate_reduction_pack());
  CHECK(concrete.deferred.size() < plan.deferred.size());
}

TEST_CASE("degenerate plan execution leaves the tower fixed") {
  for (int n : {1, 2}) {
    TowerModel T = tower_canonical_model(n, 2);
    GroupPresentation P = n == 1 ? GroupPresentation{{"g"}, {parse_word("g g", {"g"})}}
                                 : GroupPresentation{{"g", "h"}, {parse_word("g h", {"g", "h"})}};
    auto ex = execute_plan<Submodule>(build_plan(P), degenerate_reduction_pack(), *T.module, T.tower);
    CHECK(ex.ok());
    CHECK(ex.stages.size() == std::size_t(n + 1));
    for (const auto& s : ex.stages) {
      CHECK(!s.tower_failure);
      CHECK(same_tower(*T.module, s.tower, T.tower));
    }
  }
  TowerModel T = tower_canonical_model(2, 2);
  GroupPresentation P{{"g"}, {}};
  CHECK_THROWS_AS(execute_plan<Submodule>(build_plan(P), degenerate_reduction_pack(), *T.module, T.tower), Error);
}

TEST_CASE("opaque slots cannot be executed") {
  TowerModel T = tower_canonical_model(1, 2);
  GroupPresentation P{{"g"}, {parse_word("g g", {"g"})}};
  CHECK_THROWS_AS(execute_plan<Submodule>(build_plan(P), opaque_reduction_pack(), *T.module, T.tower), Error);
}

TEST_CASE("symbolic evaluation") {
  SymbolicOracle O;
  Assignment<Term> A{{"x", Term::var("p")}, {"y", Term::var("q")}};
  Resolvers<Term> R;
  R["f"] = [](const std::vector<Term>& a) { return a[0] * a[1]; };
  Term t = Term::opaque("f.1", {Term::constant("x"), Term::constant("y")}) + Term::constant("x");
  CHECK(eval_resolved(O, t, A, R) == (Term::var("p") * Term::var("q")) + Term::var("p"));
}
