#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "modlat/acceptance.hpp"
#include "modlat/glueing.hpp"
#include "modlat/models.hpp"
#include "modlat/reducer.hpp"

using namespace modlat;

namespace {

const std::vector<int> kJobs{1, 2, 4, 8};

}  // namespace

TEST_CASE("is_modular: parallel witness equals the serial one") {
  for (const auto& [name, L] : lattice_corpus()) {
    CAPTURE(name);
    auto s = is_modular_serial(L);
    for (int j : kJobs) CHECK(is_modular(L, SearchOptions{j}) == s);
  }
}

TEST_CASE("holds_identity: least counterexample for every job count") {
  std::mt19937_64 rng(3);
  const std::vector<std::string> vars{"x", "y", "z", "w"};
  FiniteLattice L = product(make_n5(), FiniteLattice::chain(2));
  for (int i = 0; i < 20; ++i) {
    Term s = testing::random_term(rng, vars, 3), t = testing::random_term(rng, vars, 3);
    auto ref = holds_identity_serial(L, s, t, vars);
    for (int j : kJobs) {
      auto r = holds_identity(L, s, t, vars, SearchOptions{j});
      CHECK(r.holds == ref.holds);
      CHECK(r.counterexample == ref.counterexample);
      CHECK(r.assignments_checked == ref.assignments_checked);
    }
  }
}

TEST_CASE("holds_quasi_identity: least counterexample for every job count") {
  std::mt19937_64 rng(8);
  const std::vector<std::string> vars{"x", "y", "z", "w"};
  FiniteLattice L = product(make_m3(), FiniteLattice::chain(2));
  for (int i = 0; i < 10; ++i) {
    std::vector<std::pair<Term, Term>> ante{{testing::random_term(rng, vars, 2), testing::random_term(rng, vars, 2)}};
    Term s = testing::random_term(rng, vars, 3), t = testing::random_term(rng, vars, 3);
    auto ref = holds_quasi_identity_serial(L, ante, s, t, vars);
    for (int j : kJobs) {
      auto r = holds_quasi_identity(L, ante, s, t, vars, SearchOptions{j});
      CHECK(r.holds == ref.holds);
      CHECK(r.counterexample == ref.counterexample);
      CHECK(r.assignments_checked == ref.assignments_checked);
    }
  }
}

TEST_CASE("generated_sublattice: same elements in the same order") {
  TowerModel T = tower_canonical_model(1, 2);
  const FiniteModule& M = *T.module;
  auto A = tower_assignment(T);
  HandleIndex<Submodule> seeds(M);
  for (const auto& g : tower_presentation(TowerKind::Omega, 1).economy) seeds.insert(A.at(g));
  auto ref = generated_sublattice_serial(M, seeds.items(), kDefaultLatticeCap);
  for (int j : kJobs) {
    auto G = generated_sublattice(M, seeds.items(), kDefaultLatticeCap, SearchOptions{j});
    REQUIRE(G.handles.size() == ref.handles.size());
    bool same = true;
    for (std::size_t i = 0; i < G.handles.size(); ++i) same = same && G.handles[i] == ref.handles[i];
    for (Elem a = 0; a < G.lattice.size() && same; ++a)
      for (Elem b = 0; b < G.lattice.size(); ++b)
        same = same && G.lattice.join(a, b) == ref.lattice.join(a, b) && G.lattice.meet(a, b) == ref.lattice.meet(a, b);
    CHECK(same);
  }
  CHECK_THROWS_AS(generated_sublattice(M, seeds.items(), 10, SearchOptions{4}), BoundExceeded);
}

TEST_CASE("is_j_stable: first failing b_1 is job independent") {
  FrameModel F = canonical_frame_model(FiniteRing(2, 2, Group::trivial()), 4);
  const FiniteModule& M = *F.module;
  auto interval = M.submodules_of(F.frame.ai(1));
  CoordRing<Submodule> C = canonical_coord_ring(M, F.frame);
  for (const auto& s : C.domain()) {
    auto ref = is_j_stable(M, F.frame, s, 3, interval);
    for (int j : kJobs) {
      auto r = is_j_stable(M, F.frame, s, 3, interval, SearchOptions{j});
      CHECK(r.stable == ref.stable);
      CHECK(r.reason == ref.reason);
      CHECK(r.failing_b1.has_value() == ref.failing_b1.has_value());
      if (r.failing_b1 && ref.failing_b1) CHECK(*r.failing_b1 == *ref.failing_b1);
    }
  }
}

TEST_CASE("graph map check, submodule lattices and glueing under several jobs") {
  for (int j : kJobs) CHECK(!graph_map_check(FiniteRing(3, 1, Group::trivial()), SearchOptions{j}));
  auto M = abelian_group(2, {2, 2, 1});
  auto subs = M->all_submodules();
  FiniteLattice ref = submodule_lattice(*M, subs);
  LAModel LA = build_LA(2, {2, 2, 1});
  GluedLattice gref = glued_sum(LA.glued.spec);
  LGModel LG(Group::cyclic(2), 2, {2, 1});
  for (int j : kJobs) {
    FiniteLattice L = submodule_lattice(*M, subs, SearchOptions{j});
    bool same = true;
    for (Elem a = 0; a < L.size(); ++a)
      for (Elem b = 0; b < L.size(); ++b) same = same && L.join(a, b) == ref.join(a, b) && L.meet(a, b) == ref.meet(a, b);
    CHECK(same);
    GluedLattice g = glued_sum(LA.glued.spec, SearchOptions{j});
    CHECK(g.lattice.size() == gref.lattice.size());
    CHECK(g.cls == gref.cls);
    CHECK(!LG.check_embeddings(SearchOptions{j}));
  }
}

TEST_CASE("consequence search reports the first refuting model") {
  GroupPresentation P{{"g"}, {parse_word("g g g g g g", {"g"})}};
  Presentation lam = lambda_presentation(P);
  std::vector<LambdaModel> models;
  for (std::uint32_t x = 0; x < 6; ++x) models.push_back(canonical_lambda_model(P, Group::cyclic(6), {x}, 2));
  std::vector<ModelRef<Submodule>> refs;
  for (const auto& m : models) refs.push_back(model_ref(m));
  for (const std::string w : {"g g", "g g g", "g g g g g g"}) {
    Relation rho{lambda_word_term(P, parse_word(w, P.generators)), Term::constant("c13")};
    auto ref = search_consequence<Submodule>(lam, rho, refs);
    for (int j : kJobs) {
      auto r = search_consequence<Submodule>(lam, rho, refs, SearchOptions{j});
      CHECK(r.consistent == ref.consistent);
      CHECK(r.refuting_model == ref.refuting_model);
      CHECK(r.models_checked == ref.models_checked);
    }
  }
}
