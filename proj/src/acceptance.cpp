#include "modlat/acceptance.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "modlat/coords.hpp"
#include "modlat/glueing.hpp"
#include "modlat/models.hpp"
#include "modlat/reducer.hpp"
#include "modlat/tower_presentation.hpp"

namespace modlat {

namespace {

struct Ctx {
  const SuiteOptions& opts;
  CriterionResult& r;
  bool ok = true;
  void check(bool cond, const std::string& what) {
    r.details.push_back(std::string(cond ? "ok: " : "FAILED: ") + what);
    if (!cond) ok = false;
  }
  void info(const std::string& what) { r.details.push_back("info: " + what); }
};

std::string opt_str(const std::optional<std::string>& f) { return f ? *f : "ok"; }

FiniteLattice module_lattice(const FiniteModule& M) { return submodule_lattice(M, M.all_submodules()); }

// ---- A1 ----

void a1(Ctx& c) {
  c.check(!is_modular(make_m3(), c.opts.search), "M3 modular");
  FiniteModule V(FiniteRing(2, 1, Group::trivial()), 3);
  FiniteLattice L = module_lattice(V);
  c.check(L.size() == 16 && !is_modular(L, c.opts.search), "L(F_2^3) has 16 elements and is modular");
  auto w = is_modular(make_n5(), c.opts.search);
  const FiniteLattice n5 = make_n5();
  bool witness_ok = false;
  if (w) {
    auto [x, y, z] = *w;
    witness_ok = n5.meet(x, n5.join(y, n5.meet(x, z))) != n5.join(n5.meet(x, y), n5.meet(x, z));
    c.info("N5 witness (" + n5.label(x) + ", " + n5.label(y) + ", " + n5.label(z) + ")");
  }
  c.check(witness_ok, "N5 fails with a witness violating the modular law");
  std::size_t agree = 0, total = 0;
  for (const auto& [name, K] : lattice_corpus()) {
    if (K.size() > 50) continue;
    ++total;
    bool m = !is_modular(K, c.opts.search).has_value();
    bool p = !find_pentagon(K).has_value();
    bool s = !is_modular_serial(K).has_value();
    if (m == p && m == s) ++agree;
    else c.check(false, "oracles disagree on " + name);
  }
  c.check(total > 0 && agree == total,
          "modularity vs pentagon search agree on " + std::to_string(agree) + "/" + std::to_string(total) + " lattices");
}

// ---- A2 ----

void a2(Ctx& c) {
  for (std::uint32_t p : {2u, 3u}) {
    FrameModel F = canonical_frame_model(FiniteRing(p, 1, Group::trivial()), 4);
    c.check(!check_frame_relations(*F.module, F.frame), "F_" + std::to_string(p) + " 4-frame relations");
    auto d = check_derived(*F.module, F.frame);
    c.check(!d, "F_" + std::to_string(p) + " derived identities over all I, J: " + opt_str(d));
  }
}

// ---- A3 ----

struct RingCase {
  std::string name;
  FiniteRing R;
};

std::vector<RingCase> a3_rings() {
  return {{"F2", FiniteRing(2, 1, Group::trivial())},
          {"F3", FiniteRing(3, 1, Group::trivial())},
          {"Z4", FiniteRing(2, 2, Group::trivial())},
          {"F2[C2]", FiniteRing(2, 1, Group::cyclic(2))}};
}

}  // namespace

std::optional<std::string> graph_map_check(const FiniteRing& R, const SearchOptions& opts) {
  FrameModel F = canonical_frame_model(R, 4);
  const FiniteModule& M = *F.module;
  CoordRing<Submodule> C = canonical_coord_ring(M, F.frame);
  const std::uint64_t n = R.size();
  std::vector<Submodule> g;
  for (std::uint64_t x = 0; x < n; ++x) g.push_back(graph_element(M, R.element(x), 0, 2));
  if (C.domain().size() != n) return "domain has " + std::to_string(C.domain().size()) + " elements, ring " + std::to_string(n);
  for (std::uint64_t x = 0; x < n; ++x) {
    if (!C.in_domain(g[x])) return "graph(" + R.str(R.element(x)) + ") outside the domain";
    for (std::uint64_t y = 0; y < x; ++y)
      if (g[x] == g[y]) return "graph map not injective";
  }
  if (!(g[R.index(R.zero())] == C.zero())) return "graph(0) != a_1";
  if (!(g[R.index(R.one())] == C.one())) return "graph(1) != c_13";
  const std::int64_t N = std::int64_t(n);
  std::vector<std::string> fail(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(opts.jobs > 0 ? opts.jobs : 1) if (opts.jobs > 1)
  for (std::int64_t x = 0; x < N; ++x) {
    const auto a = R.element(std::uint64_t(x));
    if (!(C.neg(g[std::size_t(x)]) == g[R.index(R.neg(a))])) {
      fail[std::size_t(x)] = "negation at " + R.str(a);
      continue;
    }
    for (std::uint64_t y = 0; y < n; ++y) {
      const auto b = R.element(y);
      if (!(C.add(g[std::size_t(x)], g[y]) == g[R.index(R.add(a, b))])) {
        fail[std::size_t(x)] = "addition at (" + R.str(a) + ", " + R.str(b) + ")";
        break;
      }
      if (!(C.mul(g[std::size_t(x)], g[y]) == g[R.index(R.mul(a, b))])) {
        fail[std::size_t(x)] = "multiplication at (" + R.str(a) + ", " + R.str(b) + ")";
        break;
      }
    }
  }
  for (const auto& f : fail)
    if (!f.empty()) return f;
  return std::nullopt;
}

namespace {

void a3(Ctx& c) {
  for (const auto& [name, R] : a3_rings()) {
    auto f = graph_map_check(R, c.opts.search);
    c.check(!f, name + ": graph map is a ring isomorphism over all pairs: " + opt_str(f));
  }
}

// ---- A4 ----

void a4(Ctx& c) {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    FrameModel F = canonical_frame_model(FiniteRing(p, 1, Group::trivial()), 4);
    auto R = ring14(*F.module, F.frame);
    c.check(R.n_times(int(p)) == R.zero(), "F_" + std::to_string(p) + ": p (x) c14 = a1");
    bool below = true;
    for (int q = 1; q < int(p); ++q)
      if (R.n_times(q) == R.zero()) below = false;
    c.check(below, "F_" + std::to_string(p) + ": q (x) c14 != a1 for q < p");
  }
  FrameModel F = canonical_frame_model(FiniteRing(2, 2, Group::trivial()), 4);
  auto R = ring14(*F.module, F.frame);
  c.check(!(R.n_times(2) == R.zero()), "Z/4: 2 (x) c14 != a1");
  c.check(R.n_times(4) == R.zero(), "Z/4: 4 (x) c14 = a1");
}

// ---- A5 ----

void a5(Ctx& c) {
  for (const auto& [name, R] : std::vector<RingCase>{{"Z4", FiniteRing(2, 2, Group::trivial())},
                                                     {"F2[C2]", FiniteRing(2, 1, Group::cyclic(2))}}) {
    FrameModel F = canonical_frame_model(R, 4);
    const FiniteModule& M = *F.module;
    auto subs = M.submodules_of(F.frame.ai(1));
    std::size_t pairs = 0, good = 0;
    for (const auto& b : subs)
      for (const auto& d : subs) {
        if (!M.leq(b, d)) continue;
        ++pairs;
        SubFrame G = reduce_frame(M, F.frame, b, d);
        SubFrame T = reduce_frame_terms(M, F.frame, b, d);
        bool fine = !check_frame(M, G) && same_frame(M, G, T);
        if (b == F.frame.bot && d == F.frame.ai(1)) fine = fine && same_frame(M, G, F.frame);
        if (fine) ++good;
        else c.check(false, name + ": reduction at (" + M.label(b) + ", " + M.label(d) + ")");
      }
    c.check(good == pairs, name + ": " + std::to_string(good) + "/" + std::to_string(pairs) +
                               " pairs reduce to frames, match the setup terms, identity at (a_bot, a_1)");
    if (name == "Z4") c.check(pairs == 6, "Z4 has 6 pairs b <= d");
  }
}

// ---- A6 ----

void a6(Ctx& c) {
  const FiniteRing R(2, 1, Group::cyclic(2));
  FrameModel F = canonical_frame_model(R, 4);
  const FiniteModule& M = *F.module;
  auto interval = M.submodules_of(F.frame.ai(1));
  const Submodule g = graph_element(M, R.basis(1), 0, 2);
  c.check(is_j_stable(M, F.frame, g, 3, interval, c.opts.search).stable, "graph(g) is 3-stable");
  CoordRing<Submodule> C = canonical_coord_ring(M, F.frame);
  std::vector<Submodule> st;
  try {
    st = stable_subgroup(C, interval, c.opts.search);
    c.check(true, "stable units closed under (x) and inverses (" + std::to_string(st.size()) + " elements)");
  } catch (const Error& e) {
    c.check(false, std::string("stable subgroup: ") + e.what());
  }
  bool has_g = false, has_one = false;
  for (const auto& s : st) {
    has_g = has_g || s == g;
    has_one = has_one || s == C.one();
  }
  c.check(has_g && has_one, "stable subgroup contains graph(g) and c13");
  std::size_t good = 0;
  for (const auto& r : st) {
    Submodule b = M.meet(F.frame.ai(1), M.join(r, F.frame.cij(1, 3)));
    SubFrame up = upper_lower_reduce(M, F.frame, b, Direction::Upper);
    if (beta_b(M, F.frame, b, r) == up.cij(1, 3)) ++good;
    else c.check(false, "beta_b(r) != c13 of the upper reduction for r = " + M.label(r));
  }
  c.check(!st.empty() && good == st.size(), "beta_b(r) is the unit for b = a_1(r + c13), all stable r");
}

// ---- A7 ----

void a7(Ctx& c) {
  for (int n : {1, 2}) {
    TowerModel T = tower_canonical_model(n, 2);
    auto f = check_tower(*T.module, T.tower);
    c.check(!f, "tower n=" + std::to_string(n) + ": " + opt_str(f));
  }
}

// ---- A8 ----

void a8(Ctx& c) {
  for (int n : {1, 2}) {
    auto O = tower_presentation(TowerKind::Omega, n);
    c.check(O.economy.size() == std::size_t(n + 6), "Omega(" + std::to_string(n) + ") economy has n+6 generators");
    auto D = tower_presentation(TowerKind::Delta, n);
    c.check(D.economy.size() == std::size_t(n + 2), "Delta(" + std::to_string(n) + ") economy has n+2 generators");
    TowerModel T = tower_canonical_model(n, 2);
    const FiniteModule& M = *T.module;
    auto A = tower_assignment(T);
    HandleIndex<Submodule> seeds(M);
    for (const auto& g : O.economy) seeds.insert(A.at(g));
    auto G = generated_sublattice(M, seeds.items(), size_bound(kDefaultLatticeCap), c.opts.search);
    HandleIndex<Submodule> in(M);
    for (const auto& h : G.handles) in.insert(h);
    std::size_t miss = 0;
    for (const auto& x : tower_elements(T.tower))
      if (!in.find(x)) ++miss;
    c.check(miss == 0, "n=" + std::to_string(n) + ": sublattice of " + std::to_string(G.lattice.size()) +
                           " elements generated by the economy contains every tower element");
  }
}

// ---- A9 ----

void a9(Ctx& c) {
  const FiniteLattice m3 = make_m3();
  // Upper prime quotient [a, 1] of the first onto the lower one [0, a].
  GluedLattice DH = dilworth_hall({m3, m3}, {{{1, 0}, {4, 1}}}, c.opts.search);
  c.info("Dilworth-Hall sum has " + std::to_string(DH.lattice.size()) + " elements");
  c.check(!is_modular(DH.lattice, c.opts.search), "Dilworth-Hall sum of two M3 is modular");
  auto S = verify_simple(DH, size_bound(kDefaultCongruenceBound));
  c.check(S.simple, "Dilworth-Hall sum of two M3 is simple");

  LAModel LA = build_LA(2, {2, 2}, c.opts.search);
  c.check(LA.skeleton.size() == 5 && isomorphic(LA.skeleton, m3), "L(Z/4^2) skeleton is M3");
  try {
    GluedLattice G = glued_sum(LA.glued.spec, c.opts.search);
    FiniteLattice oc = order_completion(LA.glued.spec);
    c.check(isomorphic(G.lattice, oc) && isomorphic(G.lattice, LA.lattice),
            "glued sum over M3 (" + std::to_string(G.lattice.size()) +
                " elements): join/meet recursion matches the order completion and L(Z/4^2)");
  } catch (const Error& e) {
    c.check(false, std::string("glued sum over M3: ") + e.what());
  }

  LAModel M = build_LA(2, {2, 2, 1}, c.opts.search);
  LAReport rep = check_LA(M, c.opts.search);
  c.check(rep.decomposition, "L(Z/4+Z/4+Z/2): sigma(pC) <= C <= pi(pC) for every subgroup C (" +
                                 std::to_string(M.lattice.size()) + " subgroups)");
  c.check(rep.simple, "L(Z/4+Z/4+Z/2) is simple");
  c.check(rep.ok(), "full L(A) report: " + (rep.failure.empty() ? std::string("ok") : rep.failure));
}

// ---- A10 ----

void a10(Ctx& c) {
  struct Case {
    std::string rel;
    std::size_t order;
  };
  for (const auto& [rel, order] : {Case{"g g", 2}, Case{"g g g", 3}}) {
    GroupPresentation P{{"g"}, {parse_word(rel, {"g"})}};
    Presentation lam = lambda_presentation(P);
    LambdaModel L = canonical_lambda_model(P, Group::cyclic(order), {1}, 2);
    auto f = satisfies_presentation(*L.module, lam, L.assignment);
    const std::string tag = "<g | " + rel + "> over C" + std::to_string(order);
    c.check(!f, tag + ": lambda presentation satisfied");
    auto run = [&](const std::string& w) {
      Relation rho{lambda_word_term(P, parse_word(w, P.generators)), Term::constant("c13")};
      return search_consequence<Submodule>(lam, rho, {model_ref(L)}, c.opts.search);
    };
    auto g = run("g");
    c.check(!g.consistent && g.models_checked == 1, tag + ": word g refuted");
    auto gg = run(order == 2 ? "g g" : "g g g");
    c.check(gg.consistent && gg.models_checked == 1, tag + ": relator word consistent");
  }
}

// ---- A11 ----

void a11(Ctx& c) {
  GroupPresentation P{{"g"}, {parse_word("g g", {"g"})}};
  ReductionPlan plan = build_plan(P);
  c.check(plan.stages.size() == 2 && plan.mu == 2, "plan has mu = n + h = 2 stages");
  c.check(plan.stages.size() == 2 && plan.stages[0].kind == StageCase::LowerReduction &&
              plan.stages[1].kind == StageCase::UpperReduction,
          "stage 1 is a lower reduction, stage 2 an upper reduction");
  for (int n : {1, 2}) {
    TowerModel T = tower_canonical_model(n, 2);
    GroupPresentation Q = P;
    if (n == 2) Q = GroupPresentation{{"g", "h"}, {parse_word("g h", {"g", "h"})}};
    ReductionPlan pl = build_plan(Q);
    auto ex = execute_plan<Submodule>(pl, degenerate_reduction_pack(), *T.module, T.tower);
    bool fixed = ex.ok();
    for (const auto& s : ex.stages) fixed = fixed && same_tower(*T.module, s.tower, T.tower);
    c.check(fixed, "n=" + std::to_string(n) + ": degenerate pack leaves the tower fixed elementwise at all " +
                       std::to_string(ex.stages.size()) + " stages");
  }
}

struct Spec {
  std::string title;
  double limit;
  std::function<void(Ctx&)> run;
};

const std::map<std::string, Spec>& specs() {
  static const std::map<std::string, Spec> s{
      {"A1", {"modularity oracle", 5, a1}},
      {"A2", {"frame axioms", 5, a2}},
      {"A3", {"coordinate-ring isomorphism", 60, a3}},
      {"A4", {"characteristic", 5, a4}},
      {"A5", {"frame reduction", 30, a5}},
      {"A6", {"stability", 30, a6}},
      {"A7", {"tower model", 30, a7}},
      {"A8", {"presentation generation", 120, a8}},
      {"A9", {"glueing", 120, a9}},
      {"A10", {"lambda end-to-end", 60, a10}},
      {"A11", {"pipeline structure", 10, a11}},
  };
  return s;
}

}  // namespace

const std::vector<std::string>& criterion_ids() {
  static const std::vector<std::string> ids{"A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "A10", "A11"};
  return ids;
}

CriterionResult run_criterion(const std::string& id, const SuiteOptions& opts) {
  auto it = specs().find(id);
  if (it == specs().end()) throw Error("unknown criterion '" + id + "'");
  CriterionResult r;
  r.id = id;
  r.title = it->second.title;
  r.limit_seconds = it->second.limit;
  Ctx c{opts, r};
  auto t0 = std::chrono::steady_clock::now();
  try {
    it->second.run(c);
  } catch (const std::exception& e) {
    c.check(false, std::string("exception: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.correct = c.ok;
  return r;
}

std::string summary_line(const CriterionResult& r) {
  char buf[96];
  std::snprintf(buf, sizeof buf, " %.2fs (limit %.0fs) ", r.seconds, r.limit_seconds);
  return r.id + (r.pass() ? " PASS" : " FAIL") + buf + r.title;
}

nlohmann::json to_json(const CriterionResult& r) {
  return {{"id", r.id},          {"title", r.title},          {"pass", r.pass()},    {"correct", r.correct},
          {"seconds", r.seconds}, {"limit_seconds", r.limit_seconds}, {"details", r.details}};
}

std::vector<std::pair<std::string, FiniteLattice>> lattice_corpus() {
  std::vector<std::pair<std::string, FiniteLattice>> out;
  out.emplace_back("M3", make_m3());
  out.emplace_back("N5", make_n5());
  for (std::size_t n = 1; n <= 6; ++n) out.emplace_back("chain" + std::to_string(n), FiniteLattice::chain(n));
  for (std::size_t a = 1; a <= 5; ++a) out.emplace_back("B" + std::to_string(a), make_boolean(a));
  out.emplace_back("M3xM3", product(make_m3(), make_m3()));
  out.emplace_back("N5x2", product(make_n5(), FiniteLattice::chain(2)));
  out.emplace_back("M3x2", product(make_m3(), FiniteLattice::chain(2)));
  out.emplace_back("N5xM3", product(make_n5(), make_m3()));
  out.emplace_back("N5xN5", product(make_n5(), make_n5()));
  auto groups = std::vector<std::pair<std::string, std::pair<std::uint32_t, std::vector<unsigned>>>>{
      {"L(Z4)", {2, {2}}},       {"L(Z2+Z2)", {2, {1, 1}}}, {"L(Z4+Z2)", {2, {2, 1}}},
      {"L(Z4+Z4)", {2, {2, 2}}}, {"L(Z3+Z3)", {3, {1, 1}}}, {"L(Z2^3)", {2, {1, 1, 1}}},
      {"L(Z8+Z2)", {2, {3, 1}}}, {"L(Z9+Z3)", {3, {2, 1}}}};
  for (const auto& [name, ps] : groups) {
    auto M = abelian_group(ps.first, ps.second);
    out.emplace_back(name, module_lattice(*M));
  }
  const FiniteLattice m3 = make_m3();
  out.emplace_back("DH(M3,M3)", dilworth_hall({m3, m3}, {{{1, 0}, {4, 1}}}).lattice);
  out.emplace_back("M3 glued at a point", dilworth_hall({m3, m3}, {{{4, 0}}}).lattice);
  const FiniteLattice n5 = make_n5();
  out.emplace_back("DH(N5,M3)", dilworth_hall({n5, m3}, {{{3, 0}, {4, 1}}}).lattice);
  // Intervals of a non-modular product, to include more pentagons.
  FiniteLattice P = product(make_n5(), FiniteLattice::chain(3));
  out.emplace_back("N5x3", P);
  out.emplace_back("N5x3 upper interval", interval(P, P.covers(P.bottom())[0], P.top()));
  return out;
}

}  // namespace modlat
