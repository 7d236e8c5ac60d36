#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "modlat/coords.hpp"
#include "modlat/models.hpp"
#include "modlat/oracle.hpp"
#include "modlat/presentation.hpp"
#include "modlat/ring.hpp"
#include "modlat/term.hpp"
#include "modlat/tower.hpp"
#include "modlat/tower_presentation.hpp"

#include <json.hpp>

namespace modlat {

// ---- group words -------------------------------------------------------

struct Letter {
  std::size_t gen = 0;
  int exp = 1;  // +1 or -1
  friend bool operator==(const Letter&, const Letter&) = default;
};
using Word = std::vector<Letter>;

struct GroupPresentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;

  // Throws on duplicate or malformed names and out-of-range letters.
  void validate() const;
  std::string word_str(const Word& w) const;
};

// Letters separated by whitespace, or run together when the generator names
// allow a greedy longest match; a trailing ' inverts. The empty string and
// "1" are the empty word.
Word parse_word(const std::string& text, const std::vector<std::string>& generators);

Word inverse(const Word& w);
Word concat(const Word& a, const Word& b);

// Value of w in G with generator i sent to h[i].
std::uint32_t eval_word(const Group& G, const Word& w, const std::vector<std::uint32_t>& h);

GroupPresentation group_presentation_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GroupPresentation& P);

// ---- term packs --------------------------------------------------------

// A slot is either a term in its parameters (Term::var(param)) and constants,
// or an opaque placeholder that emits Term::opaque(name, args).
struct Slot {
  std::vector<std::string> params;
  std::optional<Term> body;
  bool concrete() const { return body.has_value(); }
};

class TermPack {
 public:
  // Unless free_vars is set, every variable of body must be a parameter.
  void set_concrete(const std::string& name, std::vector<std::string> params, Term body, bool free_vars = false);
  void set_opaque(const std::string& name, std::vector<std::string> params);
  bool has(const std::string& name) const { return slots_.count(name) != 0; }
  const Slot& slot(const std::string& name) const;
  bool concrete(const std::string& name) const { return slot(name).concrete(); }
  // Body with parameters replaced by args, or the opaque node. Checks arity.
  Term apply(const std::string& name, const std::vector<Term>& args) const;
  // Slots of other replace slots of the same name.
  void merge(const TermPack& other);
  const std::map<std::string, Slot>& slots() const { return slots_; }

 private:
  std::map<std::string, Slot> slots_;
};

// Opaque kind of a slot name: the prefix before '.', e.g. "t" for "t.a1_1".
std::string opaque_kind(const std::string& name);

// mul, add and one of the ring on axes (1, 3; 4) of F, written as terms in
// F's handles; inv and neg are opaque with one argument.
TermPack coordinate_pack(const FrameConfig<Term>& F);

// Parameters of the reduction slots b*, d*, g+ and f*: the shared bottom,
// the outer 4-frame, then the inner 3-frame.
const std::vector<std::string>& skew_params();
std::vector<Term> skew_args(const SkewFrameConfig<Term>& S);
template <class H>
std::vector<H> skew_values(const SkewFrameConfig<H>& S) {
  const auto& X = S.outer;
  const auto& I = S.inner;
  return {I.bot, X.ai(1), X.ai(2), X.ai(3), X.ai(4), X.cij(1, 2), X.cij(1, 3), X.cij(1, 4),
          I.ai(1), I.ai(2), I.ai(3), I.cij(1, 2), I.cij(1, 3)};
}

// b*, d*, g+, f* opaque.
TermPack opaque_reduction_pack();
// b* = a_⊥, d* = a_1, f* = a_⊥; g+ stays opaque.
TermPack degenerate_reduction_pack();

// Slots: name -> {params: [...], body: "term" | null}.
TermPack term_pack_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TermPack& P);

// ---- symbolic host -----------------------------------------------------

// Terms as a host: join and meet build terms, equality is syntactic on normal
// forms and leq is not decided (always true), so checks that need the order
// are skipped rather than answered.
class SymbolicOracle final : public LatticeOracle<Term> {
 public:
  bool equal(const Term& a, const Term& b) const override { return a == b; }
  Term join(const Term& a, const Term& b) const override { return a + b; }
  Term meet(const Term& a, const Term& b) const override { return a * b; }
  bool leq(const Term&, const Term&) const override { return true; }
  std::size_t hash(const Term& a) const override { return a.hash(); }
  std::string label(const Term& a) const override { return a.str(); }
};

// Evaluates t with opaque nodes handled by resolvers keyed by opaque kind.
template <class H>
using Resolver = std::function<H(const std::vector<H>&)>;
template <class H>
using Resolvers = std::map<std::string, Resolver<H>>;

template <class H>
H eval_resolved(const LatticeOracle<H>& O, const Term& t, const Assignment<H>& A, const Resolvers<H>& R) {
  std::unordered_map<const void*, H> memo;
  auto go = [&](auto&& self, const Term& x) -> H {
    if (auto it = memo.find(x.id()); it != memo.end()) return it->second;
    H r;
    switch (x.kind()) {
      case Kind::Var:
      case Kind::Const: {
        auto it = A.find(x.name());
        if (it == A.end()) throw Error("unmapped symbol '" + x.name() + "'");
        r = it->second;
        break;
      }
      case Kind::Join:
      case Kind::Meet: {
        const auto& cs = x.children();
        r = self(self, cs[0]);
        for (std::size_t i = 1; i < cs.size(); ++i) {
          H c = self(self, cs[i]);
          r = x.kind() == Kind::Join ? O.join(r, c) : O.meet(r, c);
        }
        break;
      }
      case Kind::Opaque: {
        auto it = R.find(opaque_kind(x.name()));
        if (it == R.end()) throw Error("opaque slot '" + x.name() + "' blocks evaluation");
        std::vector<H> args;
        for (const auto& c : x.children()) args.push_back(self(self, c));
        r = it->second(args);
        break;
      }
    }
    memo.emplace(x.id(), r);
    return r;
  };
  return go(go, t);
}

// Opaque kinds occurring in t.
std::set<std::string> opaque_kinds(const Term& t);

// ---- words to terms ----------------------------------------------------

// Left fold with the mul slot over the letters; generator i maps to
// context[i], an inverse letter to inv(context[i]), the empty word to one.
Term word_to_term(const Word& w, const TermPack& pack, const std::vector<Term>& context);

// ---- λ(Π) --------------------------------------------------------------

// Frame symbols of λ(Π): a 4-frame with empty suffix.
FrameConfig<Term> symbolic_frame(int n, const std::string& suffix = "");

// 4-frame generators, one generator per g_i, and the relations
// a_1 g_i = a_⊥, a_1 + g_i = a_1 + a_3 per generator and w_j(ḡ) = c_13 per
// relator. Axis2 swaps the second relation for a_1 + g_i = a_1 + a_2; the
// canonical models only satisfy the default reading.
enum class LambdaAxis { Axis3, Axis2 };
Presentation lambda_presentation(const GroupPresentation& P, LambdaAxis axis = LambdaAxis::Axis3);

// w^# over λ(Π)'s generators.
Term lambda_word_term(const GroupPresentation& P, const Word& w);

struct LambdaModel {
  std::unique_ptr<FiniteModule> module;
  SubFrame frame;
  std::unique_ptr<CoordRing<Submodule>> ring;
  Assignment<Submodule> assignment;
  Resolvers<Submodule> resolvers;
  // Generator images in G.
  std::vector<std::uint32_t> h;
  std::string name;

  // w^# evaluated in the model.
  Submodule eval_word_term(const GroupPresentation& P, const Word& w) const;
};

// F_p[G]^4 with its canonical frame and g_i ↦ R(e_1 - h_i e_3). Throws if h
// violates a relator, naming it.
LambdaModel canonical_lambda_model(const GroupPresentation& P, const Group& G, const std::vector<std::uint32_t>& h,
                                   std::uint32_t p = 2);

template <class H>
struct ModelRef {
  const LatticeOracle<H>* oracle = nullptr;
  const Assignment<H>* assignment = nullptr;
  const Resolvers<H>* resolvers = nullptr;
  std::string name;
};

inline ModelRef<Submodule> model_ref(const LambdaModel& M) {
  return {M.module.get(), &M.assignment, &M.resolvers, M.name};
}

struct ConsequenceResult {
  // False means refuted.
  bool consistent = true;
  std::optional<std::size_t> refuting_model;
  std::string refuting_name;
  std::size_t models_checked = 0;
  std::vector<std::string> warnings;
};

// Checks rho in each model that satisfies pres; models failing pres are
// skipped with a warning. "consistent" only means no model refuted rho.
template <class H>
ConsequenceResult search_consequence(const Presentation& pres, const Relation& rho,
                                     const std::vector<ModelRef<H>>& models, const SearchOptions& opts = {}) {
  ConsequenceResult out;
  if (models.empty()) {
    out.warnings.push_back("no models supplied; consistent holds vacuously");
    return out;
  }
  const std::int64_t m = std::int64_t(models.size());
  std::vector<int> status(models.size(), 0);  // 0 holds, 1 refuted, 2 skipped
  std::vector<std::string> why(models.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(opts.jobs > 0 ? opts.jobs : 1) if (opts.jobs > 1)
  for (std::int64_t k = 0; k < m; ++k) {
    const auto& M = models[std::size_t(k)];
    static const Resolvers<H> none;
    const Resolvers<H>& R = M.resolvers ? *M.resolvers : none;
    try {
      for (const auto& [l, r] : pres.relations())
        if (!M.oracle->equal(eval_resolved(*M.oracle, l, *M.assignment, R),
                             eval_resolved(*M.oracle, r, *M.assignment, R))) {
          status[std::size_t(k)] = 2;
          why[std::size_t(k)] = "model '" + M.name + "' fails " + l.str() + " = " + r.str() + "; skipped";
          break;
        }
      if (status[std::size_t(k)] == 0 &&
          !M.oracle->equal(eval_resolved(*M.oracle, rho.first, *M.assignment, R),
                           eval_resolved(*M.oracle, rho.second, *M.assignment, R)))
        status[std::size_t(k)] = 1;
    } catch (const Error& e) {
      status[std::size_t(k)] = 2;
      why[std::size_t(k)] = "model '" + M.name + "': " + e.what() + "; skipped";
    }
  }
  for (std::size_t k = 0; k < models.size(); ++k) {
    if (status[k] == 2) {
      out.warnings.push_back(why[k]);
      continue;
    }
    ++out.models_checked;
    if (status[k] == 1 && out.consistent) {
      out.consistent = false;
      out.refuting_model = k;
      out.refuting_name = models[k].name;
    }
  }
  if (out.models_checked == 0) out.warnings.push_back("every model was skipped; consistent holds vacuously");
  return out;
}

// ---- term DAGs ---------------------------------------------------------

// Nodes {id, kind, name?, children} deduplicated structurally, in post-order
// of the roots; roots maps each label to its node id.
nlohmann::json term_dag(const std::vector<std::pair<std::string, Term>>& roots);

// ---- β ↦ β* ------------------------------------------------------------

// ∀ȳ. (∧ antecedent) → lhs = rhs over `vars` group variables.
struct QuasiIdentity {
  std::size_t vars = 0;
  std::vector<std::pair<Word, Word>> antecedent;
  Word lhs, rhs;
};

// Antecedent r_j = 1 for every relator, conclusion w = 1.
QuasiIdentity word_problem_instance(const GroupPresentation& P, const Word& w);

struct BetaStar {
  int n = 0;
  // The n + 6 variables, one per economy generator of Ω(n).
  std::vector<std::string> variables;
  // Generators of the combined presentation: s_1..s_n, then Ω(n)'s.
  std::vector<std::string> generators;
  Term lhs, rhs;
  std::vector<std::string> deferred;
  nlohmann::json dag;
};

// t.<gen> and u.<gen> opaque over the variables resp. over t̄.
TermPack opaque_beta_pack(int n);
// u.<gen> = its argument for the same generator.
TermPack identity_u_pack(int n);

// Identity w^#(ū(t̄(x̄))|_n, ū(t̄(x̄))) = v^#(...), with the coordinate terms
// taken from the outer 4-frame of level n of the tower read off ū. The
// obligation that Π implies α^# is not discharged here; it is listed in
// `deferred` unless every slot used is concrete.
BetaStar compile_beta_star(const QuasiIdentity& beta, const TermPack& pack, int n);

// ---- iterated reduction ------------------------------------------------

enum class StageCase { LowerReduction = 1, UpperReduction = 2 };

struct PlanStage {
  int m = 0;
  StageCase kind = StageCase::LowerReduction;
  int level = 0;  // tower level the reduction is induced from
  std::vector<std::string> slots;
  std::vector<std::string> obligations;
  std::vector<std::string> notes;
  std::vector<std::pair<std::string, Term>> terms;
};

struct ReductionPlan {
  int n = 0, h = 0, mu = 0;
  GroupPresentation group;
  std::vector<PlanStage> stages;  // stages[m-1] builds Ω_m from Ω_{m-1}
  std::vector<std::string> deferred;
};

// μ = n + h stages over the symbolic tower read off Ω(n)'s generators.
ReductionPlan build_plan(const GroupPresentation& P, const TermPack& pack = opaque_reduction_pack());
nlohmann::json to_json(const ReductionPlan& plan);

template <class H>
struct StageResult {
  int m = 0;
  TowerConfig<H> tower;
  std::optional<std::string> tower_failure;
  std::vector<H> stable;
  std::vector<std::string> notes;
};

template <class H>
struct ExecutionResult {
  std::vector<StageResult<H>> stages;
  bool ok() const {
    for (const auto& s : stages)
      if (s.tower_failure) return false;
    return true;
  }
};

// Runs the plan on a concrete tower. b*, d* and f* must be concrete; without
// a concrete g+ no stable elements are created and the stage says so.
// Case 1 uses tower_reduce_setup at level m, Case 2 tower_reduce_upper at
// level n; every resulting tower is re-checked.
template <class H>
ExecutionResult<H> execute_plan(const ReductionPlan& plan, const TermPack& pack, const LatticeOracle<H>& O,
                                const TowerConfig<H>& start) {
  if (int(start.levels.size()) != plan.n) throw Error("tower height differs from the plan's n");
  const auto& params = skew_params();
  auto slot_value = [&](const std::string& name, const SkewFrameConfig<H>& S) {
    const Slot& sl = pack.slot(name);
    if (!sl.concrete()) throw Error("opaque slot '" + name + "' required for execution");
    Assignment<H> A;
    auto vals = skew_values(S);
    for (std::size_t i = 0; i < params.size(); ++i) A[params[i]] = vals[i];
    return eval(O, *sl.body, A);
  };
  ExecutionResult<H> out;
  TowerConfig<H> cur = start;
  std::vector<H> stable;
  for (const auto& st : plan.stages) {
    StageResult<H> r;
    r.m = st.m;
    if (st.kind == StageCase::LowerReduction) {
      const auto& S = cur.levels[std::size_t(st.level - 1)];
      H b = slot_value("b*", S), d = slot_value("d*", S);
      TowerConfig<H> next = tower_reduce_setup(O, cur, std::size_t(st.level), b, d);
      const auto& top = next.levels.back().outer;
      for (auto& s : stable) s = O.join(O.meet(s, top.top), top.bot);
      if (pack.concrete("g+")) {
        H g = slot_value("g+", next.levels[std::size_t(st.level - 1)]);
        stable.push_back(O.join(g, top.bot));
      } else {
        r.notes.push_back("g+ opaque: stable element deferred to term pack");
      }
      cur = std::move(next);
    } else {
      const auto& S = cur.levels[std::size_t(st.level - 1)];
      H b = slot_value("f*", S);
      TowerConfig<H> next = tower_reduce_upper(O, cur, std::size_t(st.level), b);
      for (auto& s : stable) s = O.join(s, next.levels.back().outer.bot);
      cur = std::move(next);
    }
    r.tower = cur;
    r.tower_failure = check_tower(O, cur);
    r.stable = stable;
    out.stages.push_back(std::move(r));
  }
  return out;
}

}  // namespace modlat
