#include "modlat/reducer.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace modlat {

namespace {

Term C(const std::string& s) { return Term::constant(s); }
Term V(const std::string& s) { return Term::var(s); }

bool valid_generator_name(const std::string& g) {
  if (g.empty() || !std::isalpha(static_cast<unsigned char>(g[0]))) return false;
  for (char c : g)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

}  // namespace

// ---- group words -------------------------------------------------------

void GroupPresentation::validate() const {
  std::set<std::string> seen;
  for (const auto& g : generators) {
    if (!valid_generator_name(g)) throw Error("malformed generator name '" + g + "'");
    if (!seen.insert(g).second) throw Error("duplicate generator '" + g + "'");
  }
  for (std::size_t j = 0; j < relators.size(); ++j)
    for (const auto& l : relators[j]) {
      if (l.gen >= generators.size()) throw Error("relator " + std::to_string(j + 1) + " uses an undeclared generator");
      if (l.exp != 1 && l.exp != -1) throw Error("relator " + std::to_string(j + 1) + " has an exponent other than +-1");
    }
}

std::string GroupPresentation::word_str(const Word& w) const {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += generators.at(w[i].gen);
    if (w[i].exp < 0) out += '\'';
  }
  return out;
}

Word parse_word(const std::string& text, const std::vector<std::string>& generators) {
  Word w;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    // "1" is the empty word, as printed by word_str.
    if (text[i] == '1') {
      ++i;
      continue;
    }
    std::size_t best = generators.size(), len = 0;
    for (std::size_t g = 0; g < generators.size(); ++g) {
      const auto& name = generators[g];
      if (name.size() > len && text.compare(i, name.size(), name) == 0) {
        best = g;
        len = name.size();
      }
    }
    if (best == generators.size()) throw ParseError("unknown generator in word '" + text + "'", i);
    i += len;
    int exp = 1;
    while (i < text.size() && text[i] == '\'') {
      exp = -exp;
      ++i;
    }
    w.push_back({best, exp});
  }
  return w;
}

Word inverse(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (auto& l : out) l.exp = -l.exp;
  return out;
}

Word concat(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::uint32_t eval_word(const Group& G, const Word& w, const std::vector<std::uint32_t>& h) {
  std::uint32_t x = G.identity();
  for (const auto& l : w) {
    if (l.gen >= h.size()) throw Error("word uses a generator without an image");
    std::uint32_t y = l.exp > 0 ? h[l.gen] : G.inverse(h[l.gen]);
    x = G.mul(x, y);
  }
  return x;
}

GroupPresentation group_presentation_from_json(const nlohmann::json& j) {
  GroupPresentation P;
  if (!j.contains("generators") || !j.at("generators").is_array()) throw Error("group presentation needs generators");
  for (const auto& g : j.at("generators")) P.generators.push_back(g.get<std::string>());
  if (j.contains("relators"))
    for (const auto& r : j.at("relators")) P.relators.push_back(parse_word(r.get<std::string>(), P.generators));
  P.validate();
  return P;
}

nlohmann::json to_json(const GroupPresentation& P) {
  nlohmann::json j;
  j["generators"] = P.generators;
  j["relators"] = nlohmann::json::array();
  for (const auto& r : P.relators) j["relators"].push_back(P.word_str(r));
  return j;
}

// ---- term packs --------------------------------------------------------

void TermPack::set_concrete(const std::string& name, std::vector<std::string> params, Term body, bool free_vars) {
  std::set<std::string> ps(params.begin(), params.end());
  if (ps.size() != params.size()) throw Error("slot '" + name + "' repeats a parameter");
  // Constants are allowed; variables must be parameters.
  auto go = [&](auto&& self, const Term& t) -> void {
    if (!free_vars && t.kind() == Kind::Var && !ps.count(t.name()))
      throw Error("slot '" + name + "' uses undeclared parameter '" + t.name() + "'");
    for (const auto& c : t.children()) self(self, c);
  };
  go(go, body);
  slots_[name] = Slot{std::move(params), std::move(body)};
}

void TermPack::set_opaque(const std::string& name, std::vector<std::string> params) {
  slots_[name] = Slot{std::move(params), std::nullopt};
}

const Slot& TermPack::slot(const std::string& name) const {
  auto it = slots_.find(name);
  if (it == slots_.end()) throw Error("term pack has no slot '" + name + "'");
  return it->second;
}

Term TermPack::apply(const std::string& name, const std::vector<Term>& args) const {
  const Slot& s = slot(name);
  if (args.size() != s.params.size())
    throw Error("slot '" + name + "' takes " + std::to_string(s.params.size()) + " arguments, got " +
                std::to_string(args.size()));
  if (!s.concrete()) return Term::opaque(name, args);
  Substitution sub;
  for (std::size_t i = 0; i < args.size(); ++i) sub[s.params[i]] = args[i];
  return substitute(*s.body, sub, true);
}

void TermPack::merge(const TermPack& other) {
  for (const auto& [k, v] : other.slots_) slots_[k] = v;
}

std::string opaque_kind(const std::string& name) {
  auto dot = name.find('.');
  return dot == std::string::npos ? name : name.substr(0, dot);
}

TermPack coordinate_pack(const FrameConfig<Term>& F) {
  if (F.n != 4) throw Error("coordinate pack needs a 4-frame");
  // Parameter names cannot clash with generator symbols.
  const Term r = V("#r"), s = V("#s");
  const Term a13 = F.ai(1) + F.ai(3), a14 = F.ai(1) + F.ai(4), a34 = F.ai(3) + F.ai(4);
  TermPack P;
  P.set_concrete("mul", {"#r", "#s"}, a13 * ((r + F.cij(3, 4)) * a14 + (s + F.cij(1, 4)) * a34), true);
  const Term sk = (s + F.cij(3, 4)) * a14;
  P.set_concrete("add", {"#r", "#s"}, a13 * ((r + F.ai(4)) * (sk + F.ai(3)) + F.cij(3, 4)), true);
  P.set_concrete("one", {}, F.cij(1, 3), true);
  P.set_concrete("zero", {}, F.ai(1), true);
  P.set_opaque("inv", {"#r"});
  P.set_opaque("neg", {"#r"});
  return P;
}

const std::vector<std::string>& skew_params() {
  static const std::vector<std::string> p{"bot",  "a1'", "a2'", "a3'", "a4'", "c12'", "c13'",
                                          "c14'", "a1",  "a2",  "a3",  "c12", "c13"};
  return p;
}

std::vector<Term> skew_args(const SkewFrameConfig<Term>& S) { return skew_values(S); }

TermPack opaque_reduction_pack() {
  TermPack P;
  for (const char* s : {"b*", "d*", "g+", "f*"}) P.set_opaque(s, skew_params());
  return P;
}

TermPack degenerate_reduction_pack() {
  TermPack P = opaque_reduction_pack();
  P.set_concrete("b*", skew_params(), V("bot"));
  P.set_concrete("d*", skew_params(), V("a1"));
  P.set_concrete("f*", skew_params(), V("bot"));
  return P;
}

TermPack term_pack_from_json(const nlohmann::json& j) {
  TermPack P;
  for (const auto& [name, v] : j.items()) {
    std::vector<std::string> params = v.at("params").get<std::vector<std::string>>();
    if (!v.contains("body") || v.at("body").is_null()) {
      P.set_opaque(name, params);
      continue;
    }
    std::set<std::string> ps(params.begin(), params.end());
    ParseOptions opts;
    opts.variables = &ps;
    P.set_concrete(name, params, parse_term(v.at("body").get<std::string>(), opts));
  }
  return P;
}

nlohmann::json to_json(const TermPack& P) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, s] : P.slots()) {
    j[name]["params"] = s.params;
    j[name]["body"] = s.concrete() ? nlohmann::json(s.body->str()) : nlohmann::json(nullptr);
  }
  return j;
}

std::set<std::string> opaque_kinds(const Term& t) {
  std::set<std::string> out;
  std::set<const void*> seen;
  auto go = [&](auto&& self, const Term& x) -> void {
    if (!seen.insert(x.id()).second) return;
    if (x.kind() == Kind::Opaque) out.insert(opaque_kind(x.name()));
    for (const auto& c : x.children()) self(self, c);
  };
  go(go, t);
  return out;
}

// ---- words to terms ----------------------------------------------------

Term word_to_term(const Word& w, const TermPack& pack, const std::vector<Term>& context) {
  auto letter = [&](const Letter& l) {
    if (l.gen >= context.size()) throw Error("word letter outside the context");
    return l.exp > 0 ? context[l.gen] : pack.apply("inv", {context[l.gen]});
  };
  if (w.empty()) return pack.apply("one", {});
  Term acc = letter(w[0]);
  for (std::size_t i = 1; i < w.size(); ++i) acc = pack.apply("mul", {acc, letter(w[i])});
  return acc;
}

// ---- λ(Π) --------------------------------------------------------------

FrameConfig<Term> symbolic_frame(int n, const std::string& suffix) {
  FrameSymbols F = frame_symbols(n, suffix);
  std::vector<Term> a, c1;
  for (const auto& s : F.a) a.push_back(C(s));
  for (const auto& s : F.c1) c1.push_back(C(s));
  return make_frame<Term>(SymbolicOracle(), C(F.bot), a, c1);
}

namespace {

void check_lambda_names(const GroupPresentation& P) {
  P.validate();
  Presentation frame = frame_presentation(4);
  for (const auto& g : P.generators)
    if (frame.has_generator(g)) throw Error("generator '" + g + "' clashes with a frame symbol");
}

std::vector<Term> generator_constants(const GroupPresentation& P) {
  std::vector<Term> out;
  for (const auto& g : P.generators) out.push_back(C(g));
  return out;
}

}  // namespace

Term lambda_word_term(const GroupPresentation& P, const Word& w) {
  return word_to_term(w, coordinate_pack(symbolic_frame(4)), generator_constants(P));
}

Presentation lambda_presentation(const GroupPresentation& P, LambdaAxis axis) {
  check_lambda_names(P);
  Presentation frame = frame_presentation(4);
  std::vector<std::string> gens = frame.generators();
  gens.insert(gens.end(), P.generators.begin(), P.generators.end());
  std::vector<Relation> rels = frame.relations();
  const Term bot = C("bot"), a1 = C("a1"), c13 = C("c13");
  const Term side = C(axis == LambdaAxis::Axis3 ? "a3" : "a2");
  for (const auto& g : P.generators) {
    rels.emplace_back(a1 * C(g), bot);
    rels.emplace_back(a1 + C(g), a1 + side);
  }
  for (const auto& r : P.relators) rels.emplace_back(lambda_word_term(P, r), c13);
  return Presentation("lambda", gens, rels);
}

Submodule LambdaModel::eval_word_term(const GroupPresentation& P, const Word& w) const {
  return eval_resolved<Submodule>(*module, lambda_word_term(P, w), assignment, resolvers);
}

LambdaModel canonical_lambda_model(const GroupPresentation& P, const Group& G, const std::vector<std::uint32_t>& h,
                                   std::uint32_t p) {
  check_lambda_names(P);
  if (h.size() != P.generators.size()) throw Error("need one group element per generator");
  for (auto x : h)
    if (x >= G.order()) throw Error("generator image outside the group");
  for (std::size_t j = 0; j < P.relators.size(); ++j)
    if (eval_word(G, P.relators[j], h) != G.identity())
      throw Error("relator " + std::to_string(j + 1) + " (" + P.word_str(P.relators[j]) +
                  ") is not the identity under the given images");
  LambdaModel L;
  FrameModel F = canonical_frame_model(FiniteRing(p, 1, G), 4);
  L.module = std::move(F.module);
  L.frame = std::move(F.frame);
  const FiniteModule& M = *L.module;
  L.ring = std::make_unique<CoordRing<Submodule>>(M, L.frame);
  L.ring->set_domain(graph_domain(M, 0, 2));
  L.assignment = frame_assignment(frame_symbols(4), L.frame);
  for (std::size_t i = 0; i < h.size(); ++i)
    L.assignment[P.generators[i]] = graph_element(M, M.ring().basis(h[i]), 0, 2);
  const CoordRing<Submodule>* R = L.ring.get();
  L.resolvers["inv"] = [R](const std::vector<Submodule>& a) { return R->inverse(a.at(0)); };
  L.resolvers["neg"] = [R](const std::vector<Submodule>& a) { return R->neg(a.at(0)); };
  L.h = h;
  std::ostringstream name;
  name << "F" << p << "[G|" << G.order() << "]^4 h=(";
  for (std::size_t i = 0; i < h.size(); ++i) name << (i ? "," : "") << G.name(h[i]);
  name << ")";
  L.name = name.str();
  return L;
}

// ---- term DAGs ---------------------------------------------------------

nlohmann::json term_dag(const std::vector<std::pair<std::string, Term>>& roots) {
  nlohmann::json nodes = nlohmann::json::array();
  std::map<Term, std::size_t> ids;
  std::unordered_map<const void*, std::size_t> by_ptr;
  auto kind_name = [](Kind k) {
    switch (k) {
      case Kind::Var: return "var";
      case Kind::Const: return "const";
      case Kind::Join: return "join";
      case Kind::Meet: return "meet";
      case Kind::Opaque: return "opaque";
    }
    return "?";
  };
  auto go = [&](auto&& self, const Term& t) -> std::size_t {
    if (auto it = by_ptr.find(t.id()); it != by_ptr.end()) return it->second;
    if (auto it = ids.find(t); it != ids.end()) return by_ptr[t.id()] = it->second;
    std::vector<std::size_t> kids;
    for (const auto& c : t.children()) kids.push_back(self(self, c));
    std::size_t id = nodes.size();
    nlohmann::json n;
    n["id"] = id;
    n["kind"] = kind_name(t.kind());
    if (t.kind() == Kind::Var || t.kind() == Kind::Const || t.kind() == Kind::Opaque) n["name"] = t.name();
    if (!kids.empty()) n["children"] = kids;
    nodes.push_back(std::move(n));
    ids.emplace(t, id);
    by_ptr[t.id()] = id;
    return id;
  };
  nlohmann::json r = nlohmann::json::array();
  for (const auto& [label, t] : roots) r.push_back({{"label", label}, {"node", go(go, t)}});
  return {{"nodes", nodes}, {"roots", r}};
}

// ---- β ↦ β* ------------------------------------------------------------

QuasiIdentity word_problem_instance(const GroupPresentation& P, const Word& w) {
  P.validate();
  QuasiIdentity q;
  q.vars = P.generators.size();
  for (const auto& r : P.relators) q.antecedent.emplace_back(r, Word{});
  q.lhs = w;
  return q;
}

namespace {

std::vector<std::string> beta_generators(int n, const TowerPresentation& T) {
  std::vector<std::string> gens;
  for (int i = 1; i <= n; ++i) gens.push_back("s" + std::to_string(i));
  for (const auto& g : T.presentation.generators()) gens.push_back(g);
  return gens;
}

}  // namespace

TermPack opaque_beta_pack(int n) {
  TowerPresentation T = tower_presentation(TowerKind::Omega, n);
  auto gens = beta_generators(n, T);
  TermPack P;
  for (const auto& g : gens) {
    P.set_opaque("t." + g, T.economy);
    P.set_opaque("u." + g, gens);
  }
  return P;
}

TermPack identity_u_pack(int n) {
  TowerPresentation T = tower_presentation(TowerKind::Omega, n);
  auto gens = beta_generators(n, T);
  TermPack P;
  for (const auto& g : gens) P.set_concrete("u." + g, gens, V(g));
  return P;
}

BetaStar compile_beta_star(const QuasiIdentity& beta, const TermPack& pack_in, int n) {
  if (n < 1) throw Error("beta* needs n >= 1");
  if (beta.vars != std::size_t(n))
    throw Error("quasi-identity has " + std::to_string(beta.vars) + " variables but the tower has n = " +
                std::to_string(n));
  auto check_word = [&](const Word& w) {
    for (const auto& l : w)
      if (l.gen >= beta.vars) throw Error("quasi-identity letter outside its variables");
  };
  for (const auto& [l, r] : beta.antecedent) {
    check_word(l);
    check_word(r);
  }
  check_word(beta.lhs);
  check_word(beta.rhs);

  TowerPresentation T = tower_presentation(TowerKind::Omega, n);
  BetaStar out;
  out.n = n;
  out.variables = T.economy;
  out.generators = beta_generators(n, T);
  TermPack pack = opaque_beta_pack(n);
  pack.merge(pack_in);

  std::vector<Term> xs, ts, us;
  for (const auto& v : out.variables) xs.push_back(V(v));
  for (const auto& g : out.generators) ts.push_back(pack.apply("t." + g, xs));
  for (const auto& g : out.generators) us.push_back(pack.apply("u." + g, ts));

  SymbolicOracle S;
  Assignment<Term> A;
  for (std::size_t i = 0; i < out.generators.size(); ++i) A[out.generators[i]] = us[i];
  TowerConfig<Term> tower = tower_from_omega<Term>(S, n, A);
  TermPack coords = coordinate_pack(tower.levels.back().outer);
  if (pack.has("inv")) coords.merge([&] {
    TermPack q;
    const Slot& s = pack.slot("inv");
    if (s.concrete()) q.set_concrete("inv", s.params, *s.body, true);
    else q.set_opaque("inv", s.params);
    return q;
  }());
  std::vector<Term> group_vals(us.begin(), us.begin() + n);
  out.lhs = word_to_term(beta.lhs, coords, group_vals);
  out.rhs = word_to_term(beta.rhs, coords, group_vals);

  bool all_concrete = true;
  for (const auto& g : out.generators)
    if (!pack.concrete("t." + g) || !pack.concrete("u." + g)) all_concrete = false;
  if (!beta.antecedent.empty())
    out.deferred.push_back(all_concrete
                               ? "presentation implies the translated antecedent under u: not checked"
                               : "presentation implies the translated antecedent under u: deferred to term pack");
  if (!all_concrete) out.deferred.push_back("t and u slots opaque: identity emitted symbolically only");
  for (const auto& k : opaque_kinds(out.lhs + out.rhs))
    if (k == "inv") out.deferred.push_back("inverse slot opaque: resolved only by search in finite hosts");
  out.dag = term_dag({{"lhs", out.lhs}, {"rhs", out.rhs}});
  out.dag["variables"] = out.variables;
  return out;
}

// ---- iterated reduction ------------------------------------------------

ReductionPlan build_plan(const GroupPresentation& P, const TermPack& pack_in) {
  P.validate();
  ReductionPlan plan;
  plan.group = P;
  plan.n = int(P.generators.size());
  plan.h = int(P.relators.size());
  plan.mu = plan.n + plan.h;
  if (plan.n < 1) throw Error("plan needs at least one generator");
  TermPack pack = opaque_reduction_pack();
  pack.merge(pack_in);

  SymbolicOracle S;
  TowerPresentation TP = tower_presentation(TowerKind::Omega, plan.n);
  Assignment<Term> A;
  for (const auto& g : TP.presentation.generators()) A[g] = C(g);
  TowerConfig<Term> tower = tower_from_omega<Term>(S, plan.n, A);
  std::vector<Term> stable;
  const std::string phi = "phi(a_m) = phi(a)";

  auto deferred_if_opaque = [&](PlanStage& st, const std::string& slot, const std::string& what) {
    if (!pack.concrete(slot)) {
      std::string d = "stage " + std::to_string(st.m) + ": " + what + ": deferred to term pack";
      st.obligations.push_back(d);
      plan.deferred.push_back(d);
    } else {
      st.obligations.push_back(what);
    }
  };

  for (int m = 1; m <= plan.mu; ++m) {
    PlanStage st;
    st.m = m;
    st.obligations.push_back(phi);
    if (m <= plan.n) {
      st.kind = StageCase::LowerReduction;
      st.level = m;
      st.slots = {"b*", "d*", "g+"};
      const auto args = skew_args(tower.levels[std::size_t(m - 1)]);
      const Term b = pack.apply("b*", args), d = pack.apply("d*", args);
      deferred_if_opaque(st, "b*", "a_bot <= b* <= a'_1 <= d* <= a_1 with the reduced skew frame of characteristic p x p");
      tower = tower_reduce_setup(S, tower, std::size_t(m), b, d);
      const auto& top = tower.levels.back().outer;
      for (auto& s : stable) s = (s * top.top) + top.bot;
      const Term g = pack.apply("g+", skew_args(tower.levels[std::size_t(m - 1)])) + top.bot;
      stable.push_back(g);
      deferred_if_opaque(st, "g+", "s_mm = g+(level m) + bot(level n) is 3-stable for the outer 4-frame of level n");
      st.notes.push_back("lower reduction at level " + std::to_string(m) + " with b = b*, d = d*");
      st.terms = {{"b", b}, {"d", d}, {"s" + std::to_string(m) + std::to_string(m), g}};
    } else {
      st.kind = StageCase::UpperReduction;
      st.level = plan.n;
      st.slots = {"f*"};
      const int j = m - plan.n;
      const Term b = pack.apply("f*", skew_args(tower.levels.back()));
      tower = tower_reduce_upper(S, tower, std::size_t(plan.n), b);
      for (auto& s : stable) s = s + tower.levels.back().outer.bot;
      TermPack coords = coordinate_pack(tower.levels.back().outer);
      const Term w = word_to_term(P.relators[std::size_t(j - 1)], coords, stable);
      deferred_if_opaque(st, "f*", "beta_b forces w_" + std::to_string(j) + "(s) = c'13 of level n");
      st.notes.push_back("upper reduction at level " + std::to_string(plan.n) + " with b = f*");
      st.terms = {{"b", b}, {"w" + std::to_string(j), w}, {"c'13", coords.apply("one", {})}};
    }
    plan.stages.push_back(std::move(st));
  }
  return plan;
}

nlohmann::json to_json(const ReductionPlan& plan) {
  nlohmann::json j;
  j["group"] = to_json(plan.group);
  j["n"] = plan.n;
  j["h"] = plan.h;
  j["mu"] = plan.mu;
  j["stages"] = nlohmann::json::array();
  for (const auto& st : plan.stages) {
    nlohmann::json s;
    s["m"] = st.m;
    s["case"] = int(st.kind);
    s["reduction"] = st.kind == StageCase::LowerReduction ? "lower" : "upper";
    s["level"] = st.level;
    s["slots"] = st.slots;
    s["obligations"] = st.obligations;
    s["notes"] = st.notes;
    s["dag"] = term_dag(st.terms);
    j["stages"].push_back(std::move(s));
  }
  j["deferred"] = plan.deferred;
  return j;
}

}  // namespace modlat
