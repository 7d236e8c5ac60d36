#include "modlat/tower_presentation.hpp"

namespace modlat {

namespace {

Term C(const std::string& s) { return Term::constant(s); }

Relation leq_rel(const Term& x, const Term& y) { return {x + y, y}; }

}  // namespace

FrameSymbols frame_symbols(int n, const std::string& suffix) {
  if (n < 2) throw Error("frames need n >= 2");
  FrameSymbols F;
  F.bot = "bot" + suffix;
  for (int i = 1; i <= n; ++i) F.a.push_back("a" + std::to_string(i) + suffix);
  for (int j = 2; j <= n; ++j) F.c1.push_back("c1" + std::to_string(j) + suffix);
  return F;
}

std::vector<Relation> frame_relations(const FrameSymbols& F) {
  std::vector<Relation> out;
  const Term bot = C(F.bot), a1 = C(F.a[0]);
  for (int j = 2; j <= F.n(); ++j) {
    std::vector<Term> below;
    for (int i = 1; i < j; ++i) below.push_back(C(F.a[std::size_t(i - 1)]));
    out.emplace_back(bot, C(F.a[std::size_t(j - 1)]) * sum(below));
  }
  for (int j = 2; j <= F.n(); ++j) {
    const Term aj = C(F.a[std::size_t(j - 1)]), c = C(F.c1[std::size_t(j - 2)]);
    out.emplace_back(bot, a1 * c);
    out.emplace_back(bot, aj * c);
  }
  for (int j = 2; j <= F.n(); ++j) {
    const Term aj = C(F.a[std::size_t(j - 1)]), c = C(F.c1[std::size_t(j - 2)]);
    out.emplace_back(a1 + aj, a1 + c);
    out.emplace_back(a1 + aj, aj + c);
  }
  return out;
}

Presentation frame_presentation(int n) {
  FrameSymbols F = frame_symbols(n);
  std::vector<std::string> gens{F.bot};
  gens.insert(gens.end(), F.a.begin(), F.a.end());
  gens.insert(gens.end(), F.c1.begin(), F.c1.end());
  return Presentation("frame" + std::to_string(n), gens, frame_relations(F));
}

std::vector<Relation> nearrow_relations(const std::vector<Term>& xs, const std::vector<Term>& ys) {
  if (xs.size() != ys.size() || xs.empty()) throw Error("nearrow: tuple lengths differ");
  const Term py = prod(ys), sx = sum(xs);
  std::vector<Relation> out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out.emplace_back(ys[i], xs[i] + py);
    out.emplace_back(xs[i], ys[i] * sx);
  }
  return out;
}

Substitution frame_setup(const FrameSymbols& F, const Term& x, const Term& y) {
  std::vector<Term> lo{x}, hi{y};
  for (int j = 2; j <= F.n(); ++j) {
    const Term aj = C(F.a[std::size_t(j - 1)]), c = C(F.c1[std::size_t(j - 2)]);
    lo.push_back(aj * (x + c));
    hi.push_back(aj * (y + c));
  }
  const Term abot = sum(lo), atop = sum(hi);
  Substitution S;
  S[F.bot] = abot;
  for (const auto& s : F.a) S[s] = C(s) * atop + abot;
  for (const auto& s : F.c1) S[s] = C(s) * atop + abot;
  return S;
}

std::string tsym(const std::string& base, int k) { return base + "_" + std::to_string(k); }

FrameSymbols delta_level(int k) { return frame_symbols(2, "_" + std::to_string(k)); }

Substitution delta_setup(int n, const Term& x, const Term& y) {
  if (n < 1) throw Error("towers need n >= 1");
  Substitution S;
  for (int k = 1; k <= n; ++k) {
    const Term bot = C(tsym("bot", k));
    for (auto& [s, t] : frame_setup(delta_level(k), x + bot, y + bot)) S[s] = t;
  }
  return S;
}

namespace {

FrameSymbols phi13() { return FrameSymbols{"bot_1", {"a1_1", "a3_1"}, {"c13_1"}}; }

// Shared pieces of the Δ(3,n) reduction at (x, y).
struct Delta3Parts {
  Substitution delta;  // Δ(n)(x, y)
  Substitution phi;    // 2-frame (bot_1, a1_1, a3_1, c13_1) reduced at (x, y)
  Term u1;             // a2_n · Δ(n)(x, y)[bot_1]
  Term v1;             // a3_1 (x + c13_1)
};

Delta3Parts delta3_parts(int n, const Term& x, const Term& y) {
  Delta3Parts P;
  P.delta = delta_setup(n, x, y);
  P.phi = frame_setup(phi13(), x, y);
  P.u1 = C(tsym("a2", n)) * P.delta.at("bot_1");
  P.v1 = C("a3_1") * (x + C("c13_1"));
  return P;
}

}  // namespace

Substitution delta3_setup(int n, const Term& x, const Term& y) {
  Delta3Parts P = delta3_parts(n, x, y);
  Substitution S;
  for (const auto& [s, t] : P.delta) S[s] = P.v1 + t;
  S["a3_1"] = P.u1 + P.phi.at("a3_1");
  S["c13_1"] = P.u1 + P.phi.at("c13_1");
  return S;
}

std::string to_string(TowerKind k) {
  switch (k) {
    case TowerKind::Delta: return "Delta";
    case TowerKind::Delta3: return "Delta3";
    case TowerKind::Omega: return "Omega";
  }
  return "?";
}

namespace {

std::vector<Term> level_tuple(int k, bool top) {
  // (a⊤_k, a2_k) or (a1_k, bot_k)
  if (top) return {C(tsym("a1", k)) + C(tsym("a2", k)), C(tsym("a2", k))};
  return {C(tsym("a1", k)), C(tsym("bot", k))};
}

Presentation delta_presentation(int n) {
  std::vector<std::string> gens;
  std::vector<Relation> rels;
  for (int k = 1; k <= n; ++k) {
    FrameSymbols F = delta_level(k);
    gens.insert(gens.end(), {F.bot, F.a[0], F.a[1], F.c1[0]});
    for (auto& r : frame_relations(F)) rels.push_back(std::move(r));
  }
  for (int k = 1; k < n; ++k)
    for (auto& r : nearrow_relations(level_tuple(k, true), level_tuple(k + 1, false))) rels.push_back(std::move(r));
  return Presentation("Delta(" + std::to_string(n) + ")", gens, rels);
}

// Product with the chain bot_1 <= sym, plus a free generator.
Presentation extend(const Presentation& P, const std::string& chain_sym, const std::string& free_sym,
                    const std::string& id) {
  Presentation chain("chain", {"bot_1", chain_sym}, {leq_rel(C("bot_1"), C(chain_sym))});
  Presentation prod = product_presentation(P, chain, "bot_1");
  std::vector<std::string> gens = prod.generators();
  gens.push_back(free_sym);
  return Presentation(id, gens, prod.relations());
}

Presentation delta3_presentation(const Presentation& delta, int n, LogVariant variant) {
  Presentation P = extend(delta, "a3_1", "c13_1", "Delta(3," + std::to_string(n) + ")");
  const Term bot = C("bot_1"), a1 = C("a1_1"), a3 = C("a3_1"), c13 = C("c13_1");
  P = apply_strengthening(P, {{"c13_1", (c13 + bot) * (a1 + a3)}}, {leq_rel(bot, c13), leq_rel(c13, a1 + a3)},
                          "c13_1 := (c13_1 + bot_1)(a1_1 + a3_1)");
  const Term b = a1 * c13, d = a1 * (c13 + a3);
  std::vector<std::pair<std::string, Term>> as;
  std::string note;
  if (variant == LogVariant::Coherent) {
    for (auto& [s, t] : delta3_setup(n, b, d)) as.emplace_back(s, t);
    note = "b = a1_1 c13_1, d = a1_1(c13_1 + a3_1); Delta(3,n) := Delta(3,n)(b, d)";
  } else {
    Delta3Parts Q = delta3_parts(n, b, d);
    const Term v1 = a3 * c13, w1 = b, base = Q.u1 + w1 + v1;
    for (auto& [s, t] : Q.delta) as.emplace_back(s, v1 + t);
    as.emplace_back("a3_1", base + a3);
    as.emplace_back("c13_1", base + c13);
    note = "b = a1_1 c13_1, d = a1_1(c13_1 + a3_1); Delta(n) := v' + Delta(n)(b, d), a3_1 := u'+w'+v'+a3_1, "
           "c13_1 := u'+w'+v'+c13_1";
  }
  return apply_strengthening(P, std::move(as), frame_relations(phi13()), note);
}

Presentation omega_presentation(const Presentation& delta3, int n, LogVariant variant) {
  Presentation P = extend(delta3, "a4'_1", "c14'_1", "Omega(" + std::to_string(n) + ")");
  const Term bot = C("bot_1"), a1 = C("a1_1"), a4 = C("a4'_1"), c14 = C("c14'_1");
  P = apply_strengthening(P, {{"c14'_1", (c14 + bot) * (a1 + a4)}}, {leq_rel(bot, c14), leq_rel(c14, a1 + a4)},
                          "c14'_1 := (c14'_1 + bot_1)(a1_1 + a4'_1)");
  const Term b = a1 * c14, v = a4 * (a1 + c14), v1 = a4 * c14;
  Substitution R = delta3_setup(n, b, a1);
  // Bottom of Δ(3,n)(b, a1_1) is u' + w' with w' = b; u' = its part on the
  // a2_n + a3_1 side.
  const Term u1 = (C(tsym("a2", n)) + C("a3_1")) * R.at("bot_1");
  std::vector<std::pair<std::string, Term>> as;
  std::string note;
  if (variant == LogVariant::Coherent) {
    for (auto& [s, t] : R) as.emplace_back(s, v1 + t);
    as.emplace_back("c14'_1", c14 + u1);
    as.emplace_back("a4'_1", u1 + b + v);
    note = "b = a1_1 c14'_1, v = a4'_1(a1_1 + c14'_1), v' = a4'_1 c14'_1; Delta(3,n) := v' + Delta(3,n)(b, a1_1), "
           "c14'_1 := c14'_1 + u', a4'_1 := u' + b + v";
  } else {
    for (auto& [s, t] : R) as.emplace_back(s, t);
    as.emplace_back("c14'_1", c14 + u1);
    as.emplace_back("a4'_1", (a1 + u1 + v1) * (c14 + v + u1));
    note = "b = a1_1 c14'_1, v = a4'_1(a1_1 + c14'_1), v' = a4'_1 c14'_1; Delta(3,n) := Delta(3,n)(b, a1_1), "
           "c14'_1 := c14'_1 + u', a4'_1 := (a1_1 + u' + v')(c14'_1 + v + u')";
  }
  FrameSymbols two{"bot_1", {"a1'_1", "a4'_1"}, {"c14'_1"}};
  std::vector<Relation> rels;
  Substitution axis{{"a1'_1", a1 * (a4 + c14)}};
  for (const auto& [l, r] : frame_relations(two))
    rels.emplace_back(substitute(l, axis, true), substitute(r, axis, true));
  return apply_strengthening(P, std::move(as), std::move(rels), note);
}

}  // namespace

TowerPresentation tower_presentation(TowerKind kind, int n, LogVariant variant) {
  if (n < 1) throw Error("towers need n >= 1");
  TowerPresentation T{kind, n, {}, {}, {}};
  Presentation delta = delta_presentation(n);
  T.economy = {"a1_1", tsym("a2", n)};
  for (int k = 1; k <= n; ++k) T.economy.push_back(tsym("c12", k));
  if (kind == TowerKind::Delta) {
    T.presentation = delta;
    return T;
  }
  T.stages.push_back(delta);
  Presentation d3 = delta3_presentation(delta, n, variant);
  T.economy.insert(T.economy.end(), {"a3_1", "c13_1"});
  if (kind == TowerKind::Delta3) {
    T.presentation = d3;
    return T;
  }
  T.stages.push_back(d3);
  T.presentation = omega_presentation(d3, n, variant);
  T.economy.insert(T.economy.end(), {"a4'_1", "c14'_1"});
  return T;
}

}  // namespace modlat
