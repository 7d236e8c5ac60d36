#pragma once

#include <string>
#include <vector>

#include "modlat/oracle.hpp"
#include "modlat/presentation.hpp"
#include "modlat/tower.hpp"

namespace modlat {

// Symbols of an n-frame inside a presentation: bot, a[0..n-1] = a_1..a_n,
// c1[0..n-2] = c_12..c_1n.
struct FrameSymbols {
  std::string bot;
  std::vector<std::string> a;
  std::vector<std::string> c1;
  int n() const { return int(a.size()); }
};

// bot, a1..an, c12..c1n with empty suffix; "_k" style suffixes are appended.
FrameSymbols frame_symbols(int n, const std::string& suffix = "");

// The three defining relation groups, in order (1), (2), (3) for j = 2..n.
std::vector<Relation> frame_relations(const FrameSymbols& F);

// Generators a_⊥, a_1..a_n, c_12..c_1n and the frame relations.
Presentation frame_presentation(int n);

// x̄ ↗ ȳ as relations y_i = x_i + Πȳ and x_i = y_i Σx̄.
std::vector<Relation> nearrow_relations(const std::vector<Term>& xs, const std::vector<Term>& ys);

// Reduction setup for a frame: symbol -> ĉ(x, y), with a_⊥ ↦ a_⊥(x, y).
Substitution frame_setup(const FrameSymbols& F, const Term& x, const Term& y);

// Tower symbols: level k 2-frame (bot_k, a1_k, a2_k, c12_k); level-1 extras
// a3_1, c13_1, a4'_1, c14'_1.
std::string tsym(const std::string& base, int k);
FrameSymbols delta_level(int k);

// Δ(n)(x, y): union over levels of Φ^k(x + bot_k, y + bot_k).
Substitution delta_setup(int n, const Term& x, const Term& y);

// Δ(3,n)(x, y). Δ(n)(x, y) and the reduced 2-frame (bot_1, a1_1, a3_1,
// c13_1) are made to share their bottom: the Δ(n) part is raised by
// v' = a3_1(x + c13_1), the a3/c13 part by u' = a2_n·Δ(n)(x, y)[bot_1].
Substitution delta3_setup(int n, const Term& x, const Term& y);

enum class TowerKind { Delta, Delta3, Omega };

// Which spelling of the strengthening terms to emit. Printed follows the
// terms as written in the source construction; Coherent uses the
// reconstruction that passes the model checks (see README).
enum class LogVariant { Coherent, Printed };

struct TowerPresentation {
  TowerKind kind;
  int n;
  Presentation presentation;
  // Generating subset: a1_1, a2_n, c12_k (+ a3_1, c13_1 for Δ(3,n),
  // + a4'_1, c14'_1 for Ω).
  std::vector<std::string> economy;
  // Intermediate presentations (Δ(n), Δ(3,n)) the construction went through.
  std::vector<Presentation> stages;
};

TowerPresentation tower_presentation(TowerKind kind, int n, LogVariant variant = LogVariant::Coherent);

std::string to_string(TowerKind k);

// Evaluates a substitution (symbol -> term) under an assignment.
template <class H>
Assignment<H> eval_substitution(const LatticeOracle<H>& O, const Substitution& S, const Assignment<H>& A) {
  Assignment<H> out = A;
  for (const auto& [sym, t] : S) out[sym] = eval(O, t, A);
  return out;
}

// Applies every log entry's assignments in turn. Each entry is evaluated over
// the values produced by the previous ones.
template <class H>
Assignment<H> replay_assignments(const LatticeOracle<H>& O, const Presentation& P, Assignment<H> A,
                                 std::size_t first = 0) {
  for (std::size_t i = first; i < P.log().size(); ++i) {
    Substitution S;
    for (const auto& [sym, t] : P.log()[i].assignments) S[sym] = t;
    A = eval_substitution(O, S, A);
  }
  return A;
}

// Skew-frame tower read off a model of Ω(n): level k has the 3-frame
// (bot_k; a1_k, a2_k, bot_k + a3_1; c12_k, bot_k + c13_1) and the 4-frame
// whose first three axes are its lower reduction at bot_k + a1_1(a4'_1 +
// c14'_1), completed by bot_k + a4'_1 and bot_k + c14'_1.
template <class H>
TowerConfig<H> tower_from_omega(const LatticeOracle<H>& O, int n, const Assignment<H>& A) {
  auto g = [&](const std::string& base, int k) { return A.at(tsym(base, k)); };
  TowerConfig<H> T;
  const H a1p = O.meet(g("a1", 1), O.join(g("a4'", 1), g("c14'", 1)));
  for (int k = 1; k <= n; ++k) {
    const H bot = g("bot", k);
    SkewFrameConfig<H> S;
    S.inner = make_frame(O, bot, {g("a1", k), g("a2", k), O.join(bot, g("a3", 1))}, {g("c12", k), O.join(bot, g("c13", 1))});
    FrameConfig<H> low = upper_lower_reduce(O, S.inner, O.join(bot, a1p), Direction::Lower);
    S.outer = make_frame(O, bot, {low.ai(1), low.ai(2), low.ai(3), O.join(bot, g("a4'", 1))},
                         {low.cij(1, 2), low.cij(1, 3), O.join(bot, g("c14'", 1))});
    T.levels.push_back(std::move(S));
  }
  return T;
}

// Frame read off an assignment of frame symbols.
template <class H>
FrameConfig<H> frame_from(const LatticeOracle<H>& O, const FrameSymbols& F, const Assignment<H>& A) {
  std::vector<H> a, c1;
  for (const auto& s : F.a) a.push_back(A.at(s));
  for (const auto& s : F.c1) c1.push_back(A.at(s));
  return make_frame(O, A.at(F.bot), a, c1);
}

// Assignment of frame symbols to a frame configuration.
template <class H>
Assignment<H> frame_assignment(const FrameSymbols& F, const FrameConfig<H>& C) {
  Assignment<H> A;
  A[F.bot] = C.bot;
  for (int i = 1; i <= F.n(); ++i) A[F.a[std::size_t(i - 1)]] = C.ai(i);
  for (int j = 2; j <= F.n(); ++j) A[F.c1[std::size_t(j - 2)]] = C.cij(1, j);
  return A;
}

// reduce_frame through the setup terms instead of direct arithmetic.
template <class H>
FrameConfig<H> reduce_frame_terms(const LatticeOracle<H>& O, const FrameConfig<H>& C, const H& b, const H& d) {
  FrameSymbols F = frame_symbols(C.n);
  Assignment<H> A = frame_assignment(F, C);
  A["x"] = b;
  A["y"] = d;
  Substitution S = frame_setup(F, Term::constant("x"), Term::constant("y"));
  return frame_from(O, F, eval_substitution(O, S, A));
}

}  // namespace modlat
