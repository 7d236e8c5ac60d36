#pragma once

#include <optional>
#include <string>
#include <vector>

#include "modlat/frames.hpp"

namespace modlat {

// Skew (n+1,n)-frame: an n-frame `inner` and an (n+1)-frame `outer` sharing
// a_⊥, where outer without axis n+1 is the lower reduction of inner at a'_1.
template <class H>
struct SkewFrameConfig {
  FrameConfig<H> outer;
  FrameConfig<H> inner;
};

template <class H>
struct TowerConfig {
  std::vector<SkewFrameConfig<H>> levels;
};

// Frame with axis k removed (axes renumbered in order).
template <class H>
FrameConfig<H> drop_axis(const LatticeOracle<H>& O, const FrameConfig<H>& F, int k) {
  std::vector<int> keep;
  for (int i = 1; i <= F.n; ++i)
    if (i != k) keep.push_back(i);
  std::vector<H> a, c1;
  for (int i : keep) a.push_back(F.ai(i));
  for (std::size_t t = 1; t < keep.size(); ++t) c1.push_back(F.cij(keep[0], keep[t]));
  FrameConfig<H> G = make_frame(O, F.bot, a, c1);
  // Keep the original c_ij rather than re-deriving them.
  for (std::size_t s = 0; s < keep.size(); ++s)
    for (std::size_t t = 0; t < keep.size(); ++t)
      if (s != t) G.c[s + 1][t + 1] = F.cij(keep[s], keep[t]);
  return G;
}

template <class H>
std::optional<std::string> check_skew_frame(const LatticeOracle<H>& O, const SkewFrameConfig<H>& S) {
  const int n = S.inner.n;
  if (S.outer.n != n + 1) return std::string("outer frame must have one more axis");
  if (auto f = check_frame(O, S.inner)) return "inner frame: " + *f;
  if (auto f = check_frame(O, S.outer)) return "outer frame: " + *f;
  if (!O.equal(S.inner.bot, S.outer.bot)) return std::string("bottoms differ");
  FrameConfig<H> low = upper_lower_reduce(O, S.inner, S.outer.ai(1), Direction::Lower);
  FrameConfig<H> face = drop_axis(O, S.outer, n + 1);
  if (!same_frame(O, low, face)) return std::string("outer face is not the lower reduction at a'_1");
  // (a_⊥, a_1(a'_{n+1}+c'_{1,n+1}), a'_{n+1}, c'_{1,n+1}) is a 2-frame.
  const H& an = S.outer.ai(n + 1);
  const H& cn = S.outer.cij(1, n + 1);
  FrameConfig<H> two = make_frame(O, S.inner.bot, {O.meet(S.inner.ai(1), O.join(an, cn)), an}, {cn});
  if (auto f = check_frame_relations(O, two)) return "2-frame condition: " + *f;
  return std::nullopt;
}

// Ψ_(3,2) of a skew (4,3)-frame: the elements not involving index 2, in the
// order a_⊥, a_1, a_3, c_13, a'_1, a'_3, a'_4, c'_13, c'_14, c'_34.
template <class H>
std::vector<H> psi32(const SkewFrameConfig<H>& S) {
  const auto& I = S.inner;
  const auto& X = S.outer;
  return {I.bot, I.ai(1), I.ai(3), I.cij(1, 3), X.ai(1), X.ai(3), X.ai(4), X.cij(1, 3), X.cij(1, 4), X.cij(3, 4)};
}

// Ψ^(3,2) = a_2 + Ψ_(3,2).
template <class H>
std::vector<H> psi32_up(const LatticeOracle<H>& O, const SkewFrameConfig<H>& S) {
  std::vector<H> out;
  for (const auto& x : psi32(S)) out.push_back(O.join(S.inner.ai(2), x));
  return out;
}

// Per-level skew frame checks plus Ψ^k_(3,2) ↗ (Ψ^k)^(3,2) ↗ Ψ^l_(3,2) for
// all k < l.
template <class H>
std::optional<std::string> check_tower(const LatticeOracle<H>& O, const TowerConfig<H>& T) {
  const std::size_t n = T.levels.size();
  for (std::size_t k = 0; k < n; ++k) {
    const auto& S = T.levels[k];
    if (S.inner.n != 3 || S.outer.n != 4) return "level " + std::to_string(k + 1) + ": not a skew (4,3)-frame";
    if (auto f = check_skew_frame(O, S)) return "level " + std::to_string(k + 1) + ": " + *f;
    if (!check_nearrow(O, psi32(S), psi32_up(O, S)))
      return "level " + std::to_string(k + 1) + ": Psi_(3,2) does not transpose up to Psi^(3,2)";
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = k + 1; l < n; ++l)
      if (!check_nearrow(O, psi32_up(O, T.levels[k]), psi32(T.levels[l])))
        return "levels " + std::to_string(k + 1) + "," + std::to_string(l + 1) + ": (Psi^k)^(3,2) does not transpose up to Psi^l_(3,2)";
  return std::nullopt;
}

template <class H>
SkewFrameConfig<H> skew_lower(const LatticeOracle<H>& O, const SkewFrameConfig<H>& S, const H& b, const H& d) {
  return {upper_lower_reduce(O, S.outer, b, Direction::Lower), upper_lower_reduce(O, S.inner, d, Direction::Lower)};
}

template <class H>
SkewFrameConfig<H> skew_upper(const LatticeOracle<H>& O, const SkewFrameConfig<H>& S, const H& b) {
  return {upper_lower_reduce(O, S.outer, b, Direction::Upper), upper_lower_reduce(O, S.inner, b, Direction::Upper)};
}

// Lower reduction Ω_{b,d} at level m (1-based): levels k<m use a^k_1 b and
// a^k_1 d, level m uses b and d, levels k>m use b+a^k_⊥ and d+a^k_⊥.
// Requires a^m_⊥ <= b <= a'^m_1 <= d <= a^m_1.
template <class H>
TowerConfig<H> tower_reduce_lower(const LatticeOracle<H>& O, const TowerConfig<H>& T, std::size_t m, const H& b,
                                  const H& d) {
  if (m < 1 || m > T.levels.size()) throw Error("tower level out of range");
  const auto& S = T.levels[m - 1];
  if (!O.leq(S.inner.bot, b) || !O.leq(b, S.outer.ai(1)) || !O.leq(S.outer.ai(1), d) || !O.leq(d, S.inner.ai(1)))
    throw Error("lower tower reduction needs a_bot <= b <= a'_1 <= d <= a_1 at level m");
  TowerConfig<H> out;
  for (std::size_t k = 1; k <= T.levels.size(); ++k) {
    const auto& L = T.levels[k - 1];
    if (k < m) out.levels.push_back(skew_lower(O, L, O.meet(L.inner.ai(1), b), O.meet(L.inner.ai(1), d)));
    else if (k == m) out.levels.push_back(skew_lower(O, L, b, d));
    else out.levels.push_back(skew_lower(O, L, O.join(b, L.inner.bot), O.join(d, L.inner.bot)));
  }
  return out;
}

// Upper reduction Ω^b at level m; requires a^m_⊥ <= b <= a'^m_1.
template <class H>
TowerConfig<H> tower_reduce_upper(const LatticeOracle<H>& O, const TowerConfig<H>& T, std::size_t m, const H& b) {
  if (m < 1 || m > T.levels.size()) throw Error("tower level out of range");
  const auto& S = T.levels[m - 1];
  if (!O.leq(S.inner.bot, b) || !O.leq(b, S.outer.ai(1)))
    throw Error("upper tower reduction needs a_bot <= b <= a'_1 at level m");
  TowerConfig<H> out;
  for (std::size_t k = 1; k <= T.levels.size(); ++k) {
    const auto& L = T.levels[k - 1];
    if (k < m) out.levels.push_back(skew_upper(O, L, O.meet(L.inner.ai(1), b)));
    else if (k == m) out.levels.push_back(skew_upper(O, L, b));
    else out.levels.push_back(skew_upper(O, L, O.join(b, L.inner.bot)));
  }
  return out;
}

// Sub-quotient reading of Ψ_{b,d}: Φ' and Φ reduced as Φ'^b_{a'_1 d} and Φ^b_d.
// The identity at (a_⊥, a_1); for b > a_⊥ the two bottoms can separate, so
// callers re-check the result.
template <class H>
SkewFrameConfig<H> skew_setup(const LatticeOracle<H>& O, const SkewFrameConfig<H>& S, const H& b, const H& d) {
  return {reduce_frame(O, S.outer, b, O.meet(S.outer.ai(1), d)), reduce_frame(O, S.inner, b, d)};
}

// tower_reduce_lower with skew_setup in place of skew_lower at every level.
template <class H>
TowerConfig<H> tower_reduce_setup(const LatticeOracle<H>& O, const TowerConfig<H>& T, std::size_t m, const H& b,
                                  const H& d) {
  if (m < 1 || m > T.levels.size()) throw Error("tower level out of range");
  const auto& S = T.levels[m - 1];
  if (!O.leq(S.inner.bot, b) || !O.leq(b, S.outer.ai(1)) || !O.leq(S.outer.ai(1), d) || !O.leq(d, S.inner.ai(1)))
    throw Error("tower reduction needs a_bot <= b <= a'_1 <= d <= a_1 at level m");
  TowerConfig<H> out;
  for (std::size_t k = 1; k <= T.levels.size(); ++k) {
    const auto& L = T.levels[k - 1];
    if (k < m) out.levels.push_back(skew_setup(O, L, O.meet(L.inner.ai(1), b), O.meet(L.inner.ai(1), d)));
    else if (k == m) out.levels.push_back(skew_setup(O, L, b, d));
    else out.levels.push_back(skew_setup(O, L, O.join(b, L.inner.bot), O.join(d, L.inner.bot)));
  }
  return out;
}

template <class H>
std::vector<H> tower_elements(const TowerConfig<H>& T) {
  std::vector<H> out;
  for (const auto& L : T.levels) {
    for (const auto& x : frame_elements(L.outer)) out.push_back(x);
    for (const auto& x : frame_elements(L.inner)) out.push_back(x);
  }
  return out;
}

template <class H>
bool same_tower(const LatticeOracle<H>& O, const TowerConfig<H>& A, const TowerConfig<H>& B) {
  auto x = tower_elements(A), y = tower_elements(B);
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!O.equal(x[i], y[i])) return false;
  return true;
}

}  // namespace modlat
