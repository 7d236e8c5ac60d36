#pragma once

#include <optional>
#include <string>
#include <vector>

#include "modlat/oracle.hpp"

namespace modlat {

// n-frame in a host lattice. Indices are 1-based; a[0] and c[0][*] are
// unused. c[i][j] = c[j][i] is filled for all i != j (c_{1j} given, the rest
// derived as (a_i+a_j)(c_{1i}+c_{1j})).
template <class H>
struct FrameConfig {
  int n = 0;
  H bot;
  H top;
  std::vector<H> a;
  std::vector<std::vector<H>> c;

  const H& ai(int i) const { return i == 0 ? bot : a.at(std::size_t(i)); }
  const H& cij(int i, int j) const { return c.at(std::size_t(i)).at(std::size_t(j)); }
};

template <class H>
FrameConfig<H> make_frame(const LatticeOracle<H>& O, const H& bot, const std::vector<H>& a, const std::vector<H>& c1) {
  const int n = int(a.size());
  if (n < 2) throw Error("a frame needs at least two axes");
  if (c1.size() != a.size() - 1) throw Error("need c_{1j} for j = 2..n");
  FrameConfig<H> F;
  F.n = n;
  F.bot = bot;
  F.a.resize(std::size_t(n) + 1);
  F.a[0] = bot;
  for (int i = 1; i <= n; ++i) F.a[std::size_t(i)] = a[std::size_t(i - 1)];
  F.c.assign(std::size_t(n) + 1, std::vector<H>(std::size_t(n) + 1));
  for (int j = 2; j <= n; ++j) F.c[1][std::size_t(j)] = F.c[std::size_t(j)][1] = c1[std::size_t(j - 2)];
  for (int i = 2; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      H v = O.meet(O.join(F.a[std::size_t(i)], F.a[std::size_t(j)]), O.join(F.c[1][std::size_t(i)], F.c[1][std::size_t(j)]));
      F.c[std::size_t(i)][std::size_t(j)] = F.c[std::size_t(j)][std::size_t(i)] = v;
    }
  F.top = join_all(O, std::vector<H>(F.a.begin() + 1, F.a.end()));
  return F;
}

template <class H>
std::vector<H> c1_list(const FrameConfig<H>& F) {
  std::vector<H> out;
  for (int j = 2; j <= F.n; ++j) out.push_back(F.cij(1, j));
  return out;
}

template <class H>
std::vector<H> axes(const FrameConfig<H>& F) {
  return std::vector<H>(F.a.begin() + 1, F.a.end());
}

// All elements a_⊥, a_i, c_{ij} (i<j) in a fixed order.
template <class H>
std::vector<H> frame_elements(const FrameConfig<H>& F) {
  std::vector<H> out{F.bot};
  for (int i = 1; i <= F.n; ++i) out.push_back(F.ai(i));
  for (int i = 1; i <= F.n; ++i)
    for (int j = i + 1; j <= F.n; ++j) out.push_back(F.cij(i, j));
  return out;
}

template <class H>
bool same_frame(const LatticeOracle<H>& O, const FrameConfig<H>& A, const FrameConfig<H>& B) {
  if (A.n != B.n) return false;
  auto x = frame_elements(A), y = frame_elements(B);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!O.equal(x[i], y[i])) return false;
  return true;
}

// Defining relations: a_⊥ = a_j Σ_{i<j} a_i; a_⊥ = a_1 c_{1j} = a_j c_{1j};
// a_1+a_j = a_1+c_{1j} = a_j+c_{1j}.
template <class H>
std::optional<std::string> check_frame_relations(const LatticeOracle<H>& O, const FrameConfig<H>& F) {
  for (int j = 2; j <= F.n; ++j) {
    std::vector<H> below(F.a.begin() + 1, F.a.begin() + j);
    if (!O.equal(F.bot, O.meet(F.ai(j), join_all(O, below)))) return "(1) fails for j=" + std::to_string(j);
    const H& c = F.cij(1, j);
    if (!O.equal(F.bot, O.meet(F.ai(1), c)) || !O.equal(F.bot, O.meet(F.ai(j), c)))
      return "(2) fails for j=" + std::to_string(j);
    H s = O.join(F.ai(1), F.ai(j));
    if (!O.equal(s, O.join(F.ai(1), c)) || !O.equal(s, O.join(F.ai(j), c))) return "(3) fails for j=" + std::to_string(j);
  }
  return std::nullopt;
}

// Derived identities: sum-intersection over all index sets, a_i+c_{ij} =
// a_i+a_j, a_i c_{ij} = a_⊥, c_{ik} = (a_i+a_k)(c_{ij}+c_{jk}).
template <class H>
std::optional<std::string> check_derived(const LatticeOracle<H>& O, const FrameConfig<H>& F) {
  const int n = F.n;
  std::vector<H> sums(std::size_t(1) << n);
  for (unsigned I = 1; I < sums.size(); ++I) {
    std::vector<H> xs;
    for (int i = 0; i < n; ++i)
      if (I >> i & 1u) xs.push_back(F.ai(i + 1));
    sums[I] = join_all(O, xs);
  }
  for (unsigned I = 1; I < sums.size(); ++I)
    for (unsigned J = 1; J < sums.size(); ++J) {
      const H& want = (I & J) ? sums[I & J] : F.bot;
      if (!O.equal(O.meet(sums[I], sums[J]), want))
        return "sum-intersection fails for I=" + std::to_string(I) + " J=" + std::to_string(J);
    }
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      if (!O.equal(O.join(F.ai(i), F.cij(i, j)), O.join(F.ai(i), F.ai(j))))
        return "a_i+c_ij = a_i+a_j fails for i=" + std::to_string(i) + " j=" + std::to_string(j);
      if (!O.equal(O.meet(F.ai(i), F.cij(i, j)), F.bot))
        return "a_i c_ij = a_bot fails for i=" + std::to_string(i) + " j=" + std::to_string(j);
      for (int k = 1; k <= n; ++k) {
        if (k == i || k == j) continue;
        H rhs = O.meet(O.join(F.ai(i), F.ai(k)), O.join(F.cij(i, j), F.cij(j, k)));
        if (!O.equal(F.cij(i, k), rhs))
          return "c_ik = (a_i+a_k)(c_ij+c_jk) fails for i=" + std::to_string(i) + " j=" + std::to_string(j) +
                 " k=" + std::to_string(k);
      }
    }
  return std::nullopt;
}

template <class H>
std::optional<std::string> check_frame(const LatticeOracle<H>& O, const FrameConfig<H>& F) {
  if (auto f = check_frame_relations(O, F)) return f;
  return check_derived(O, F);
}

// π_kl(x) = (x + c_kl) Σ_{i≠l} a_i for x ≤ Σ_{i≠k} a_i.
template <class H>
H perspectivity(const LatticeOracle<H>& O, const FrameConfig<H>& F, int k, int l, const H& x) {
  if (k == l) throw Error("perspectivity needs distinct indices");
  std::vector<H> not_k, not_l;
  for (int i = 1; i <= F.n; ++i) {
    if (i != k) not_k.push_back(F.ai(i));
    if (i != l) not_l.push_back(F.ai(i));
  }
  if (!O.leq(x, join_all(O, not_k))) throw Error("perspectivity argument not below the k-face");
  return O.meet(O.join(x, F.cij(k, l)), join_all(O, not_l));
}

// Reduction Φ^b_d via a_⊥(x,y) = x + Σ_{j>1} a_j(x+c_{1j}),
// a_⊤(x,y) = y + Σ_{j>1} a_j(y+c_{1j}), ĉ = c·a_⊤ + a_⊥.
template <class H>
FrameConfig<H> reduce_frame(const LatticeOracle<H>& O, const FrameConfig<H>& F, const H& b, const H& d) {
  if (!O.leq(F.bot, b) || !O.leq(b, d) || !O.leq(d, F.ai(1)))
    throw Error("reduction needs a_bot <= b <= d <= a_1");
  H lo = b, hi = d;
  for (int j = 2; j <= F.n; ++j) {
    lo = O.join(lo, O.meet(F.ai(j), O.join(b, F.cij(1, j))));
    hi = O.join(hi, O.meet(F.ai(j), O.join(d, F.cij(1, j))));
  }
  auto hat = [&](const H& c) { return O.join(O.meet(c, hi), lo); };
  std::vector<H> a, c1;
  for (int i = 1; i <= F.n; ++i) a.push_back(hat(F.ai(i)));
  for (int j = 2; j <= F.n; ++j) c1.push_back(hat(F.cij(1, j)));
  return make_frame(O, lo, a, c1);
}

enum class Direction { Upper, Lower };

// Upper reduction Φ^{b_1} = (b, b+a_i, b+c_ij) or lower reduction
// Φ_{b_1} = (a_⊥, b_i, b_ij), with b_j = a_j(b_1+c_{1j}), b = Σ b_i and
// b_ij = (b_i+b_j)c_ij. Axis `i` selects the axis b_1 lives on.
template <class H>
FrameConfig<H> upper_lower_reduce(const LatticeOracle<H>& O, const FrameConfig<H>& F, const H& bi, Direction dir,
                                  int axis = 1) {
  if (!O.leq(F.bot, bi) || !O.leq(bi, F.ai(axis))) throw Error("reduction needs a_bot <= b_i <= a_i");
  H b1 = axis == 1 ? bi : O.meet(F.ai(1), O.join(bi, F.cij(1, axis)));
  std::vector<H> bs(std::size_t(F.n) + 1);
  bs[1] = b1;
  for (int j = 2; j <= F.n; ++j) bs[std::size_t(j)] = O.meet(F.ai(j), O.join(b1, F.cij(1, j)));
  if (dir == Direction::Upper) {
    H b = join_all(O, std::vector<H>(bs.begin() + 1, bs.end()));
    std::vector<H> a, c1;
    for (int i = 1; i <= F.n; ++i) a.push_back(O.join(b, F.ai(i)));
    for (int j = 2; j <= F.n; ++j) c1.push_back(O.join(b, F.cij(1, j)));
    return make_frame(O, b, a, c1);
  }
  std::vector<H> a(bs.begin() + 1, bs.end()), c1;
  for (int j = 2; j <= F.n; ++j) c1.push_back(O.meet(O.join(bs[1], bs[std::size_t(j)]), F.cij(1, j)));
  return make_frame(O, F.bot, a, c1);
}

// Lower reduction with every c_ij given as (b_i+b_j)c_ij, for comparison
// against the derived c_ij of the reduced frame.
template <class H>
std::vector<std::vector<H>> lower_reduction_cij(const LatticeOracle<H>& O, const FrameConfig<H>& F, const H& b1) {
  std::vector<H> bs(std::size_t(F.n) + 1);
  bs[1] = b1;
  for (int j = 2; j <= F.n; ++j) bs[std::size_t(j)] = O.meet(F.ai(j), O.join(b1, F.cij(1, j)));
  std::vector<std::vector<H>> out(std::size_t(F.n) + 1, std::vector<H>(std::size_t(F.n) + 1));
  for (int i = 1; i <= F.n; ++i)
    for (int j = 1; j <= F.n; ++j)
      if (i != j) out[std::size_t(i)][std::size_t(j)] = O.meet(O.join(bs[std::size_t(i)], bs[std::size_t(j)]), F.cij(i, j));
  return out;
}

template <class H>
struct StabilityResult {
  bool stable = false;
  // Empty when a boundary condition failed.
  std::optional<H> failing_b1;
  std::string reason;
};

// s is j-stable: s a_1 = s a_j = a_⊥, s+a_1 = s+a_j = a_1+a_j, and for all
// b_1 in [a_⊥, a_1] (given as `interval`), s+b_1 = s+a_j(b_1+c_{1j}). The
// first failing b_1 in interval order is reported.
template <class H>
StabilityResult<H> is_j_stable(const LatticeOracle<H>& O, const FrameConfig<H>& F, const H& s, int j,
                               const std::vector<H>& interval, const SearchOptions& opts = {}) {
  StabilityResult<H> r;
  if (j < 2 || j > F.n) throw Error("stability index out of range");
  if (!O.equal(O.meet(s, F.ai(1)), F.bot) || !O.equal(O.meet(s, F.ai(j)), F.bot)) {
    r.reason = "meet boundary condition";
    return r;
  }
  H s1j = O.join(F.ai(1), F.ai(j));
  if (!O.equal(O.join(s, F.ai(1)), s1j) || !O.equal(O.join(s, F.ai(j)), s1j)) {
    r.reason = "join boundary condition";
    return r;
  }
  const std::int64_t m = std::int64_t(interval.size());
  std::int64_t first = m;
#pragma omp parallel for schedule(dynamic, 4) num_threads(opts.jobs > 0 ? opts.jobs : 1) if (opts.jobs > 1) reduction(min : first)
  for (std::int64_t k = 0; k < m; ++k) {
    if (k > first) continue;
    const H& b1 = interval[std::size_t(k)];
    H bj = O.meet(F.ai(j), O.join(b1, F.cij(1, j)));
    if (!O.equal(O.join(s, b1), O.join(s, bj))) first = std::min(first, k);
  }
  if (first < m) {
    r.failing_b1 = interval[std::size_t(first)];
    r.reason = "s+b_1 != s+b_j";
    return r;
  }
  r.stable = true;
  return r;
}

}  // namespace modlat
