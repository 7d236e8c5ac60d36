#include "modlat/glueing.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace modlat {

namespace {

constexpr std::int32_t kNone = -1;
using PartialMap = std::vector<std::int32_t>;

std::string lbl(const FiniteLattice& L, Elem a) {
  return L.label(a).empty() ? std::to_string(a) : L.label(a);
}

// Cover-indexed view of a spec with the glue maps as partial functions.
struct Glue {
  const GluedSumSpec& spec;
  const FiniteLattice& S;
  std::map<std::pair<Elem, Elem>, std::size_t> index;
  std::vector<PartialMap> fwd, bwd;
  std::vector<Elem> dom_min, img_max;
  std::vector<std::vector<Elem>> lower;  // lower covers per skeleton element

  explicit Glue(const GluedSumSpec& s) : spec(s), S(s.skeleton) {
    const std::size_t n = S.size();
    if (n == 0) throw Error("skeleton is empty");
    if (spec.components.size() != n)
      throw Error("need one component per skeleton element (" + std::to_string(n) + "), got " +
                  std::to_string(spec.components.size()));
    for (std::size_t x = 0; x < n; ++x)
      if (spec.components[x].size() == 0) throw Error("component " + lbl(S, Elem(x)) + " is empty");
    lower.assign(n, {});
    std::set<std::pair<Elem, Elem>> covers;
    for (Elem x = 0; x < n; ++x)
      for (Elem y : S.covers(x)) {
        covers.insert({x, y});
        lower[y].push_back(x);
      }
    for (std::size_t g = 0; g < spec.glue.size(); ++g) {
      const auto& m = spec.glue[g];
      if (m.x >= n || m.y >= n) throw Error("glue map references a skeleton element out of range");
      if (!covers.count({m.x, m.y}))
        throw Error("glue map " + lbl(S, m.x) + " -> " + lbl(S, m.y) + " is not on a covering pair");
      if (!index.emplace(std::make_pair(m.x, m.y), g).second)
        throw Error("two glue maps for " + lbl(S, m.x) + " ≺ " + lbl(S, m.y));
    }
    for (const auto& [x, y] : covers)
      if (!index.count({x, y})) throw Error("missing glue map for " + lbl(S, x) + " ≺ " + lbl(S, y));
    fwd.resize(spec.glue.size());
    bwd.resize(spec.glue.size());
    dom_min.resize(spec.glue.size());
    img_max.resize(spec.glue.size());
    for (std::size_t g = 0; g < spec.glue.size(); ++g) validate(g);
  }

  std::size_t id(Elem x, Elem y) const { return index.at({x, y}); }

  void validate(std::size_t g) {
    const auto& m = spec.glue[g];
    const FiniteLattice &Lx = spec.components[m.x], &Ly = spec.components[m.y];
    const std::string where = " in glue map " + lbl(S, m.x) + " ≺ " + lbl(S, m.y);
    PartialMap f(Lx.size(), kNone), b(Ly.size(), kNone);
    if (m.pairs.empty()) throw Error("empty glue map" + where);
    for (auto [a, c] : m.pairs) {
      if (a >= Lx.size() || c >= Ly.size()) throw Error("element out of range" + where);
      if (f[a] != kNone) throw Error("element " + lbl(Lx, a) + " mapped twice" + where);
      if (b[c] != kNone) throw Error("not injective: " + lbl(Ly, c) + " hit twice" + where);
      f[a] = std::int32_t(c);
      b[c] = std::int32_t(a);
    }
    Elem lo = m.pairs[0].first, hi = m.pairs[0].second;
    for (auto [a, c] : m.pairs) lo = Lx.meet(lo, a), hi = Ly.join(hi, c);
    for (Elem a = 0; a < Lx.size(); ++a)
      if (Lx.leq(lo, a) != (f[a] != kNone)) throw Error("domain is not the filter above " + lbl(Lx, lo) + where);
    for (Elem c = 0; c < Ly.size(); ++c)
      if (Ly.leq(c, hi) != (b[c] != kNone)) throw Error("image is not the ideal below " + lbl(Ly, hi) + where);
    for (auto [a, c] : m.pairs)
      for (auto [a2, c2] : m.pairs)
        if (Lx.leq(a, a2) != Ly.leq(c, c2))
          throw Error("not an order isomorphism at (" + lbl(Lx, a) + ", " + lbl(Lx, a2) + ")" + where);
    if (lo == Lx.bottom()) throw Error("0_x must lie strictly below 0_{y,x}" + where);
    if (hi == Ly.top()) throw Error("1_{y,x} must lie strictly below 1_y" + where);
    fwd[g] = std::move(f);
    bwd[g] = std::move(b);
    dom_min[g] = lo;
    img_max[g] = hi;
  }

  // Partial map L_{chain[0]} -> L_{chain.back()} along consecutive covers.
  PartialMap along(const std::vector<Elem>& chain) const {
    PartialMap r(spec.components[chain[0]].size());
    std::iota(r.begin(), r.end(), 0);
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      const PartialMap& f = fwd[id(chain[i], chain[i + 1])];
      for (auto& v : r)
        if (v != kNone) v = f[std::size_t(v)];
    }
    return r;
  }

  // Some maximal chain from x up to z.
  std::vector<Elem> chain_to(Elem x, Elem z) const {
    std::vector<Elem> c{x};
    while (x != z) {
      bool moved = false;
      for (Elem w : S.covers(x))
        if (S.leq(w, z)) {
          x = w;
          moved = true;
          break;
        }
      if (!moved) throw Error("no covering chain between skeleton elements");
      c.push_back(x);
    }
    return c;
  }

  void all_chains(Elem x, Elem z, std::vector<Elem>& cur, std::vector<std::vector<Elem>>& out) const {
    if (out.size() > 100000) throw BoundExceeded("too many maximal chains in a skeleton interval", out.size());
    if (x == z) {
      out.push_back(cur);
      return;
    }
    for (Elem w : S.covers(x))
      if (S.leq(w, z)) {
        cur.push_back(w);
        all_chains(w, z, cur, out);
        cur.pop_back();
      }
  }

  void check_squares() const {
    const std::size_t n = S.size();
    for (Elem m = 0; m < n; ++m) {
      auto up = S.covers(m);
      for (std::size_t i = 0; i < up.size(); ++i)
        for (std::size_t k = i + 1; k < up.size(); ++k) {
          Elem x = up[i], y = up[k], j = S.join(x, y);
          if (!index.count({x, j}) || !index.count({y, j}))
            throw Error("skeleton square at " + lbl(S, m) + " does not close with covers");
          if (along({m, x, j}) != along({m, y, j}))
            throw Error("commutation fails on the square " + lbl(S, m) + " ≺ " + lbl(S, x) + ", " + lbl(S, y) +
                        " ≺ " + lbl(S, j));
        }
    }
  }

  void check_chain_independence() const {
    const std::size_t n = S.size();
    for (Elem x = 0; x < n; ++x)
      for (Elem z = 0; z < n; ++z) {
        if (x == z || !S.leq(x, z)) continue;
        std::vector<std::vector<Elem>> chains;
        std::vector<Elem> cur{x};
        all_chains(x, z, cur, chains);
        const PartialMap ref = along(chains[0]);
        for (std::size_t c = 1; c < chains.size(); ++c)
          if (along(chains[c]) != ref)
            throw Error("transport from " + lbl(S, x) + " to " + lbl(S, z) + " depends on the chain");
      }
  }

  // a +_C 0_z for a ∈ L_x, x ≤ z.
  Elem lift(Elem x, Elem a, Elem z) const {
    while (x != z) {
      Elem w = chain_to(x, z)[1];
      std::size_t g = id(x, w);
      a = spec.components[x].join(a, dom_min[g]);
      a = Elem(fwd[g][a]);
      x = w;
    }
    return a;
  }

  // Dual of lift for a ∈ L_x, z ≤ x.
  Elem drop(Elem x, Elem a, Elem z) const {
    while (x != z) {
      Elem v = x;
      for (Elem u : lower[x])
        if (S.leq(z, u)) {
          v = u;
          break;
        }
      if (v == x) throw Error("no covering chain between skeleton elements");
      std::size_t g = id(v, x);
      a = spec.components[x].meet(a, img_max[g]);
      a = Elem(bwd[g][a]);
      x = v;
    }
    return a;
  }
};

// Skeleton elements sorted by down-set size: a linear extension.
std::vector<Elem> linear_extension(const FiniteLattice& S) {
  std::vector<std::size_t> below(S.size(), 0);
  for (Elem a = 0; a < S.size(); ++a)
    for (Elem b = 0; b < S.size(); ++b) below[a] += S.leq(b, a);
  std::vector<Elem> ord(S.size());
  std::iota(ord.begin(), ord.end(), 0);
  std::stable_sort(ord.begin(), ord.end(), [&](Elem a, Elem b) { return below[a] < below[b]; });
  return ord;
}

struct Bits {
  std::size_t words = 0;
  std::vector<std::uint64_t> w;
  explicit Bits(std::size_t n = 0) : words((n + 63) / 64), w(words, 0) {}
  void set(std::size_t i) { w[i >> 6] |= std::uint64_t(1) << (i & 63); }
  bool get(std::size_t i) const { return (w[i >> 6] >> (i & 63)) & 1u; }
  void operator|=(const Bits& o) {
    for (std::size_t k = 0; k < words; ++k) w[k] |= o.w[k];
  }
};

}  // namespace

FiniteLattice order_completion(const GluedSumSpec& spec, std::vector<std::vector<Elem>>* cls) {
  Glue G(spec);
  const std::size_t n = spec.skeleton.size();
  std::vector<std::size_t> off(n + 1, 0);
  for (std::size_t x = 0; x < n; ++x) off[x + 1] = off[x] + spec.components[x].size();
  const std::size_t N = off[n];
  std::vector<Bits> r(N, Bits(N));
  for (std::size_t x = 0; x < n; ++x) {
    const auto& L = spec.components[x];
    for (Elem a = 0; a < L.size(); ++a)
      for (Elem b = 0; b < L.size(); ++b)
        if (L.leq(a, b)) r[off[x] + a].set(off[x] + b);
  }
  for (const auto& m : spec.glue)
    for (auto [a, b] : m.pairs) {
      r[off[m.x] + a].set(off[m.y] + b);
      r[off[m.y] + b].set(off[m.x] + a);
    }
  for (std::size_t k = 0; k < N; ++k)
    for (std::size_t i = 0; i < N; ++i)
      if (r[i].get(k)) r[i] |= r[k];
  std::vector<Elem> cid(N, Elem(-1));
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < N; ++i) {
    if (cid[i] != Elem(-1)) continue;
    cid[i] = Elem(reps.size());
    for (std::size_t j = i + 1; j < N; ++j)
      if (r[i].get(j) && r[j].get(i)) cid[j] = Elem(reps.size());
    reps.push_back(i);
  }
  std::vector<std::pair<Elem, Elem>> leq;
  for (std::size_t a = 0; a < reps.size(); ++a)
    for (std::size_t b = 0; b < reps.size(); ++b)
      if (r[reps[a]].get(reps[b])) leq.emplace_back(Elem(a), Elem(b));
  if (cls) {
    cls->assign(n, {});
    for (std::size_t x = 0; x < n; ++x)
      for (Elem a = 0; a < spec.components[x].size(); ++a) (*cls)[x].push_back(cid[off[x] + a]);
  }
  return FiniteLattice::from_order(reps.size(), leq);
}

GluedLattice glued_sum(const GluedSumSpec& spec, const SearchOptions& opts) {
  if (is_modular(spec.skeleton)) throw Error("skeleton is not modular");
  Glue G(spec);
  G.check_squares();
  G.check_chain_independence();
  const FiniteLattice& S = spec.skeleton;
  const std::size_t n = S.size();
  std::vector<std::size_t> off(n + 1, 0);
  for (std::size_t x = 0; x < n; ++x) off[x + 1] = off[x] + spec.components[x].size();
  const std::size_t N = off[n];
  auto pos_of = [&](std::size_t g) {
    Elem x = Elem(std::upper_bound(off.begin(), off.end(), g) - off.begin() - 1);
    return std::make_pair(x, Elem(g - off[x]));
  };

  // Classes keyed by the least position reachable by transporting down.
  std::map<std::pair<Elem, Elem>, Elem> key_to_class;
  std::vector<std::pair<Elem, Elem>> keys;
  std::vector<Elem> of(N);
  for (std::size_t g = 0; g < N; ++g) {
    auto [x, a] = pos_of(g);
    std::vector<std::pair<Elem, Elem>> reach{{x, a}};
    for (std::size_t i = 0; i < reach.size(); ++i) {
      auto [u, c] = reach[i];
      for (Elem v : G.lower[u]) {
        std::int32_t d = G.bwd[G.id(v, u)][c];
        if (d == kNone) continue;
        std::pair<Elem, Elem> nx{v, Elem(d)};
        if (std::find(reach.begin(), reach.end(), nx) == reach.end()) reach.push_back(nx);
      }
    }
    auto best = reach[0];
    for (const auto& q : reach)
      if (S.leq(q.first, best.first)) best = q;
    for (const auto& q : reach)
      if (!S.leq(best.first, q.first))
        throw Error("no least position for " + lbl(spec.components[x], a) + " in " + lbl(S, x));
    auto [it, ins] = key_to_class.emplace(best, Elem(keys.size()));
    if (ins) keys.push_back(best);
    of[g] = it->second;
  }

  const std::size_t K = keys.size();
  std::vector<std::vector<std::size_t>> members(K);
  for (std::size_t g = 0; g < N; ++g) members[of[g]].push_back(g);

  // a ≤⁰ b via covering chains: reach[g] holds every b above g.
  const std::vector<Elem> ext = linear_extension(S);
  std::vector<Bits> reach(N, Bits(N));
#pragma omp parallel for schedule(dynamic, 8) num_threads(opts.jobs > 0 ? opts.jobs : 1) if (opts.jobs > 1)
  for (std::int64_t gi = 0; gi < std::int64_t(N); ++gi) {
    const std::size_t g = std::size_t(gi);
    auto [x, a] = pos_of(g);
    Bits& R = reach[g];
    const auto& Lx = spec.components[x];
    for (Elem b = 0; b < Lx.size(); ++b)
      if (Lx.leq(a, b)) R.set(off[x] + b);
    for (Elem u : ext) {
      if (!S.leq(x, u)) continue;
      const auto& Lu = spec.components[u];
      for (Elem w : S.covers(u)) {
        const auto& f = G.fwd[G.id(u, w)];
        const auto& Lw = spec.components[w];
        for (Elem c = 0; c < Lu.size(); ++c) {
          if (!R.get(off[u] + c) || f[c] == kNone) continue;
          for (Elem e = 0; e < Lw.size(); ++e)
            if (Lw.leq(Elem(f[c]), e)) R.set(off[w] + e);
        }
      }
    }
  }
  std::vector<std::pair<Elem, Elem>> leq;
  for (std::size_t A = 0; A < K; ++A) {
    Bits U(N);
    for (std::size_t g : members[A]) U |= reach[g];
    for (std::size_t B = 0; B < K; ++B)
      for (std::size_t g : members[B])
        if (U.get(g)) {
          leq.emplace_back(Elem(A), Elem(B));
          break;
        }
  }
  // Antisymmetry on classes is part of the definition of the quotient.
  for (auto [a, b] : leq)
    if (a != b && std::find(leq.begin(), leq.end(), std::make_pair(b, a)) != leq.end())
      throw Error("glued order is not antisymmetric");

  GluedLattice out;
  out.spec = spec;
  std::vector<std::string> labels(K);
  for (std::size_t k = 0; k < K; ++k) {
    auto [x, a] = keys[k];
    labels[k] = lbl(S, x) + ":" + lbl(spec.components[x], a);
  }
  out.lattice = FiniteLattice::from_order(K, leq, labels);
  const FiniteLattice& L = out.lattice;
  for (auto [a, b] : leq)
    if (!L.leq(a, b)) throw Error("glued order relation is not transitive");
  out.cls.assign(n, {});
  for (std::size_t x = 0; x < n; ++x)
    for (Elem a = 0; a < spec.components[x].size(); ++a) out.cls[x].push_back(of[off[x] + a]);
  out.mu.resize(K);
  out.mu_rep.resize(K);
  out.lambda.resize(K);
  out.lambda_rep.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    out.mu[k] = keys[k].first;
    out.mu_rep[k] = keys[k].second;
    auto top = pos_of(members[k][0]);
    for (std::size_t g : members[k]) {
      auto q = pos_of(g);
      if (S.leq(top.first, q.first)) top = q;
    }
    for (std::size_t g : members[k])
      if (!S.leq(pos_of(g).first, top.first)) throw Error("no greatest position for element " + labels[k]);
    out.lambda[k] = top.first;
    out.lambda_rep[k] = top.second;
  }
  for (Elem x = 0; x < n; ++x) {
    out.sigma.push_back(out.cls[x][spec.components[x].bottom()]);
    out.pi.push_back(out.cls[x][spec.components[x].top()]);
  }

  // Cross-check against the closure oracle.
  {
    std::vector<std::vector<Elem>> cls2;
    FiniteLattice L2 = order_completion(spec, &cls2);
    if (L2.size() != K) throw Error("glued order disagrees with the order completion in size");
    std::vector<Elem> to2(K, Elem(-1));
    for (std::size_t x = 0; x < n; ++x)
      for (Elem a = 0; a < spec.components[x].size(); ++a) {
        Elem c = out.cls[x][a], d = cls2[x][a];
        if (to2[c] == Elem(-1)) to2[c] = d;
        else if (to2[c] != d) throw Error("glued classes disagree with the order completion");
      }
    for (Elem a = 0; a < K; ++a)
      for (Elem b = 0; b < K; ++b)
        if (L.leq(a, b) != L2.leq(to2[a], to2[b])) throw Error("glued order disagrees with the order completion");
  }

  // σ, π and the blocks.
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y) {
      if (out.sigma[S.join(x, y)] != L.join(out.sigma[x], out.sigma[y]))
        throw Error("[0_{x+y}] is not the join of [0_x], [0_y] at " + lbl(S, x) + ", " + lbl(S, y));
      if (out.pi[S.meet(x, y)] != L.meet(out.pi[x], out.pi[y]))
        throw Error("[1_{xy}] is not the meet of [1_x], [1_y] at " + lbl(S, x) + ", " + lbl(S, y));
      if (S.leq(x, y) != L.leq(out.sigma[x], out.sigma[y])) throw Error("σ is not an order embedding");
      if (S.leq(x, y) != L.leq(out.pi[x], out.pi[y])) throw Error("π is not an order embedding");
    }
  for (Elem x = 0; x < n; ++x) {
    const auto& Lx = spec.components[x];
    std::size_t in_block = 0;
    for (Elem c = 0; c < K; ++c) in_block += L.leq(out.sigma[x], c) && L.leq(c, out.pi[x]);
    std::set<Elem> img(out.cls[x].begin(), out.cls[x].end());
    if (img.size() != Lx.size() || in_block != Lx.size())
      throw Error("L_" + lbl(S, x) + " does not embed onto [σx, πx]");
    for (Elem a = 0; a < Lx.size(); ++a)
      for (Elem b = 0; b < Lx.size(); ++b)
        if (Lx.leq(a, b) != L.leq(out.cls[x][a], out.cls[x][b]))
          throw Error("L_" + lbl(S, x) + " is not order-embedded");
  }

  // Joins and meets by the transport recursion.
  auto rec_join = [&](Elem A, Elem B) {
    Elem x = out.mu[A], y = out.mu[B], z = S.join(x, y);
    Elem a = G.lift(x, out.mu_rep[A], z), b = G.lift(y, out.mu_rep[B], z);
    return out.cls[z][spec.components[z].join(a, b)];
  };
  auto rec_meet = [&](Elem A, Elem B) {
    Elem x = out.lambda[A], y = out.lambda[B], z = S.meet(x, y);
    Elem a = G.drop(x, out.lambda_rep[A], z), b = G.drop(y, out.lambda_rep[B], z);
    return out.cls[z][spec.components[z].meet(a, b)];
  };
  std::vector<std::pair<Elem, Elem>> pairs;
  if (K <= 2000) {
    for (Elem a = 0; a < K; ++a)
      for (Elem b = 0; b < K; ++b) pairs.emplace_back(a, b);
  } else {
    std::mt19937_64 rng(0);
    std::uniform_int_distribution<Elem> pick(0, Elem(K - 1));
    for (int s = 0; s < 200000; ++s) pairs.emplace_back(pick(rng), pick(rng));
  }
  std::int64_t bad = -1;
#pragma omp parallel for schedule(dynamic, 256) num_threads(opts.jobs > 0 ? opts.jobs : 1) if (opts.jobs > 1)
  for (std::int64_t k = 0; k < std::int64_t(pairs.size()); ++k) {
    auto [a, b] = pairs[std::size_t(k)];
    if (rec_join(a, b) != L.join(a, b) || rec_meet(a, b) != L.meet(a, b)) {
#pragma omp critical
      if (bad < 0 || k < bad) bad = k;
    }
  }
  if (bad >= 0) {
    auto [a, b] = pairs[std::size_t(bad)];
    throw Error("transport recursion disagrees with the order at (" + labels[a] + ", " + labels[b] + ")");
  }

  if (auto f = check_lattice_axioms(L)) throw Error("glued lattice: " + *f);
  bool modular_parts = true;
  for (const auto& C : spec.components) modular_parts = modular_parts && !is_modular(C, opts);
  if (modular_parts && is_modular(L, opts)) throw Error("glued sum of modular lattices is not modular");
  return out;
}

GluedLattice dilworth_hall(std::vector<FiniteLattice> components,
                           const std::vector<std::vector<std::pair<Elem, Elem>>>& alphas, const SearchOptions& opts) {
  if (components.empty()) throw Error("dilworth_hall needs at least one component");
  if (alphas.size() + 1 != components.size()) throw Error("need one isomorphism per consecutive pair of components");
  GluedSumSpec spec;
  spec.skeleton = FiniteLattice::chain(components.size());
  spec.components = std::move(components);
  for (std::size_t i = 0; i < alphas.size(); ++i) spec.glue.push_back({Elem(i), Elem(i + 1), alphas[i]});
  return glued_sum(spec, opts);
}

GluedSumSpec decompose(const FiniteLattice& L, const FiniteLattice& S, const std::vector<Elem>& sigma,
                       const std::vector<Elem>& pi) {
  const std::size_t n = S.size();
  if (sigma.size() != n || pi.size() != n) throw Error("σ and π need one value per skeleton element");
  GluedSumSpec spec;
  spec.skeleton = S;
  std::vector<std::vector<Elem>> local(n, std::vector<Elem>(L.size(), Elem(-1)));
  for (Elem x = 0; x < n; ++x) {
    std::vector<Elem> emb;
    spec.components.push_back(interval(L, sigma[x], pi[x], &emb));
    for (Elem i = 0; i < emb.size(); ++i) local[x][emb[i]] = i;
  }
  for (Elem x = 0; x < n; ++x)
    for (Elem y : S.covers(x)) {
      if (!L.leq(sigma[y], pi[x])) throw Error("σy is not below πx for " + lbl(S, x) + " ≺ " + lbl(S, y));
      GlueMap m{x, y, {}};
      for (Elem a = 0; a < L.size(); ++a)
        if (L.leq(sigma[y], a) && L.leq(a, pi[x])) m.pairs.emplace_back(local[x][a], local[y][a]);
      spec.glue.push_back(std::move(m));
    }
  return spec;
}

std::vector<Elem> congruence_generated(const FiniteLattice& L, Elem a, Elem b) {
  const std::size_t n = L.size();
  std::vector<Elem> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Elem x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::pair<Elem, Elem>> work;
  auto merge = [&](Elem x, Elem y) {
    Elem rx = find(x), ry = find(y);
    if (rx == ry) return;
    parent[std::max(rx, ry)] = std::min(rx, ry);
    work.emplace_back(x, y);
  };
  merge(a, b);
  while (!work.empty()) {
    auto [u, v] = work.back();
    work.pop_back();
    for (Elem z = 0; z < n; ++z) {
      merge(L.join(u, z), L.join(v, z));
      merge(L.meet(u, z), L.meet(v, z));
    }
  }
  std::vector<Elem> out(n);
  for (Elem x = 0; x < n; ++x) out[x] = find(x);
  return out;
}

SimplicityReport verify_simple(const FiniteLattice& L, std::size_t bound) {
  const std::size_t cap = size_bound(bound);
  if (L.size() > cap) throw BoundExceeded("lattice too large for the congruence computation", L.size());
  SimplicityReport r;
  if (L.size() < 2) return r;
  std::vector<std::vector<Elem>> lower(L.size());
  for (Elem a = 0; a < L.size(); ++a)
    for (Elem b : L.covers(a)) lower[b].push_back(a);
  r.simple = true;
  for (Elem j = 0; j < L.size(); ++j) {
    if (lower[j].size() != 1) continue;
    auto blocks = congruence_generated(L, lower[j][0], j);
    if (blocks[L.bottom()] != blocks[L.top()]) {
      r.simple = false;
      r.witness = std::make_pair(lower[j][0], j);
      break;
    }
  }
  return r;
}

SimplicityReport verify_simple(const GluedLattice& G, std::size_t bound) {
  SimplicityReport r = verify_simple(G.lattice, bound);
  r.components_simple = true;
  for (Elem x = 0; x < G.spec.components.size(); ++x)
    if (!verify_simple(G.spec.components[x], bound).simple) {
      r.components_simple = false;
      r.non_simple_components.push_back(x);
    }
  return r;
}

FiniteLattice submodule_lattice(const FiniteModule& M, const std::vector<Submodule>& subs, const SearchOptions& opts) {
  HandleIndex<Submodule> idx(M);
  for (const auto& X : subs)
    if (!idx.insert(X).second) throw Error("submodule list has duplicates");
  const std::size_t n = subs.size();
  std::vector<Elem> join(n * n), meet(n * n);
  std::int64_t missing = -1;
#pragma omp parallel for schedule(dynamic, 4) num_threads(opts.jobs > 0 ? opts.jobs : 1) if (opts.jobs > 1)
  for (std::int64_t i = 0; i < std::int64_t(n); ++i)
    for (std::size_t j = std::size_t(i); j < n; ++j) {
      auto s = idx.find(M.sum(subs[std::size_t(i)], subs[j]));
      auto t = idx.find(M.intersect(subs[std::size_t(i)], subs[j]));
      if (!s || !t) {
#pragma omp critical
        missing = i;
        continue;
      }
      join[std::size_t(i) * n + j] = join[j * n + std::size_t(i)] = *s;
      meet[std::size_t(i) * n + j] = meet[j * n + std::size_t(i)] = *t;
    }
  if (missing >= 0) throw Error("submodule list is not closed under sum and intersection");
  std::vector<std::string> labels;
  for (const auto& X : subs) labels.push_back(M.label(X));
  return FiniteLattice::from_tables(n, std::move(join), std::move(meet), std::move(labels));
}

Submodule p_preimage(const FiniteModule& M, const Submodule& X) {
  const std::int64_t p = M.ring().p();
  std::vector<FiniteModule::Vec> gens;
  for (auto& v : M.all_elements())
    if (M.contains(X, M.scale(p, v))) gens.push_back(std::move(v));
  return M.submodule(gens);
}

namespace {

Submodule p_times(const FiniteModule& M, const Submodule& X) {
  std::vector<FiniteModule::Vec> gens;
  for (const auto& g : M.generators(X)) gens.push_back(M.scale(M.ring().p(), g));
  return M.submodule(gens);
}

Submodule p_module(const FiniteModule& M) {
  std::vector<FiniteModule::Vec> gens;
  for (std::size_t i = 0; i < M.rank(); ++i) gens.push_back(M.scale(M.ring().p(), M.e(i)));
  return M.submodule(gens);
}

}  // namespace

LAModel build_LA(std::uint32_t p, const std::vector<unsigned>& shape, const SearchOptions& opts) {
  if (shape.empty()) throw Error("shape needs at least one cyclic factor");
  LAModel M;
  M.p = p;
  M.shape = shape;
  M.A = abelian_group(p, shape);
  const FiniteModule& A = *M.A;
  M.subgroups = A.all_submodules();
  M.lattice = submodule_lattice(A, M.subgroups, opts);
  HandleIndex<Submodule> idx(A);
  for (const auto& X : M.subgroups) idx.insert(X);
  const Elem pA = *idx.find(p_module(A));
  M.skeleton = interval(M.lattice, M.lattice.bottom(), pA, &M.skeleton_elems);
  M.sigma = M.skeleton_elems;
  for (Elem s : M.skeleton_elems) {
    auto q = idx.find(p_preimage(A, M.subgroups[s]));
    if (!q) throw Error("p-preimage is not in the subgroup list");
    M.pi.push_back(*q);
  }
  GluedSumSpec spec = decompose(M.lattice, M.skeleton, M.sigma, M.pi);
  M.glued = glued_sum(spec, opts);
  // decompose builds L_x = [σx, πx] with elements in L(A) order.
  M.glued_to_LA.assign(M.glued.lattice.size(), Elem(-1));
  for (Elem x = 0; x < M.skeleton.size(); ++x) {
    std::vector<Elem> emb;
    interval(M.lattice, M.sigma[x], M.pi[x], &emb);
    for (Elem a = 0; a < emb.size(); ++a) {
      Elem& t = M.glued_to_LA[M.glued.cls[x][a]];
      if (t != Elem(-1) && t != emb[a]) throw Error("glued element maps to two subgroups");
      t = emb[a];
    }
  }
  return M;
}

LAReport check_LA(const LAModel& M, const SearchOptions& opts) {
  LAReport r;
  const FiniteModule& A = *M.A;
  const FiniteLattice& L = M.lattice;
  HandleIndex<Submodule> idx(A);
  for (const auto& X : M.subgroups) idx.insert(X);
  std::vector<Elem> sk_of(L.size(), Elem(-1));
  for (Elem s = 0; s < M.skeleton_elems.size(); ++s) sk_of[M.skeleton_elems[s]] = s;

  r.decomposition = true;
  for (Elem c = 0; c < L.size() && r.decomposition; ++c) {
    auto pc = idx.find(p_times(A, M.subgroups[c]));
    if (!pc || sk_of[*pc] == Elem(-1)) {
      r.decomposition = false;
      r.failure = "pC not in L(pA) for C = " + L.label(c);
      break;
    }
    Elem s = sk_of[*pc];
    if (!L.leq(M.sigma[s], c) || !L.leq(c, M.pi[s])) {
      r.decomposition = false;
      r.failure = "C not in [σ(pC), π(pC)] for C = " + L.label(c);
    }
  }

  auto F = abelian_group(M.p, std::vector<unsigned>(M.shape.size(), 1));
  FiniteLattice LF = submodule_lattice(*F, F->all_submodules(), opts);
  r.intervals_subspace = true;
  for (Elem s = 0; s < M.skeleton.size(); ++s)
    if (!isomorphic(interval(L, M.sigma[s], M.pi[s]), LF)) {
      r.intervals_subspace = false;
      if (r.failure.empty()) r.failure = "[σX, πX] not a subspace lattice for X = " + L.label(M.sigma[s]);
      break;
    }

  const FiniteLattice& GL = M.glued.lattice;
  r.glue_matches = GL.size() == L.size();
  std::set<Elem> seen(M.glued_to_LA.begin(), M.glued_to_LA.end());
  r.glue_matches = r.glue_matches && seen.size() == L.size() && !seen.count(Elem(-1));
  for (Elem a = 0; a < GL.size() && r.glue_matches; ++a)
    for (Elem b = 0; b < GL.size(); ++b)
      if (GL.leq(a, b) != L.leq(M.glued_to_LA[a], M.glued_to_LA[b])) {
        r.glue_matches = false;
        break;
      }
  if (!r.glue_matches && r.failure.empty()) r.failure = "glued sum of the blocks differs from L(A)";

  r.modular = !is_modular(L, opts);
  if (!r.modular && r.failure.empty()) r.failure = "L(A) is not modular";
  r.simple = verify_simple(M.glued).simple;
  if (!r.simple && r.failure.empty()) r.failure = "L(A) is not simple";
  return r;
}

LGModel::LGModel(const Group& G, std::uint32_t p, const std::vector<unsigned>& shape) : p_(p), shape_(shape) {
  if (shape.empty()) throw Error("shape needs at least one cyclic factor");
  A_ = abelian_group(p, shape);
  const unsigned k = *std::max_element(shape.begin(), shape.end());
  std::vector<FiniteModule::Rel> rels;
  for (std::size_t i = 0; i < shape.size(); ++i)
    if (shape[i] < k) rels.push_back({std::int64_t(ipow(p, shape[i])), i});
  B_ = std::make_unique<FiniteModule>(FiniteRing(p, k, G), shape.size(), rels);
  const Submodule pA = p_module(*A_);
  for (auto& X : A_->submodules_of(pA)) {
    skeleton_pi_.push_back(pi(X));
    skeleton_.push_back(std::move(X));
  }
}

Submodule LGModel::embed(const Submodule& X) const {
  const std::size_t m = B_->ring().dim();
  const std::uint32_t id = B_->ring().group().identity();
  std::vector<FiniteModule::Vec> gens;
  for (const auto& v : A_->generators(X)) {
    FiniteModule::Vec w = B_->zero_vec();
    for (std::size_t i = 0; i < v.size(); ++i) w[i * m + id] = v[i];
    gens.push_back(std::move(w));
  }
  return B_->submodule(gens);
}

bool LGModel::contains(const Submodule& Y) const {
  for (std::size_t s = 0; s < skeleton_.size(); ++s)
    if (B_->leq(embed(skeleton_[s]), Y) && B_->leq(Y, skeleton_pi_[s])) return true;
  return false;
}

std::optional<std::string> LGModel::check_embeddings(const SearchOptions& opts) const {
  const auto LA = A_->all_submodules();
  FiniteLattice L = submodule_lattice(*A_, LA, opts);
  std::vector<Submodule> E(LA.size());
  for (std::size_t i = 0; i < LA.size(); ++i) E[i] = embed(LA[i]);
  HandleIndex<Submodule> seen(*B_);
  for (std::size_t i = 0; i < E.size(); ++i)
    if (!seen.insert(E[i]).second) return "X ↦ QX is not injective at " + A_->label(LA[i]);
  const std::size_t n = LA.size();
  std::int64_t bad = -1;
#pragma omp parallel for schedule(dynamic, 4) num_threads(opts.jobs > 0 ? opts.jobs : 1) if (opts.jobs > 1)
  for (std::int64_t i = 0; i < std::int64_t(n); ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t a = std::size_t(i);
      if (!(B_->sum(E[a], E[j]) == E[L.join(Elem(a), Elem(j))]) ||
          !(B_->intersect(E[a], E[j]) == E[L.meet(Elem(a), Elem(j))])) {
#pragma omp critical
        if (bad < 0 || i < bad) bad = i;
      }
    }
  if (bad >= 0) return "X ↦ QX does not preserve joins and meets at " + A_->label(LA[std::size_t(bad)]);

  // π' on the skeleton: injective lattice homomorphism with σ'(y) ≤ π'(x) for x ≤ y.
  const std::size_t m = skeleton_.size();
  HandleIndex<Submodule> pis(*B_);
  for (std::size_t s = 0; s < m; ++s)
    if (!pis.insert(skeleton_pi_[s]).second) return "π' is not injective at " + A_->label(skeleton_[s]);
  HandleIndex<Submodule> sk(*A_);
  for (const auto& X : skeleton_) sk.insert(X);
  for (std::size_t s = 0; s < m; ++s)
    for (std::size_t t = 0; t < m; ++t) {
      const Submodule& X = skeleton_[s];
      const Submodule& Y = skeleton_[t];
      Elem j = *sk.find(A_->sum(X, Y)), me = *sk.find(A_->intersect(X, Y));
      if (!(B_->sum(skeleton_pi_[s], skeleton_pi_[t]) == skeleton_pi_[j]) ||
          !(B_->intersect(skeleton_pi_[s], skeleton_pi_[t]) == skeleton_pi_[me]))
        return "π' does not preserve joins and meets at " + A_->label(X) + ", " + A_->label(Y);
      if (A_->leq(X, Y) && !B_->leq(embed(Y), skeleton_pi_[s]))
        return "σ'(Y) is not below π'(X) for " + A_->label(X) + " ≤ " + A_->label(Y);
    }
  return std::nullopt;
}

std::vector<Submodule> LGModel::members(std::size_t bound) const {
  std::vector<Submodule> out;
  for (auto& Y : B_->all_submodules(bound))
    if (contains(Y)) out.push_back(std::move(Y));
  return out;
}

SkewFrameConfig<Submodule> LGModel::psi0() const {
  if (shape_.size() != 4 || shape_[0] != 2 || shape_[2] != 2 || shape_[3] != 1)
    throw Error("Ψ⁰ needs shape (2, k, 2, 1)");
  const FiniteModule& B = *B_;
  const std::int64_t p = p_;
  auto Q = [&](std::vector<std::pair<std::int64_t, std::size_t>> t) { return B.cyclic(B.combo(t)); };
  SkewFrameConfig<Submodule> S;
  S.outer = make_frame<Submodule>(B, B.zero(), {Q({{p, 0}}), Q({{p, 2}}), Q({{1, 3}})},
                                  {Q({{p, 0}, {-p, 2}}), Q({{p, 0}, {-1, 3}})});
  S.inner = make_frame<Submodule>(B, B.zero(), {Q({{1, 0}}), Q({{1, 2}})}, {Q({{1, 0}, {-1, 2}})});
  return S;
}

Submodule LGOracle::join(const Submodule& a, const Submodule& b) const {
  if (!M_.contains(a) || !M_.contains(b)) throw Error("operand outside L(G)");
  return M_.B().sum(a, b);
}

Submodule LGOracle::meet(const Submodule& a, const Submodule& b) const {
  if (!M_.contains(a) || !M_.contains(b)) throw Error("operand outside L(G)");
  return M_.B().intersect(a, b);
}

RewireResult rewire(const GluedLattice& G, const std::vector<Elem>& U, const std::vector<GlueMap>& phi,
                    const SearchOptions& opts) {
  const GluedSumSpec& spec = G.spec;
  const FiniteLattice& S = spec.skeleton;
  std::set<Elem> inU;
  for (Elem u : U) {
    if (u >= S.size()) throw Error("U references a skeleton element out of range");
    inU.insert(u);
  }
  for (Elem u : U)
    for (Elem v : U)
      if (u != v && S.leq(u, v)) throw Error("U is not an antichain");

  Glue old(spec);
  GluedSumSpec next = spec;
  for (const auto& m : phi) {
    auto it = old.index.find({m.x, m.y});
    if (it == old.index.end()) throw Error("replacement glue map is not on a covering pair");
    if (!inU.count(m.x) && !inU.count(m.y)) {
      auto a = m.pairs, b = spec.glue[it->second].pairs;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (a != b) throw Error("condition (1) fails at " + lbl(S, m.x) + " ≺ " + lbl(S, m.y));
    }
    next.glue[it->second] = m;
  }
  Glue neu(next);

  auto triple = [&](Elem x, Elem u, Elem y) { return lbl(S, x) + " ≺ " + lbl(S, u) + " ≺ " + lbl(S, y); };
  for (Elem u : U)
    for (Elem x : old.lower[u])
      for (Elem y : S.covers(u)) {
        const auto& Lx = spec.components[x];
        const auto& Lu = spec.components[u];
        const std::size_t gux = neu.id(x, u), gyu = neu.id(u, y);
        const PartialMap gyx = old.along({x, u, y});
        const PartialMap& fux = neu.fwd[gux];
        const PartialMap& bux = neu.bwd[gux];
        const PartialMap& fyu = neu.fwd[gyu];
        const PartialMap& old_yu = old.fwd[old.id(u, y)];
        const Elem top_ux = neu.img_max[gux];
        // (2)
        std::optional<Elem> zero_yx;
        for (Elem a = 0; a < Lx.size(); ++a)
          if (gyx[a] != kNone && (!zero_yx || Lx.leq(a, *zero_yx))) zero_yx = a;
        if (zero_yx) {
          if (fux[*zero_yx] == kNone) throw Error("condition (2) fails at " + triple(x, u, y) + ": φ_ux(0_{y,x}) undefined");
          const Elem lo = Elem(fux[*zero_yx]);
          for (Elem a = 0; a < Lu.size(); ++a) {
            if (!Lu.leq(lo, a) || !Lu.leq(a, top_ux)) continue;
            std::int32_t lhs = fyu[a];
            std::int32_t rhs = bux[a] == kNone ? kNone : gyx[std::size_t(bux[a])];
            if (lhs == kNone || lhs != rhs)
              throw Error("condition (2) fails at " + triple(x, u, y) + " for " + lbl(Lu, a));
          }
        }
        // (3)
        for (Elem b = 0; b < Lu.size(); ++b) {
          if (!Lu.leq(top_ux, b)) continue;
          if (fyu[b] != old_yu[b]) throw Error("condition (3) fails at " + triple(x, u, y) + " for " + lbl(Lu, b));
        }
      }

  RewireResult r;
  r.glued = glued_sum(next, opts);
  const FiniteLattice &L = G.lattice, &L2 = r.glued.lattice;
  for (Elem x = 0; x < S.size(); ++x) {
    bool ok = true;
    for (Elem u : U) ok = ok && !S.leq(u, x);
    if (ok) r.ideal.push_back(x);
  }
  std::map<Elem, Elem> chi, back;
  r.ideal_iso = true;
  auto fail = [&](const std::string& s) {
    if (r.ideal_iso) r.detail = s;
    r.ideal_iso = false;
  };
  for (Elem x : r.ideal)
    for (Elem a = 0; a < spec.components[x].size(); ++a) {
      Elem c = G.cls[x][a], d = r.glued.cls[x][a];
      auto [i, ins] = chi.emplace(c, d);
      if (!ins && i->second != d) fail("χ is not well defined at " + L.label(c));
      auto [j, ins2] = back.emplace(d, c);
      if (!ins2 && j->second != c) fail("χ is not injective at " + L2.label(d));
    }
  for (auto [c, d] : chi)
    for (auto [c2, d2] : chi)
      if (L.leq(c, c2) != L2.leq(d, d2)) fail("χ does not preserve the order at " + L.label(c) + ", " + L.label(c2));
  // L_T and L'_T are ideals.
  for (auto [c, d] : chi) {
    for (Elem e = 0; e < L.size(); ++e)
      if (L.leq(e, c) && !chi.count(e)) fail("L_T is not an ideal below " + L.label(c));
    for (Elem e = 0; e < L2.size(); ++e)
      if (L2.leq(e, d) && !back.count(e)) fail("L'_T is not an ideal below " + L2.label(d));
  }
  for (auto [c, d] : chi) r.chi.emplace_back(c, d);
  return r;
}

nlohmann::json to_json(const GluedSumSpec& spec) {
  const FiniteLattice& S = spec.skeleton;
  nlohmann::json j;
  j["skeleton"] = to_json(S);
  j["components"] = nlohmann::json::object();
  for (Elem x = 0; x < S.size(); ++x) j["components"][lbl(S, x)] = to_json(spec.components[x]);
  j["glue"] = nlohmann::json::array();
  for (const auto& m : spec.glue) {
    nlohmann::json g;
    g["x"] = lbl(S, m.x);
    g["y"] = lbl(S, m.y);
    g["pairs"] = nlohmann::json::array();
    for (auto [a, b] : m.pairs)
      g["pairs"].push_back({lbl(spec.components[m.x], a), lbl(spec.components[m.y], b)});
    j["glue"].push_back(g);
  }
  return j;
}

namespace {

Elem resolve(const FiniteLattice& L, const nlohmann::json& v, const std::string& what) {
  if (v.is_number_unsigned()) {
    Elem e = v.get<Elem>();
    if (e >= L.size()) throw Error(what + " index out of range");
    return e;
  }
  const std::string s = v.get<std::string>();
  Elem hit = 0;
  int count = 0;
  for (Elem a = 0; a < L.size(); ++a)
    if (lbl(L, a) == s) hit = a, ++count;
  if (count == 0) throw Error("unknown " + what + " '" + s + "'");
  if (count > 1) throw Error("ambiguous " + what + " '" + s + "'");
  return hit;
}

}  // namespace

GluedSumSpec glued_spec_from_json(const nlohmann::json& j) {
  GluedSumSpec spec;
  spec.skeleton = lattice_from_json(j.at("skeleton"));
  const FiniteLattice& S = spec.skeleton;
  spec.components.resize(S.size());
  std::vector<bool> have(S.size(), false);
  for (const auto& [k, v] : j.at("components").items()) {
    Elem x = resolve(S, nlohmann::json(k), "skeleton element");
    spec.components[x] = lattice_from_json(v);
    have[x] = true;
  }
  for (Elem x = 0; x < S.size(); ++x)
    if (!have[x]) throw Error("no component for skeleton element '" + lbl(S, x) + "'");
  for (const auto& g : j.at("glue")) {
    GlueMap m;
    m.x = resolve(S, g.at("x"), "skeleton element");
    m.y = resolve(S, g.at("y"), "skeleton element");
    for (const auto& pr : g.at("pairs")) {
      if (!pr.is_array() || pr.size() != 2) throw Error("glue pairs must be [a, b]");
      m.pairs.emplace_back(resolve(spec.components[m.x], pr[0], "component element"),
                           resolve(spec.components[m.y], pr[1], "component element"));
    }
    spec.glue.push_back(std::move(m));
  }
  return spec;
}

nlohmann::json to_json(const GluedLattice& G) {
  nlohmann::json j;
  j["lattice"] = to_json(G.lattice);
  j["sigma"] = G.sigma;
  j["pi"] = G.pi;
  j["mu"] = G.mu;
  j["lambda"] = G.lambda;
  return j;
}

}  // namespace modlat
