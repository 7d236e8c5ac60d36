#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "modlat/error.hpp"
#include "modlat/lattice.hpp"
#include "modlat/presentation.hpp"
#include "modlat/term.hpp"

namespace modlat {

// Ambient lattice given only through its operations. Implementations must be
// safe for concurrent const use.
template <class H>
class LatticeOracle {
 public:
  using handle = H;
  virtual ~LatticeOracle() = default;
  virtual bool equal(const H& a, const H& b) const = 0;
  virtual H join(const H& a, const H& b) const = 0;
  virtual H meet(const H& a, const H& b) const = 0;
  virtual bool leq(const H& a, const H& b) const { return equal(join(a, b), b); }
  // Must agree with equal; 0 everywhere is valid but slow.
  virtual std::size_t hash(const H&) const { return 0; }
  virtual std::string label(const H&) const { return "?"; }
};

class FiniteLatticeOracle final : public LatticeOracle<Elem> {
 public:
  explicit FiniteLatticeOracle(const FiniteLattice& L) : L_(L) {}
  bool equal(const Elem& a, const Elem& b) const override { return a == b; }
  Elem join(const Elem& a, const Elem& b) const override { return L_.join(a, b); }
  Elem meet(const Elem& a, const Elem& b) const override { return L_.meet(a, b); }
  bool leq(const Elem& a, const Elem& b) const override { return L_.leq(a, b); }
  std::size_t hash(const Elem& a) const override { return a; }
  std::string label(const Elem& a) const override { return L_.label(a); }
  const FiniteLattice& lattice() const { return L_; }

 private:
  const FiniteLattice& L_;
};

template <class H>
using Assignment = std::map<std::string, H>;

template <class H>
H eval(const LatticeOracle<H>& O, const Term& t, const Assignment<H>& A) {
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
      case Kind::Opaque:
        throw Error("cannot evaluate opaque slot '" + x.name() + "'");
    }
    memo.emplace(x.id(), r);
    return r;
  };
  return go(go, t);
}

struct RelationFailure {
  std::size_t index;
  std::string relation;
};

// First failing relation, or nullopt when all relations hold under A.
template <class H>
std::optional<RelationFailure> satisfies_presentation(const LatticeOracle<H>& O, const Presentation& P,
                                                      const Assignment<H>& A) {
  for (const auto& g : P.generators())
    if (!A.count(g)) throw Error("assignment misses generator '" + g + "'");
  const auto& rels = P.relations();
  for (std::size_t i = 0; i < rels.size(); ++i)
    if (!O.equal(eval(O, rels[i].first, A), eval(O, rels[i].second, A)))
      return RelationFailure{i, rels[i].first.str() + " = " + rels[i].second.str()};
  return std::nullopt;
}

template <class H>
H join_all(const LatticeOracle<H>& O, const std::vector<H>& xs) {
  if (xs.empty()) throw Error("empty join");
  H r = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) r = O.join(r, xs[i]);
  return r;
}

template <class H>
H meet_all(const LatticeOracle<H>& O, const std::vector<H>& xs) {
  if (xs.empty()) throw Error("empty meet");
  H r = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) r = O.meet(r, xs[i]);
  return r;
}

// x̄ ↗ ȳ: y_i = x_i + Πȳ and x_i = y_i·Σx̄ for every i.
template <class H>
bool check_nearrow(const LatticeOracle<H>& O, const std::vector<H>& xs, const std::vector<H>& ys) {
  if (xs.size() != ys.size()) throw Error("nearrow: tuple lengths differ");
  if (xs.empty()) return true;
  H py = meet_all(O, ys), sx = join_all(O, xs);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!O.equal(ys[i], O.join(xs[i], py))) return false;
    if (!O.equal(xs[i], O.meet(ys[i], sx))) return false;
  }
  return true;
}

// Sampled lattice-axiom check on triples drawn from pool.
template <class H>
std::optional<std::string> oracle_sanity_check(const LatticeOracle<H>& O, const std::vector<H>& pool,
                                               std::size_t samples = 1000, std::uint64_t seed = 0) {
  if (pool.empty()) return std::nullopt;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (std::size_t s = 0; s < samples; ++s) {
    const H &a = pool[pick(rng)], &b = pool[pick(rng)], &c = pool[pick(rng)];
    auto fail = [&](const char* ax) {
      return std::string(ax) + " fails at (" + O.label(a) + ", " + O.label(b) + ", " + O.label(c) + ")";
    };
    if (!O.equal(O.join(a, b), O.join(b, a))) return fail("join commutativity");
    if (!O.equal(O.meet(a, b), O.meet(b, a))) return fail("meet commutativity");
    if (!O.equal(O.join(O.join(a, b), c), O.join(a, O.join(b, c)))) return fail("join associativity");
    if (!O.equal(O.meet(O.meet(a, b), c), O.meet(a, O.meet(b, c)))) return fail("meet associativity");
    if (!O.equal(O.join(a, a), a)) return fail("join idempotency");
    if (!O.equal(O.meet(a, a), a)) return fail("meet idempotency");
    if (!O.equal(O.join(a, O.meet(a, b)), a)) return fail("join absorption");
    if (!O.equal(O.meet(a, O.join(a, b)), a)) return fail("meet absorption");
  }
  return std::nullopt;
}

// Hash-bucketed set of handles, deduplicated with the oracle's equality.
template <class H>
class HandleIndex {
 public:
  explicit HandleIndex(const LatticeOracle<H>& O) : O_(O) {}
  std::optional<Elem> find(const H& h) const {
    auto it = buckets_.find(O_.hash(h));
    if (it == buckets_.end()) return std::nullopt;
    for (Elem i : it->second)
      if (O_.equal(items_[i], h)) return i;
    return std::nullopt;
  }
  // Returns (index, inserted).
  std::pair<Elem, bool> insert(const H& h) {
    if (auto i = find(h)) return {*i, false};
    Elem i = Elem(items_.size());
    items_.push_back(h);
    buckets_[O_.hash(h)].push_back(i);
    return {i, true};
  }
  const std::vector<H>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }

 private:
  const LatticeOracle<H>& O_;
  std::vector<H> items_;
  std::unordered_map<std::size_t, std::vector<Elem>> buckets_;
};

template <class H>
struct Generated {
  FiniteLattice lattice;
  std::vector<H> handles;
};

namespace detail {

template <class H>
Generated<H> closure(const LatticeOracle<H>& O, const std::vector<H>& seeds, std::size_t cap, int jobs) {
  HandleIndex<H> idx(O);
  for (const auto& s : seeds)
    if (!idx.insert(s).second) throw Error("generated_sublattice: seeds must be pairwise distinct");
  if (idx.size() > cap) throw BoundExceeded("generated sublattice exceeds budget", idx.size());
  // Table entries are filled as pairs are combined; every unordered pair is
  // combined exactly once, when the later of the two enters the frontier.
  std::map<std::pair<Elem, Elem>, std::pair<Elem, Elem>> table;
  std::size_t done = 0;
  while (done < idx.size()) {
    const std::size_t end = idx.size();
    std::vector<std::pair<Elem, Elem>> pairs;
    for (Elem f = Elem(done); f < end; ++f)
      for (Elem e = 0; e <= f; ++e) pairs.emplace_back(e, f);
    std::vector<H> joins(pairs.size()), meets(pairs.size());
    const auto& items = idx.items();
#pragma omp parallel for schedule(dynamic, 64) num_threads(jobs > 0 ? jobs : 1) if (jobs > 1)
    for (std::int64_t k = 0; k < std::int64_t(pairs.size()); ++k) {
      const auto [e, f] = pairs[std::size_t(k)];
      joins[std::size_t(k)] = O.join(items[e], items[f]);
      meets[std::size_t(k)] = O.meet(items[e], items[f]);
    }
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      Elem j = idx.insert(joins[k]).first;
      Elem m = idx.insert(meets[k]).first;
      table[pairs[k]] = {j, m};
      if (idx.size() > cap) throw BoundExceeded("generated sublattice exceeds budget", idx.size());
    }
    done = end;
  }
  const std::size_t n = idx.size();
  std::vector<Elem> join(n * n), meet(n * n);
  for (const auto& [p, v] : table) {
    auto [e, f] = p;
    join[e * n + f] = join[f * n + e] = v.first;
    meet[e * n + f] = meet[f * n + e] = v.second;
  }
  std::vector<std::string> labels;
  for (const auto& h : idx.items()) labels.push_back(O.label(h));
  Generated<H> out{FiniteLattice::from_tables(n, std::move(join), std::move(meet), std::move(labels)), idx.items()};
  return out;
}

}  // namespace detail

// Closure of seeds under join and meet. Throws BoundExceeded past cap.
template <class H>
Generated<H> generated_sublattice(const LatticeOracle<H>& O, const std::vector<H>& seeds, std::size_t cap,
                                  const SearchOptions& opts = {}) {
  return detail::closure(O, seeds, cap, opts.jobs);
}

template <class H>
Generated<H> generated_sublattice_serial(const LatticeOracle<H>& O, const std::vector<H>& seeds, std::size_t cap) {
  return detail::closure(O, seeds, cap, 1);
}

}  // namespace modlat
