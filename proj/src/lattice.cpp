#include "modlat/lattice.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <unordered_map>

#include <omp.h>

#include "modlat/error.hpp"

namespace modlat {

namespace {

using Bits = std::vector<std::uint64_t>;

std::size_t words_for(std::size_t n) { return (n + 63) / 64; }

void check_cap(std::size_t n) {
  std::size_t cap = size_bound(kDefaultLatticeCap);
  if (n > cap) throw BoundExceeded("explicit lattice larger than cap " + std::to_string(cap), n);
}

std::string elem_name(const std::vector<std::string>& labels, Elem a) {
  return a < labels.size() && !labels[a].empty() ? labels[a] : std::to_string(a);
}

}  // namespace

void FiniteLattice::finish(std::vector<std::string> labels) {
  if (labels.empty()) {
    labels.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) labels[i] = std::to_string(i);
  }
  if (labels.size() != n_) throw Error("label count differs from element count");
  labels_ = std::move(labels);
  bottom_ = 0;
  top_ = 0;
  for (Elem a = 1; a < n_; ++a) {
    bottom_ = meet(bottom_, a);
    top_ = join(top_, a);
  }
}

FiniteLattice FiniteLattice::from_order(std::size_t n, const std::vector<std::pair<Elem, Elem>>& leq,
                                        std::vector<std::string> labels) {
  if (n == 0) throw Error("a lattice needs at least one element");
  check_cap(n);
  const std::size_t w = words_for(n);
  Bits up(n * w, 0), down(n * w, 0);
  auto set = [w](Bits& m, std::size_t i, std::size_t j) { m[i * w + (j >> 6)] |= 1ull << (j & 63); };
  auto get = [w](const Bits& m, std::size_t i, std::size_t j) { return (m[i * w + (j >> 6)] >> (j & 63)) & 1u; };
  for (std::size_t i = 0; i < n; ++i) set(up, i, i);
  for (auto [a, b] : leq) {
    if (a >= n || b >= n) throw Error("order pair out of range");
    set(up, a, b);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (get(up, i, k))
        for (std::size_t x = 0; x < w; ++x) up[i * w + x] |= up[k * w + x];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (get(up, i, j)) {
        if (i != j && get(up, j, i))
          throw Error("order has a cycle through " + elem_name(labels, Elem(i)) + " and " + elem_name(labels, Elem(j)));
        set(down, j, i);
      }

  auto bound = [&](const Bits& rel, std::size_t a, std::size_t b) -> std::optional<Elem> {
    Bits s(w);
    std::size_t best = n, best_count = 0;
    for (std::size_t x = 0; x < w; ++x) s[x] = rel[a * w + x] & rel[b * w + x];
    for (std::size_t x = 0; x < w; ++x)
      for (std::uint64_t m = s[x]; m; m &= m - 1) {
        std::size_t c = x * 64 + std::countr_zero(m);
        std::size_t cnt = 0;
        for (std::size_t y = 0; y < w; ++y) cnt += std::popcount(rel[c * w + y]);
        if (best == n || cnt > best_count) best = c, best_count = cnt;
      }
    if (best == n) return std::nullopt;
    for (std::size_t x = 0; x < w; ++x)
      if ((s[x] & rel[best * w + x]) != s[x]) return std::nullopt;
    return Elem(best);
  };

  FiniteLattice L;
  L.n_ = n;
  L.words_ = w;
  L.order_ = up;
  L.join_.assign(n * n, 0);
  L.meet_.assign(n * n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      auto j = bound(up, a, b);
      if (!j) throw Error("not a lattice: no supremum of " + elem_name(labels, Elem(a)) + " and " + elem_name(labels, Elem(b)));
      auto m = bound(down, a, b);
      if (!m) throw Error("not a lattice: no infimum of " + elem_name(labels, Elem(a)) + " and " + elem_name(labels, Elem(b)));
      L.join_[a * n + b] = L.join_[b * n + a] = *j;
      L.meet_[a * n + b] = L.meet_[b * n + a] = *m;
    }
  L.finish(std::move(labels));
  return L;
}

FiniteLattice FiniteLattice::from_tables(std::size_t n, std::vector<Elem> join, std::vector<Elem> meet,
                                         std::vector<std::string> labels) {
  if (n == 0) throw Error("a lattice needs at least one element");
  check_cap(n);
  if (join.size() != n * n || meet.size() != n * n) throw Error("table size mismatch");
  FiniteLattice L;
  L.n_ = n;
  L.words_ = words_for(n);
  L.order_.assign(n * L.words_, 0);
  L.join_ = std::move(join);
  L.meet_ = std::move(meet);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (L.join_[a * n + b] == b) L.order_[a * L.words_ + (b >> 6)] |= 1ull << (b & 63);
  L.finish(std::move(labels));
  return L;
}

FiniteLattice FiniteLattice::chain(std::size_t n) {
  std::vector<std::pair<Elem, Elem>> rel;
  for (Elem i = 0; i + 1 < n; ++i) rel.emplace_back(i, i + 1);
  return from_order(n, rel);
}

std::optional<Elem> FiniteLattice::find(const std::string& label) const {
  for (Elem a = 0; a < n_; ++a)
    if (labels_[a] == label) return a;
  return std::nullopt;
}

std::vector<Elem> FiniteLattice::covers(Elem a) const {
  std::vector<Elem> out;
  for (Elem b = 0; b < n_; ++b) {
    if (b == a || !leq(a, b)) continue;
    bool cover = true;
    for (Elem c = 0; c < n_ && cover; ++c)
      if (c != a && c != b && leq(a, c) && leq(c, b)) cover = false;
    if (cover) out.push_back(b);
  }
  return out;
}

std::size_t FiniteLattice::height() const {
  std::vector<Elem> order(n_);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> below(n_, 0);
  for (Elem a = 0; a < n_; ++a)
    for (Elem b = 0; b < n_; ++b) below[a] += leq(b, a);
  std::sort(order.begin(), order.end(), [&](Elem x, Elem y) { return below[x] < below[y]; });
  std::vector<std::size_t> h(n_, 0);
  for (Elem a : order)
    for (Elem b = 0; b < n_; ++b)
      if (b != a && leq(b, a)) h[a] = std::max(h[a], h[b] + 1);
  return h[top_];
}

std::optional<Triple> is_modular_serial(const FiniteLattice& L) {
  const Elem n = Elem(L.size());
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y)
      for (Elem z = 0; z < n; ++z) {
        Elem xz = L.meet(x, z);
        if (L.meet(x, L.join(y, xz)) != L.join(L.meet(x, y), xz)) return Triple{x, y, z};
      }
  return std::nullopt;
}

std::optional<Triple> is_modular(const FiniteLattice& L, const SearchOptions& opts) {
  if (opts.jobs <= 1) return is_modular_serial(L);
  const Elem n = Elem(L.size());
  std::atomic<std::int64_t> best{std::int64_t(n)};
  std::vector<Triple> found(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(opts.jobs)
  for (std::int64_t xi = 0; xi < std::int64_t(n); ++xi) {
    if (xi > best.load(std::memory_order_relaxed)) continue;
    Elem x = Elem(xi);
    bool hit = false;
    for (Elem y = 0; y < n && !hit; ++y)
      for (Elem z = 0; z < n && !hit; ++z) {
        Elem xz = L.meet(x, z);
        if (L.meet(x, L.join(y, xz)) != L.join(L.meet(x, y), xz)) {
          found[x] = Triple{x, y, z};
          hit = true;
        }
      }
    if (hit) {
      std::int64_t cur = best.load();
      while (xi < cur && !best.compare_exchange_weak(cur, xi)) {
      }
    }
  }
  if (best.load() == std::int64_t(n)) return std::nullopt;
  return found[std::size_t(best.load())];
}

std::optional<Triple> find_pentagon(const FiniteLattice& L) {
  const Elem n = Elem(L.size());
  for (Elem a = 0; a < n; ++a)
    for (Elem c = 0; c < n; ++c) {
      if (a == c || !L.leq(a, c)) continue;
      for (Elem b = 0; b < n; ++b)
        if (L.join(a, b) == L.join(c, b) && L.meet(a, b) == L.meet(c, b)) return Triple{a, b, c};
    }
  return std::nullopt;
}

std::optional<std::string> check_lattice_axioms(const FiniteLattice& L, std::uint64_t seed) {
  const Elem n = Elem(L.size());
  auto tri = [&](Elem a, Elem b, Elem c) -> std::optional<std::string> {
    auto at = [&](const char* ax) {
      return std::string(ax) + " fails at (" + L.label(a) + ", " + L.label(b) + ", " + L.label(c) + ")";
    };
    if (L.join(a, b) != L.join(b, a)) return at("join commutativity");
    if (L.meet(a, b) != L.meet(b, a)) return at("meet commutativity");
    if (L.join(L.join(a, b), c) != L.join(a, L.join(b, c))) return at("join associativity");
    if (L.meet(L.meet(a, b), c) != L.meet(a, L.meet(b, c))) return at("meet associativity");
    if (L.join(a, a) != a) return at("join idempotency");
    if (L.meet(a, a) != a) return at("meet idempotency");
    if (L.join(a, L.meet(a, b)) != a) return at("join absorption");
    if (L.meet(a, L.join(a, b)) != a) return at("meet absorption");
    if (L.leq(a, b) != (L.join(a, b) == b)) return at("order consistency");
    return std::nullopt;
  };
  if (n <= 200) {
    for (Elem a = 0; a < n; ++a)
      for (Elem b = 0; b < n; ++b)
        for (Elem c = 0; c < n; ++c)
          if (auto f = tri(a, b, c)) return f;
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Elem> pick(0, n - 1);
    for (int i = 0; i < 100000; ++i)
      if (auto f = tri(pick(rng), pick(rng), pick(rng))) return f;
  }
  if (L.join(L.bottom(), L.top()) != L.top()) return std::string("bounds inconsistent");
  return std::nullopt;
}

FiniteLattice interval(const FiniteLattice& L, Elem a, Elem b, std::vector<Elem>* embedding) {
  if (!L.leq(a, b)) throw Error("interval endpoints out of order: " + L.label(a) + " is not below " + L.label(b));
  std::vector<Elem> els;
  std::vector<Elem> index(L.size(), Elem(-1));
  for (Elem c = 0; c < L.size(); ++c)
    if (L.leq(a, c) && L.leq(c, b)) {
      index[c] = Elem(els.size());
      els.push_back(c);
    }
  const std::size_t m = els.size();
  std::vector<Elem> join(m * m), meet(m * m);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < m; ++i) {
    labels.push_back(L.label(els[i]));
    for (std::size_t j = 0; j < m; ++j) {
      join[i * m + j] = index[L.join(els[i], els[j])];
      meet[i * m + j] = index[L.meet(els[i], els[j])];
    }
  }
  if (embedding) *embedding = els;
  return FiniteLattice::from_tables(m, std::move(join), std::move(meet), std::move(labels));
}

FiniteLattice product(const FiniteLattice& A, const FiniteLattice& B) {
  const std::size_t na = A.size(), nb = B.size(), n = na * nb;
  check_cap(n);
  std::vector<Elem> join(n * n), meet(n * n);
  std::vector<std::string> labels(n);
  for (Elem a = 0; a < na; ++a)
    for (Elem b = 0; b < nb; ++b) {
      Elem x = Elem(a * nb + b);
      labels[x] = "(" + A.label(a) + "," + B.label(b) + ")";
      for (Elem c = 0; c < na; ++c)
        for (Elem d = 0; d < nb; ++d) {
          Elem y = Elem(c * nb + d);
          join[x * n + y] = Elem(A.join(a, c) * nb + B.join(b, d));
          meet[x * n + y] = Elem(A.meet(a, c) * nb + B.meet(b, d));
        }
    }
  return FiniteLattice::from_tables(n, std::move(join), std::move(meet), std::move(labels));
}

bool isomorphic(const FiniteLattice& A, const FiniteLattice& B) {
  const std::size_t n = A.size();
  if (B.size() != n) return false;
  // Invariant per element: (#below, #above, #covers).
  auto sig = [](const FiniteLattice& L, Elem a) {
    std::size_t below = 0, above = 0;
    for (Elem b = 0; b < L.size(); ++b) below += L.leq(b, a), above += L.leq(a, b);
    return std::array<std::size_t, 3>{below, above, L.covers(a).size()};
  };
  std::vector<std::array<std::size_t, 3>> sa(n), sb(n);
  for (Elem a = 0; a < n; ++a) sa[a] = sig(A, a), sb[a] = sig(B, a);
  {
    auto x = sa, y = sb;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    if (x != y) return false;
  }
  std::vector<Elem> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Elem x, Elem y) { return sa[x][0] < sa[y][0]; });
  std::vector<Elem> map(n, Elem(-1));
  std::vector<bool> used(n, false);
  std::function<bool(std::size_t)> go = [&](std::size_t k) -> bool {
    if (k == n) return true;
    Elem a = order[k];
    for (Elem b = 0; b < n; ++b) {
      if (used[b] || sb[b] != sa[a]) continue;
      bool ok = true;
      for (std::size_t i = 0; i < k && ok; ++i) {
        Elem a2 = order[i], b2 = map[a2];
        ok = A.leq(a2, a) == B.leq(b2, b) && A.leq(a, a2) == B.leq(b, b2);
      }
      if (!ok) continue;
      map[a] = b;
      used[b] = true;
      if (go(k + 1)) return true;
      used[b] = false;
    }
    map[a] = Elem(-1);
    return false;
  };
  return go(0);
}

namespace {

// Straight-line program evaluating a term over lattice tables.
struct Program {
  enum Op : std::uint8_t { Load, Join, Meet };
  struct Instr {
    Op op;
    std::uint32_t a, b;
  };
  std::vector<Instr> code;
  std::uint32_t result = 0;

  static Program compile(const Term& t, const std::vector<std::string>& vars) {
    Program p;
    std::unordered_map<const void*, std::uint32_t> memo;
    std::function<std::uint32_t(const Term&)> go = [&](const Term& x) -> std::uint32_t {
      if (auto it = memo.find(x.id()); it != memo.end()) return it->second;
      std::uint32_t r;
      switch (x.kind()) {
        case Kind::Var:
        case Kind::Const: {
          auto it = std::find(vars.begin(), vars.end(), x.name());
          if (it == vars.end()) throw Error("unmapped symbol '" + x.name() + "'");
          p.code.push_back({Load, std::uint32_t(it - vars.begin()), 0});
          r = std::uint32_t(p.code.size() - 1);
          break;
        }
        case Kind::Join:
        case Kind::Meet: {
          Op op = x.kind() == Kind::Join ? Join : Meet;
          r = go(x.children()[0]);
          for (std::size_t i = 1; i < x.children().size(); ++i) {
            std::uint32_t c = go(x.children()[i]);
            p.code.push_back({op, r, c});
            r = std::uint32_t(p.code.size() - 1);
          }
          break;
        }
        default:
          throw Error("cannot evaluate opaque slot '" + x.name() + "'");
      }
      memo.emplace(x.id(), r);
      return r;
    };
    p.result = go(t);
    return p;
  }

  Elem run(const FiniteLattice& L, const Elem* assign, std::vector<Elem>& regs) const {
    regs.resize(code.size());
    for (std::size_t i = 0; i < code.size(); ++i) {
      const Instr& in = code[i];
      switch (in.op) {
        case Load: regs[i] = assign[in.a]; break;
        case Join: regs[i] = L.join(regs[in.a], regs[in.b]); break;
        case Meet: regs[i] = L.meet(regs[in.a], regs[in.b]); break;
      }
    }
    return regs[result];
  }
};

std::uint64_t total_assignments(std::size_t n, std::size_t k) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (total > std::numeric_limits<std::uint64_t>::max() / n) throw Error("assignment space too large");
    total *= n;
  }
  return total;
}

void decode(std::uint64_t idx, std::size_t n, std::vector<Elem>& digits) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    digits[i] = Elem(idx % n);
    idx /= n;
  }
}

using Hypotheses = std::vector<std::pair<Program, Program>>;

// Scans [lo, hi) and returns the first index where every hypothesis holds
// and s != t, or hi.
std::uint64_t scan(const FiniteLattice& L, const Program& ps, const Program& pt, const Hypotheses& hyps,
                   std::size_t k, std::uint64_t lo, std::uint64_t hi, const std::atomic<std::uint64_t>* stop) {
  const std::size_t n = L.size();
  std::vector<Elem> digits(k), rs, rt;
  decode(lo, n, digits);
  for (std::uint64_t idx = lo; idx < hi; ++idx) {
    if (stop && (idx & 1023) == 0 && stop->load(std::memory_order_relaxed) < idx) return hi;
    bool premises = true;
    for (const auto& [a, b] : hyps)
      if (a.run(L, digits.data(), rs) != b.run(L, digits.data(), rt)) {
        premises = false;
        break;
      }
    if (premises && ps.run(L, digits.data(), rs) != pt.run(L, digits.data(), rt)) return idx;
    for (std::size_t i = k; i-- > 0;) {
      if (++digits[i] < n) break;
      digits[i] = 0;
    }
  }
  return hi;
}

IdentityResult finish_identity(std::uint64_t first, std::uint64_t total, std::size_t n, std::size_t k) {
  IdentityResult r;
  if (first >= total) {
    r.assignments_checked = total;
    return r;
  }
  r.holds = false;
  r.counterexample.resize(k);
  decode(first, n, r.counterexample);
  r.assignments_checked = first + 1;
  return r;
}

IdentityResult search(const FiniteLattice& L, const std::vector<std::pair<Term, Term>>& antecedent, const Term& s,
                      const Term& t, const std::vector<std::string>& vars, int jobs) {
  Program ps = Program::compile(s, vars), pt = Program::compile(t, vars);
  Hypotheses hyps;
  for (const auto& [a, b] : antecedent) hyps.emplace_back(Program::compile(a, vars), Program::compile(b, vars));
  const std::uint64_t total = total_assignments(L.size(), vars.size());
  const std::size_t k = vars.size();
  if (jobs <= 1 || total < 4096) return finish_identity(scan(L, ps, pt, hyps, k, 0, total, nullptr), total, L.size(), k);
  const std::uint64_t chunk = std::max<std::uint64_t>(1024, total / (std::uint64_t(jobs) * 64));
  const std::int64_t chunks = std::int64_t((total + chunk - 1) / chunk);
  std::atomic<std::uint64_t> best{total};
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs)
  for (std::int64_t c = 0; c < chunks; ++c) {
    std::uint64_t lo = std::uint64_t(c) * chunk, hi = std::min(total, lo + chunk);
    if (lo > best.load(std::memory_order_relaxed)) continue;
    std::uint64_t f = scan(L, ps, pt, hyps, k, lo, hi, &best);
    if (f < hi) {
      std::uint64_t cur = best.load();
      while (f < cur && !best.compare_exchange_weak(cur, f)) {
      }
    }
  }
  return finish_identity(best.load(), total, L.size(), k);
}

}  // namespace

IdentityResult holds_identity_serial(const FiniteLattice& L, const Term& s, const Term& t,
                                     const std::vector<std::string>& vars) {
  return search(L, {}, s, t, vars, 1);
}

IdentityResult holds_identity(const FiniteLattice& L, const Term& s, const Term& t,
                              const std::vector<std::string>& vars, const SearchOptions& opts) {
  return search(L, {}, s, t, vars, opts.jobs);
}

IdentityResult holds_quasi_identity_serial(const FiniteLattice& L, const std::vector<std::pair<Term, Term>>& antecedent,
                                           const Term& s, const Term& t, const std::vector<std::string>& vars) {
  return search(L, antecedent, s, t, vars, 1);
}

IdentityResult holds_quasi_identity(const FiniteLattice& L, const std::vector<std::pair<Term, Term>>& antecedent,
                                    const Term& s, const Term& t, const std::vector<std::string>& vars,
                                    const SearchOptions& opts) {
  return search(L, antecedent, s, t, vars, opts.jobs);
}

nlohmann::json to_json(const FiniteLattice& L) {
  static const char* hex = "0123456789abcdef";
  nlohmann::json j;
  j["n"] = L.size();
  j["leq"] = nlohmann::json::array();
  for (Elem a = 0; a < L.size(); ++a) {
    // Nibble k holds bits 4k..4k+3, least significant first.
    std::vector<unsigned> nib((L.size() + 3) / 4, 0);
    for (Elem b = 0; b < L.size(); ++b)
      if (L.leq(a, b)) nib[b / 4] |= 1u << (b % 4);
    std::string row;
    for (unsigned v : nib) row += hex[v];
    j["leq"].push_back(row);
  }
  j["labels"] = L.labels();
  return j;
}

FiniteLattice lattice_from_json(const nlohmann::json& j) {
  std::size_t n = j.at("n").get<std::size_t>();
  std::vector<std::pair<Elem, Elem>> rel;
  const auto& rows = j.at("leq");
  if (rows.size() != n) throw Error("leq must have one row per element");
  for (Elem a = 0; a < n; ++a) {
    std::string row = rows[a].get<std::string>();
    if (row.size() != (n + 3) / 4) throw Error("leq row " + std::to_string(a) + " has wrong length");
    for (Elem b = 0; b < n; ++b) {
      char c = char(std::tolower(static_cast<unsigned char>(row[b / 4])));
      auto v = std::string("0123456789abcdef").find(c);
      if (v == std::string::npos) throw Error("leq row " + std::to_string(a) + " is not hex");
      if ((v >> (b % 4)) & 1u) rel.emplace_back(a, b);
    }
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j["labels"].get<std::vector<std::string>>();
  return FiniteLattice::from_order(n, rel, std::move(labels));
}

FiniteLattice make_m3() {
  return FiniteLattice::from_order(5, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 4}, {3, 4}}, {"0", "a", "b", "c", "1"});
}

FiniteLattice make_n5() {
  // 0 < a < c < 1, 0 < b < 1.
  return FiniteLattice::from_order(5, {{0, 1}, {1, 3}, {3, 4}, {0, 2}, {2, 4}}, {"0", "a", "b", "c", "1"});
}

FiniteLattice make_boolean(std::size_t atoms) {
  const std::size_t n = std::size_t(1) << atoms;
  std::vector<Elem> join(n * n), meet(n * n);
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b) join[a * n + b] = a | b, meet[a * n + b] = a & b;
  return FiniteLattice::from_tables(n, std::move(join), std::move(meet));
}

}  // namespace modlat
