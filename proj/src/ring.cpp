#include "modlat/ring.hpp"

#include <algorithm>
#include <numeric>

#include "modlat/error.hpp"

namespace modlat {

std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

Group Group::from_cayley(std::vector<std::vector<std::uint32_t>> table, std::vector<std::string> names) {
  const std::size_t n = table.size();
  if (n == 0) throw Error("not a group: empty table");
  Group g;
  g.n_ = n;
  g.table_.resize(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    if (table[a].size() != n) throw Error("not a group: row " + std::to_string(a) + " has wrong length");
    for (std::size_t b = 0; b < n; ++b) {
      if (table[a][b] >= n) throw Error("not a group: entry out of range at (" + std::to_string(a) + "," + std::to_string(b) + ")");
      g.table_[a * n + b] = table[a][b];
    }
  }
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b)
      for (std::uint32_t c = 0; c < n; ++c)
        if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)))
          throw Error("not a group: associativity fails at (" + std::to_string(a) + "," + std::to_string(b) + "," +
                      std::to_string(c) + ")");
  bool found = false;
  for (std::uint32_t e = 0; e < n && !found; ++e) {
    bool ok = true;
    for (std::uint32_t a = 0; a < n && ok; ++a) ok = g.mul(e, a) == a && g.mul(a, e) == a;
    if (ok) g.id_ = e, found = true;
  }
  if (!found) throw Error("not a group: no identity element");
  g.inv_.assign(n, 0);
  for (std::uint32_t a = 0; a < n; ++a) {
    bool ok = false;
    for (std::uint32_t b = 0; b < n && !ok; ++b)
      if (g.mul(a, b) == g.id_ && g.mul(b, a) == g.id_) g.inv_[a] = b, ok = true;
    if (!ok) throw Error("not a group: element " + std::to_string(a) + " has no inverse");
  }
  if (names.empty())
    for (std::size_t a = 0; a < n; ++a) names.push_back("g" + std::to_string(a));
  if (names.size() != n) throw Error("group name count differs from order");
  g.names_ = std::move(names);
  return g;
}

Group Group::cyclic(std::size_t m) {
  if (m == 0) throw Error("cyclic group order must be positive");
  std::vector<std::vector<std::uint32_t>> t(m, std::vector<std::uint32_t>(m));
  std::vector<std::string> names;
  for (std::size_t a = 0; a < m; ++a) {
    names.push_back(a == 0 ? "e" : (a == 1 ? "g" : "g^" + std::to_string(a)));
    for (std::size_t b = 0; b < m; ++b) t[a][b] = std::uint32_t((a + b) % m);
  }
  return from_cayley(std::move(t), std::move(names));
}

Group Group::symmetric3() {
  std::vector<std::array<int, 3>> perms;
  std::array<int, 3> p{0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  const std::size_t n = perms.size();
  std::vector<std::vector<std::uint32_t>> t(n, std::vector<std::uint32_t>(n));
  std::vector<std::string> names;
  for (std::size_t a = 0; a < n; ++a) {
    names.push_back(std::to_string(perms[a][0]) + std::to_string(perms[a][1]) + std::to_string(perms[a][2]));
    for (std::size_t b = 0; b < n; ++b) {
      // (ab)(x) = a(b(x))
      std::array<int, 3> c{perms[a][perms[b][0]], perms[a][perms[b][1]], perms[a][perms[b][2]]};
      t[a][b] = std::uint32_t(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  }
  return from_cayley(std::move(t), std::move(names));
}

std::vector<std::vector<std::uint32_t>> Group::cayley() const {
  std::vector<std::vector<std::uint32_t>> t(n_, std::vector<std::uint32_t>(n_));
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t b = 0; b < n_; ++b) t[a][b] = table_[a * n_ + b];
  return t;
}

FiniteRing::FiniteRing(std::uint32_t p, unsigned k, Group g) : p_(p), k_(k), mod_(ipow(p, k)), g_(std::move(g)) {
  if (p < 2 || k < 1) throw Error("ring modulus must be p^k with p >= 2, k >= 1");
  for (std::uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) throw Error(std::to_string(p) + " is not prime");
}

std::uint64_t FiniteRing::size() const { return ipow(mod_, unsigned(dim())); }

FiniteRing::Elt FiniteRing::one() const { return basis(g_.identity()); }

FiniteRing::Elt FiniteRing::basis(std::uint32_t g) const {
  Elt e = zero();
  e.at(g) = 1;
  return e;
}

FiniteRing::Elt FiniteRing::scalar(std::int64_t s) const {
  Elt e = zero();
  std::int64_t m = std::int64_t(mod_);
  e[g_.identity()] = std::uint32_t(((s % m) + m) % m);
  return e;
}

FiniteRing::Elt FiniteRing::add(const Elt& a, const Elt& b) const {
  Elt r(dim());
  for (std::size_t i = 0; i < dim(); ++i) r[i] = std::uint32_t((a[i] + b[i]) % mod_);
  return r;
}

FiniteRing::Elt FiniteRing::neg(const Elt& a) const {
  Elt r(dim());
  for (std::size_t i = 0; i < dim(); ++i) r[i] = std::uint32_t((mod_ - a[i]) % mod_);
  return r;
}

FiniteRing::Elt FiniteRing::mul(const Elt& a, const Elt& b) const {
  Elt r = zero();
  for (std::uint32_t g = 0; g < dim(); ++g) {
    if (!a[g]) continue;
    for (std::uint32_t h = 0; h < dim(); ++h) {
      if (!b[h]) continue;
      auto gh = g_.mul(g, h);
      r[gh] = std::uint32_t((r[gh] + std::uint64_t(a[g]) * b[h]) % mod_);
    }
  }
  return r;
}

FiniteRing::Elt FiniteRing::pow(const Elt& a, unsigned e) const {
  Elt r = one();
  while (e--) r = mul(r, a);
  return r;
}

bool FiniteRing::is_unit(const Elt& a) const {
  const Elt e = one();
  for (std::uint64_t i = 0; i < size(); ++i) {
    Elt b = element(i);
    if (mul(a, b) == e && mul(b, a) == e) return true;
  }
  return false;
}

std::uint64_t FiniteRing::index(const Elt& a) const {
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < dim(); ++i) idx = idx * mod_ + a[i];
  return idx;
}

FiniteRing::Elt FiniteRing::element(std::uint64_t idx) const {
  Elt r(dim());
  for (std::size_t i = dim(); i-- > 0;) {
    r[i] = std::uint32_t(idx % mod_);
    idx /= mod_;
  }
  return r;
}

std::string FiniteRing::str(const Elt& a) const {
  std::string s;
  for (std::uint32_t g = 0; g < dim(); ++g) {
    if (!a[g]) continue;
    if (!s.empty()) s += "+";
    bool unit_g = g == g_.identity();
    if (a[g] != 1 || unit_g) s += std::to_string(a[g]);
    if (!unit_g) s += g_.name(g);
  }
  return s.empty() ? "0" : s;
}

FiniteRing group_algebra(std::uint32_t p, unsigned k, const std::vector<std::vector<std::uint32_t>>& cayley) {
  return FiniteRing(p, k, Group::from_cayley(cayley));
}

}  // namespace modlat
