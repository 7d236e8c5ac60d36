#include "modlat/module.hpp"

#include <algorithm>

#include "modlat/error.hpp"

namespace modlat {

namespace {

using Row = std::vector<std::uint64_t>;

unsigned valuation(std::uint64_t x, std::uint32_t p) {
  unsigned v = 0;
  while (x % p == 0) x /= p, ++v;
  return v;
}

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t n) {
  std::int64_t t = 0, nt = 1, r = std::int64_t(n), nr = std::int64_t(a % n);
  while (nr) {
    std::int64_t q = r / nr;
    t = std::exchange(nt, t - q * nt);
    r = std::exchange(nr, r - q * nr);
  }
  if (r != 1) throw Error("element not invertible");
  return std::uint64_t(t < 0 ? t + std::int64_t(n) : t);
}

// a -= q * b (mod N)
void axpy(Row& a, std::uint64_t q, const Row& b, std::uint64_t N) {
  q %= N;
  if (!q) return;
  for (std::size_t j = 0; j < a.size(); ++j)
    if (b[j]) a[j] = (a[j] + N - (q * b[j]) % N) % N;
}

bool is_zero(const Row& r) {
  return std::all_of(r.begin(), r.end(), [](std::uint64_t x) { return x == 0; });
}

}  // namespace

void howell_form(std::vector<Row>& A, std::size_t cols, std::uint32_t p, unsigned K) {
  const std::uint64_t N = ipow(p, K);
  A.erase(std::remove_if(A.begin(), A.end(), is_zero), A.end());
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < A.size(); ++c) {
    std::size_t best = A.size();
    unsigned bv = K;
    for (std::size_t i = r; i < A.size(); ++i)
      if (A[i][c]) {
        unsigned v = valuation(A[i][c], p);
        if (v < bv) bv = v, best = i;
      }
    if (best == A.size()) continue;
    std::swap(A[r], A[best]);
    const std::uint64_t pv = ipow(p, bv);
    const std::uint64_t u = inverse_mod(A[r][c] / pv, N);
    for (auto& x : A[r]) x = (x * u) % N;
    for (std::size_t i = r + 1; i < A.size(); ++i)
      if (A[i][c]) axpy(A[i], A[i][c] / pv, A[r], N);
    for (std::size_t i = 0; i < r; ++i)
      if (A[i][c] >= pv) axpy(A[i], A[i][c] / pv, A[r], N);
    if (bv > 0) {
      Row extra = A[r];
      const std::uint64_t s = ipow(p, K - bv);
      for (auto& x : extra) x = (x * s) % N;
      if (!is_zero(extra)) A.push_back(std::move(extra));
    }
    ++r;
  }
  A.resize(r);
}

std::size_t Submodule::rows() const { return M_ ? data_.size() / M_->dim() : 0; }

std::size_t Submodule::hash() const {
  std::size_t h = 1469598103934665603ull;
  for (auto x : data_) h = (h ^ x) * 1099511628211ull;
  return h;
}

FiniteModule::FiniteModule(FiniteRing R, std::size_t rank, std::vector<Rel> relations)
    : R_(std::move(R)), rank_(rank), exps_(rank, R_.k()) {
  if (rank == 0) throw Error("module rank must be positive");
  for (const auto& rel : relations) {
    if (rel.basis_index >= rank) throw Error("relation basis index out of range");
    std::int64_t s = rel.scalar < 0 ? -rel.scalar : rel.scalar;
    unsigned v = s == 0 ? R_.k() : std::min(valuation(std::uint64_t(s), R_.p()), R_.k());
    exps_[rel.basis_index] = std::min(exps_[rel.basis_index], v);
  }
  const std::size_t m = R_.dim();
  for (std::size_t i = 0; i < rank; ++i) {
    if (exps_[i] == R_.k()) continue;
    for (std::size_t g = 0; g < m; ++g) {
      Row row(dim(), 0);
      row[i * m + g] = ipow(R_.p(), exps_[i]) % R_.modulus();
      relation_rows_.push_back(std::move(row));
    }
  }
}

std::uint64_t FiniteModule::order() const {
  unsigned total = 0;
  for (unsigned e : exps_) total += e * unsigned(R_.dim());
  unsigned bits = 0;
  for (std::uint64_t q = R_.p(); q > 1; q >>= 1) ++bits;
  if (std::uint64_t(total) * bits >= 63) return 0;
  return ipow(R_.p(), total);
}

FiniteModule::Vec FiniteModule::e(std::size_t i) const {
  if (i >= rank_) throw Error("basis index out of range");
  Vec v = zero_vec();
  v[i * R_.dim() + R_.group().identity()] = 1;
  return v;
}

FiniteModule::Vec FiniteModule::act(const FiniteRing::Elt& r, const Vec& v) const {
  if (v.size() != dim()) throw Error("vector of wrong dimension");
  const std::size_t m = R_.dim();
  const std::int64_t N = std::int64_t(R_.modulus());
  Vec out = zero_vec();
  for (std::size_t i = 0; i < rank_; ++i)
    for (std::uint32_t g = 0; g < m; ++g) {
      if (!r[g]) continue;
      for (std::uint32_t h = 0; h < m; ++h) {
        std::int64_t x = v[i * m + h];
        if (!x) continue;
        auto& dst = out[i * m + R_.group().mul(g, h)];
        dst = (dst + std::int64_t(r[g]) * x) % N;
      }
    }
  for (auto& x : out) x = (x % N + N) % N;
  return out;
}

FiniteModule::Vec FiniteModule::add(const Vec& a, const Vec& b) const {
  const std::int64_t N = std::int64_t(R_.modulus());
  Vec out(dim());
  for (std::size_t j = 0; j < dim(); ++j) out[j] = ((a.at(j) + b.at(j)) % N + N) % N;
  return out;
}

FiniteModule::Vec FiniteModule::scale(std::int64_t s, const Vec& v) const {
  const std::int64_t N = std::int64_t(R_.modulus());
  Vec out(dim());
  for (std::size_t j = 0; j < dim(); ++j) out[j] = (((s % N) * (v.at(j) % N)) % N + N) % N;
  return out;
}

FiniteModule::Vec FiniteModule::combo(const std::vector<std::pair<std::int64_t, std::size_t>>& terms) const {
  Vec v = zero_vec();
  for (auto [s, i] : terms) v = add(v, scale(s, e(i)));
  return v;
}

std::vector<std::uint64_t> FiniteModule::reduce(const Vec& v) const {
  if (v.size() != dim()) throw Error("vector of wrong dimension");
  const std::int64_t N = std::int64_t(R_.modulus());
  Row r(dim());
  for (std::size_t j = 0; j < dim(); ++j) r[j] = std::uint64_t(((v[j] % N) + N) % N);
  return r;
}

Submodule FiniteModule::from_rows(std::vector<Row> rows) const {
  for (const auto& rr : relation_rows_) rows.push_back(rr);
  howell_form(rows, dim(), R_.p(), R_.k());
  Submodule s;
  s.M_ = this;
  s.data_.reserve(rows.size() * dim());
  for (const auto& row : rows)
    for (auto x : row) s.data_.push_back(std::uint32_t(x));
  return s;
}

Submodule FiniteModule::submodule(const std::vector<Vec>& generators) const {
  std::vector<Row> rows;
  const std::size_t m = R_.dim();
  for (const auto& v : generators) {
    Row base = reduce(v);
    for (std::uint32_t g = 0; g < m; ++g) rows.push_back(reduce(act(R_.basis(g), Vec(base.begin(), base.end()))));
  }
  return from_rows(std::move(rows));
}

Submodule FiniteModule::full() const {
  std::vector<Vec> gens;
  for (std::size_t i = 0; i < rank_; ++i) gens.push_back(e(i));
  return submodule(gens);
}

void FiniteModule::check_mine(const Submodule& X) const {
  if (X.M_ != this) throw Error("submodule belongs to a different ambient module");
}

Submodule FiniteModule::sum(const Submodule& a, const Submodule& b) const {
  check_mine(a);
  check_mine(b);
  std::vector<Row> rows;
  const std::size_t d = dim();
  for (const auto* X : {&a, &b})
    for (std::size_t i = 0; i < X->rows(); ++i) rows.emplace_back(X->data_.begin() + i * d, X->data_.begin() + (i + 1) * d);
  return from_rows(std::move(rows));
}

Submodule FiniteModule::intersect(const Submodule& a, const Submodule& b) const {
  check_mine(a);
  check_mine(b);
  const std::size_t d = dim();
  std::vector<Row> rows;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Row r(2 * d);
    for (std::size_t j = 0; j < d; ++j) r[j] = r[d + j] = a.data_[i * d + j];
    rows.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < b.rows(); ++i) {
    Row r(2 * d, 0);
    for (std::size_t j = 0; j < d; ++j) r[j] = b.data_[i * d + j];
    rows.push_back(std::move(r));
  }
  howell_form(rows, 2 * d, R_.p(), R_.k());
  std::vector<Row> kept;
  for (const auto& r : rows)
    if (std::all_of(r.begin(), r.begin() + std::ptrdiff_t(d), [](std::uint64_t x) { return x == 0; }))
      kept.emplace_back(r.begin() + std::ptrdiff_t(d), r.end());
  return from_rows(std::move(kept));
}

bool FiniteModule::contains(const Submodule& X, const Vec& v) const {
  check_mine(X);
  const std::size_t d = dim();
  const std::uint64_t N = R_.modulus();
  Row x = reduce(v);
  std::size_t c = 0;
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const std::uint32_t* row = &X.data_[i * d];
    std::size_t pc = 0;
    while (!row[pc]) ++pc;
    for (; c < pc; ++c)
      if (x[c]) return false;
    if (x[pc] % row[pc]) return false;
    std::uint64_t q = x[pc] / row[pc];
    for (std::size_t j = pc; j < d; ++j) x[j] = (x[j] + N - (q * row[j]) % N) % N;
    c = pc + 1;
  }
  for (; c < d; ++c)
    if (x[c]) return false;
  return true;
}

bool FiniteModule::leq(const Submodule& a, const Submodule& b) const {
  check_mine(a);
  check_mine(b);
  const std::size_t d = dim();
  for (std::size_t i = 0; i < a.rows(); ++i)
    if (!contains(b, Vec(a.data_.begin() + i * d, a.data_.begin() + (i + 1) * d))) return false;
  return true;
}

std::uint64_t FiniteModule::size(const Submodule& X) const {
  check_mine(X);
  // |X| = Π over pivots of the additive order of the pivot entry; relation
  // rows are inside X and contribute the quotient correction.
  const std::size_t d = dim();
  const std::uint64_t N = R_.modulus();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < X.rows(); ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (X.data_[i * d + j]) {
        total *= N / X.data_[i * d + j];
        break;
      }
  std::uint64_t rel = 1;
  for (std::size_t i = 0; i < rank_; ++i) rel *= ipow(ipow(R_.p(), R_.k() - exps_[i]), unsigned(R_.dim()));
  return total / rel;
}

std::vector<FiniteModule::Vec> FiniteModule::all_elements(std::size_t bound) const {
  std::uint64_t n = order();
  if (n == 0 || n > size_bound(bound)) throw BoundExceeded("module too large to enumerate", std::size_t(n));
  const std::size_t m = R_.dim();
  std::vector<Vec> out;
  out.reserve(n);
  Vec v = zero_vec();
  for (std::uint64_t k = 0; k < n; ++k) {
    out.push_back(v);
    for (std::size_t j = dim(); j-- > 0;) {
      std::int64_t lim = std::int64_t(ipow(R_.p(), exps_[j / m]));
      if (++v[j] < lim) break;
      v[j] = 0;
    }
  }
  return out;
}

std::vector<FiniteModule::Vec> FiniteModule::elements(const Submodule& X, std::size_t bound) const {
  std::vector<Vec> out;
  for (auto& v : all_elements(bound))
    if (contains(X, v)) out.push_back(std::move(v));
  return out;
}

std::vector<Submodule> FiniteModule::all_submodules(std::size_t bound) const {
  return submodules_of(full(), bound);
}

std::vector<Submodule> FiniteModule::submodules_of(const Submodule& top, std::size_t bound) const {
  std::vector<Vec> els = elements(top, bound);
  HandleIndex<Submodule> cyc(*this);
  std::vector<Vec> gens;
  for (const auto& v : els)
    if (cyc.insert(cyclic(v)).second) gens.push_back(v);
  HandleIndex<Submodule> subs(*this);
  subs.insert(zero());
  const std::size_t cap = size_bound(bound);
  for (std::size_t i = 0; i < subs.size(); ++i) {
    const Submodule X = subs.items()[i];
    for (std::size_t c = 0; c < gens.size(); ++c) {
      if (contains(X, gens[c])) continue;
      subs.insert(sum(X, cyc.items()[c]));
      if (subs.size() > cap) throw BoundExceeded("too many submodules", subs.size());
    }
  }
  return subs.items();
}

std::vector<FiniteModule::Vec> FiniteModule::generators(const Submodule& X) const {
  check_mine(X);
  const std::size_t d = dim();
  Submodule z = zero();
  std::vector<Vec> out;
  for (std::size_t i = 0; i < X.rows(); ++i) {
    Vec v(X.data_.begin() + i * d, X.data_.begin() + (i + 1) * d);
    if (!contains(z, v)) out.push_back(std::move(v));
  }
  return out;
}

std::string FiniteModule::label(const Submodule& X) const {
  auto gens = generators(X);
  if (gens.empty()) return "<0>";
  std::string s = "<";
  for (std::size_t k = 0; k < gens.size(); ++k) {
    if (k) s += "|";
    for (std::size_t j = 0; j < gens[k].size(); ++j) s += (j ? " " : "") + std::to_string(gens[k][j]);
  }
  return s + ">";
}

nlohmann::json FiniteModule::to_json(const Submodule& X) const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& v : generators(X)) j.push_back(v);
  return j;
}

std::unique_ptr<FiniteModule> abelian_group(std::uint32_t p, const std::vector<unsigned>& exponents) {
  if (exponents.empty()) throw Error("abelian group needs at least one factor");
  unsigned K = *std::max_element(exponents.begin(), exponents.end());
  if (K == 0) throw Error("abelian group factors must be nontrivial");
  std::vector<FiniteModule::Rel> rels;
  for (std::size_t i = 0; i < exponents.size(); ++i)
    if (exponents[i] < K) rels.push_back({std::int64_t(ipow(p, exponents[i])), i});
  return std::make_unique<FiniteModule>(FiniteRing(p, K, Group::trivial()), exponents.size(), rels);
}

std::unique_ptr<FiniteModule> module_from_json(const nlohmann::json& j) {
  auto p = j.at("p").get<std::uint32_t>();
  auto k = j.value("k", 1u);
  Group g = j.contains("cayley") ? Group::from_cayley(j["cayley"].get<std::vector<std::vector<std::uint32_t>>>())
                                 : Group::trivial();
  std::vector<FiniteModule::Rel> rels;
  for (const auto& r : j.value("relations", nlohmann::json::array()))
    rels.push_back({r.at("scalar").get<std::int64_t>(), r.at("basis_index").get<std::size_t>()});
  return std::make_unique<FiniteModule>(FiniteRing(p, k, std::move(g)), j.at("rank").get<std::size_t>(), rels);
}

}  // namespace modlat
