#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace modlat {

// Finite group given by its Cayley table, table[a * n + b] = ab.
class Group {
 public:
  Group() = default;
  // Validates closure, associativity, identity and inverses.
  static Group from_cayley(std::vector<std::vector<std::uint32_t>> table, std::vector<std::string> names = {});
  static Group cyclic(std::size_t m);
  static Group symmetric3();
  static Group trivial() { return cyclic(1); }

  std::size_t order() const { return n_; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return table_[a * n_ + b]; }
  std::uint32_t identity() const { return id_; }
  std::uint32_t inverse(std::uint32_t a) const { return inv_[a]; }
  const std::string& name(std::uint32_t a) const { return names_[a]; }
  std::vector<std::vector<std::uint32_t>> cayley() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint32_t> table_;
  std::uint32_t id_ = 0;
  std::vector<std::uint32_t> inv_;
  std::vector<std::string> names_;
};

std::uint64_t ipow(std::uint64_t b, unsigned e);

// Group algebra Z/p^k[G]. Elements are coefficient vectors indexed by group
// elements. With G trivial this is Z/p^k.
class FiniteRing {
 public:
  using Elt = std::vector<std::uint32_t>;

  FiniteRing(std::uint32_t p, unsigned k, Group g);

  std::uint32_t p() const { return p_; }
  unsigned k() const { return k_; }
  std::uint64_t modulus() const { return mod_; }
  const Group& group() const { return g_; }
  std::size_t dim() const { return g_.order(); }
  // Number of ring elements, mod^dim.
  std::uint64_t size() const;

  Elt zero() const { return Elt(dim(), 0); }
  Elt one() const;
  Elt basis(std::uint32_t g) const;
  Elt scalar(std::int64_t s) const;
  Elt add(const Elt& a, const Elt& b) const;
  Elt neg(const Elt& a) const;
  Elt mul(const Elt& a, const Elt& b) const;
  Elt pow(const Elt& a, unsigned e) const;
  bool is_unit(const Elt& a) const;
  // Mixed-radix index of an element and back; used to enumerate the ring.
  std::uint64_t index(const Elt& a) const;
  Elt element(std::uint64_t idx) const;
  std::string str(const Elt& a) const;

 private:
  std::uint32_t p_;
  unsigned k_;
  std::uint64_t mod_;
  Group g_;
};

// group_algebra(p^k, cayley) in the module map.
FiniteRing group_algebra(std::uint32_t p, unsigned k, const std::vector<std::vector<std::uint32_t>>& cayley);

}  // namespace modlat
