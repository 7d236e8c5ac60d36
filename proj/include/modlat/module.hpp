#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "modlat/oracle.hpp"
#include "modlat/ring.hpp"

#include <json.hpp>

namespace modlat {

class FiniteModule;

// A submodule stored as the Howell normal form of its generating rows
// together with the module's relation rows. Equal submodules have equal
// matrices. The owning module must outlive the handle.
class Submodule {
 public:
  Submodule() = default;
  const FiniteModule* module() const { return M_; }
  std::size_t rows() const;
  const std::vector<std::uint32_t>& data() const { return data_; }
  friend bool operator==(const Submodule& a, const Submodule& b) { return a.M_ == b.M_ && a.data_ == b.data_; }
  std::size_t hash() const;

 private:
  friend class FiniteModule;
  const FiniteModule* M_ = nullptr;
  std::vector<std::uint32_t> data_;
};

// Rows of residues mod N = p^K, reduced to Howell normal form in place.
// Zero rows are dropped.
void howell_form(std::vector<std::vector<std::uint64_t>>& rows, std::size_t cols, std::uint32_t p, unsigned K);

// Left R-module R^rank / (relations), R = Z/p^k[G]. Elements are coefficient
// vectors of length rank·|G|, block i holding the component of e_i.
class FiniteModule final : public LatticeOracle<Submodule> {
 public:
  using Vec = std::vector<std::int64_t>;
  struct Rel {
    std::int64_t scalar;
    std::size_t basis_index;
  };
  static constexpr std::size_t kDefaultEnumBound = std::size_t(1) << 14;

  FiniteModule(FiniteRing R, std::size_t rank, std::vector<Rel> relations = {});
  FiniteModule(const FiniteModule&) = delete;
  FiniteModule& operator=(const FiniteModule&) = delete;

  const FiniteRing& ring() const { return R_; }
  std::size_t rank() const { return rank_; }
  std::size_t dim() const { return rank_ * R_.dim(); }
  // e_i has additive order p^exponent(i).
  unsigned exponent(std::size_t i) const { return exps_.at(i); }
  bool is_free(std::size_t i) const { return exponent(i) == R_.k(); }
  // |M|, or 0 if it does not fit in 64 bits.
  std::uint64_t order() const;

  Vec zero_vec() const { return Vec(dim(), 0); }
  Vec e(std::size_t i) const;
  Vec act(const FiniteRing::Elt& r, const Vec& v) const;
  Vec add(const Vec& a, const Vec& b) const;
  Vec scale(std::int64_t s, const Vec& v) const;
  Vec sub(const Vec& a, const Vec& b) const { return add(a, scale(-1, b)); }
  // Linear combination Σ s_i e_i with integer scalars.
  Vec combo(const std::vector<std::pair<std::int64_t, std::size_t>>& terms) const;

  Submodule submodule(const std::vector<Vec>& generators) const;
  Submodule zero() const { return submodule({}); }
  Submodule full() const;
  Submodule cyclic(const Vec& v) const { return submodule({v}); }
  Submodule sum(const Submodule& a, const Submodule& b) const;
  Submodule intersect(const Submodule& a, const Submodule& b) const;
  bool contains(const Submodule& X, const Vec& v) const;
  // Every element of X (at most the enumeration bound).
  std::vector<Vec> elements(const Submodule& X, std::size_t bound = kDefaultEnumBound) const;
  std::vector<Vec> all_elements(std::size_t bound = kDefaultEnumBound) const;
  std::uint64_t size(const Submodule& X) const;
  // Complete duplicate-free list of submodules, zero first.
  std::vector<Submodule> all_submodules(std::size_t bound = kDefaultEnumBound) const;
  // Submodules of `top`, zero first.
  std::vector<Submodule> submodules_of(const Submodule& top, std::size_t bound = kDefaultEnumBound) const;

  bool equal(const Submodule& a, const Submodule& b) const override { return a == b; }
  Submodule join(const Submodule& a, const Submodule& b) const override { return sum(a, b); }
  Submodule meet(const Submodule& a, const Submodule& b) const override { return intersect(a, b); }
  bool leq(const Submodule& a, const Submodule& b) const override;
  std::size_t hash(const Submodule& a) const override { return a.hash(); }
  std::string label(const Submodule& a) const override;

  // Generating rows with relation rows removed.
  std::vector<Vec> generators(const Submodule& X) const;
  nlohmann::json to_json(const Submodule& X) const;

 private:
  void check_mine(const Submodule& X) const;
  Submodule from_rows(std::vector<std::vector<std::uint64_t>> rows) const;
  std::vector<std::uint64_t> reduce(const Vec& v) const;

  FiniteRing R_;
  std::size_t rank_;
  std::vector<unsigned> exps_;
  std::vector<std::vector<std::uint64_t>> relation_rows_;
};

// Z-module ⊕ Z/p^{k_i} as a module over Z/p^{max k_i}.
std::unique_ptr<FiniteModule> abelian_group(std::uint32_t p, const std::vector<unsigned>& exponents);

// {p, k, cayley, rank, relations: [{scalar, basis_index}]}.
std::unique_ptr<FiniteModule> module_from_json(const nlohmann::json& j);

}  // namespace modlat
