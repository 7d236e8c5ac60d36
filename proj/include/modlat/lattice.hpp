#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modlat/term.hpp"

#include <json.hpp>

namespace modlat {

using Elem = std::uint32_t;

// Default cap on explicit lattice size; MODLAT_BOUND overrides it.
inline constexpr std::size_t kDefaultLatticeCap = 20000;

// Explicit finite lattice: order matrix as bit rows plus join/meet tables.
class FiniteLattice {
 public:
  FiniteLattice() = default;

  // Completes a finite poset (reflexive-transitive closure of the given
  // pairs) to a lattice. Throws with the first pair lacking a supremum or
  // infimum, or on a cycle.
  static FiniteLattice from_order(std::size_t n, const std::vector<std::pair<Elem, Elem>>& leq,
                                  std::vector<std::string> labels = {});
  // Wraps precomputed tables. The order is read off the join table.
  static FiniteLattice from_tables(std::size_t n, std::vector<Elem> join, std::vector<Elem> meet,
                                   std::vector<std::string> labels = {});
  // The chain 0 < 1 < ... < n-1.
  static FiniteLattice chain(std::size_t n);

  std::size_t size() const { return n_; }
  bool leq(Elem a, Elem b) const { return (order_[a * words_ + (b >> 6)] >> (b & 63)) & 1u; }
  Elem join(Elem a, Elem b) const { return join_[a * n_ + b]; }
  Elem meet(Elem a, Elem b) const { return meet_[a * n_ + b]; }
  Elem bottom() const { return bottom_; }
  Elem top() const { return top_; }
  const std::string& label(Elem a) const { return labels_[a]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<Elem> find(const std::string& label) const;
  // Upper covers of a.
  std::vector<Elem> covers(Elem a) const;
  // Length of the longest chain from bottom to top.
  std::size_t height() const;

 private:
  void finish(std::vector<std::string> labels);

  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> order_;
  std::vector<Elem> join_;
  std::vector<Elem> meet_;
  Elem bottom_ = 0;
  Elem top_ = 0;
  std::vector<std::string> labels_;
};

struct SearchOptions {
  int jobs = 1;
};

using Triple = std::array<Elem, 3>;

// Witness (x, y, z) violating x(y+xz) = xy+xz, least in lexicographic order;
// nullopt when L is modular.
std::optional<Triple> is_modular(const FiniteLattice& L, const SearchOptions& opts = {});
std::optional<Triple> is_modular_serial(const FiniteLattice& L);
// Independent check: a < c and b with a+b = c+b, ab = cb spans a pentagon.
std::optional<Triple> find_pentagon(const FiniteLattice& L);

// Checks the eight semilattice and absorption axioms together with
// consistency of the order with the tables. Exhaustive up to 200 elements,
// sampled otherwise. Returns a description of the first failure.
std::optional<std::string> check_lattice_axioms(const FiniteLattice& L, std::uint64_t seed = 0);

FiniteLattice interval(const FiniteLattice& L, Elem a, Elem b, std::vector<Elem>* embedding = nullptr);
FiniteLattice product(const FiniteLattice& A, const FiniteLattice& B);
bool isomorphic(const FiniteLattice& A, const FiniteLattice& B);

struct IdentityResult {
  bool holds = true;
  // One element per variable, in the order given; empty when holds.
  std::vector<Elem> counterexample;
  // Assignments up to and including the reported one, in mixed-radix order.
  std::uint64_t assignments_checked = 0;
};

// Exhaustive check of s = t over |L|^vars assignments, enumerated in
// mixed-radix order with vars[0] most significant. The reported
// counterexample is always the least one, whatever the job count.
IdentityResult holds_identity(const FiniteLattice& L, const Term& s, const Term& t,
                              const std::vector<std::string>& vars, const SearchOptions& opts = {});
IdentityResult holds_identity_serial(const FiniteLattice& L, const Term& s, const Term& t,
                                     const std::vector<std::string>& vars);

// Same search for the quasi-identity (antecedent equations) => s = t; the
// counterexample satisfies every antecedent equation and violates s = t.
IdentityResult holds_quasi_identity(const FiniteLattice& L, const std::vector<std::pair<Term, Term>>& antecedent,
                                    const Term& s, const Term& t, const std::vector<std::string>& vars,
                                    const SearchOptions& opts = {});
IdentityResult holds_quasi_identity_serial(const FiniteLattice& L, const std::vector<std::pair<Term, Term>>& antecedent,
                                           const Term& s, const Term& t, const std::vector<std::string>& vars);

nlohmann::json to_json(const FiniteLattice& L);
FiniteLattice lattice_from_json(const nlohmann::json& j);

// Small named lattices.
FiniteLattice make_m3();
FiniteLattice make_n5();
FiniteLattice make_boolean(std::size_t atoms);

}  // namespace modlat
