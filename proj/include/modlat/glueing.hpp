#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modlat/lattice.hpp"
#include "modlat/module.hpp"
#include "modlat/tower.hpp"

#include <json.hpp>

namespace modlat {

// γ_{yx} for a cover x ≺ y of the skeleton, as pairs (a ∈ L_x, γ(a) ∈ L_y).
// The domain must be a filter [0_{y,x}, 1_x] and the image an ideal
// [0_y, 1_{y,x}].
struct GlueMap {
  Elem x = 0, y = 0;
  std::vector<std::pair<Elem, Elem>> pairs;
};

struct GluedSumSpec {
  FiniteLattice skeleton;
  // components[x] is L_x; its bottom and top are 0_x and 1_x.
  std::vector<FiniteLattice> components;
  std::vector<GlueMap> glue;
};

struct GluedLattice {
  GluedSumSpec spec;
  FiniteLattice lattice;
  // cls[x][a]: element of `lattice` represented by a ∈ L_x.
  std::vector<std::vector<Elem>> cls;
  // Per element: least / greatest skeleton position holding a representative,
  // and the representative there.
  std::vector<Elem> mu, mu_rep, lambda, lambda_rep;
  // σ(x) = [0_x], π(x) = [1_x].
  std::vector<Elem> sigma, pi;
};

// Builds the glued lattice. Validates each glue map, commutation on every
// covering square, chain independence of transports on every interval, and
// cross-checks the order, the joins and meets of the recursion, σ/π and the
// blocks [σx, πx]. Throws Error naming the first failure.
GluedLattice glued_sum(const GluedSumSpec& spec, const SearchOptions& opts = {});

// Chain skeleton 0 ≺ 1 ≺ ... ≺ n-1; alphas[i] glues L_i to L_{i+1}.
GluedLattice dilworth_hall(std::vector<FiniteLattice> components,
                           const std::vector<std::vector<std::pair<Elem, Elem>>>& alphas,
                           const SearchOptions& opts = {});

// Independent oracle: transitive closure of the component orders and the
// glue identifications, quotiented by mutual ≤. cls is filled as in
// GluedLattice.
FiniteLattice order_completion(const GluedSumSpec& spec, std::vector<std::vector<Elem>>* cls = nullptr);

// Decomposition of L as the glued sum of [σx, πx] over S; sigma and pi map
// skeleton elements into L.
GluedSumSpec decompose(const FiniteLattice& L, const FiniteLattice& S, const std::vector<Elem>& sigma,
                       const std::vector<Elem>& pi);

// Congruence of L generated by a ≡ b, as a block representative per element.
std::vector<Elem> congruence_generated(const FiniteLattice& L, Elem a, Elem b);

inline constexpr std::size_t kDefaultCongruenceBound = 5000;

struct SimplicityReport {
  bool simple = false;
  // Prime quotient whose congruence is not total.
  std::optional<std::pair<Elem, Elem>> witness;
  bool components_simple = false;
  std::vector<Elem> non_simple_components;
};

// At least two elements and every prime quotient generates the total
// congruence. Join-irreducible quotients j_* ≺ j suffice.
SimplicityReport verify_simple(const FiniteLattice& L, std::size_t bound = kDefaultCongruenceBound);
// Also reports whether every component is simple.
SimplicityReport verify_simple(const GluedLattice& G, std::size_t bound = kDefaultCongruenceBound);

// Lattice of the given submodules; the list must be closed under sum and
// intersection.
FiniteLattice submodule_lattice(const FiniteModule& M, const std::vector<Submodule>& subs,
                                const SearchOptions& opts = {});

// {a : p a ∈ X}.
Submodule p_preimage(const FiniteModule& M, const Submodule& X);

struct LAModel {
  std::uint32_t p = 0;
  std::vector<unsigned> shape;
  std::unique_ptr<FiniteModule> A;
  std::vector<Submodule> subgroups;  // index = element of `lattice`
  FiniteLattice lattice;             // L(A)
  std::vector<Elem> skeleton_elems;  // L(pA) inside L(A)
  FiniteLattice skeleton;
  std::vector<Elem> sigma, pi;       // skeleton element -> L(A)
  GluedLattice glued;
  std::vector<Elem> glued_to_LA;
};

struct LAReport {
  bool decomposition = false;      // pC ∈ S and pC ≤ C ≤ π(pC) for every C
  bool intervals_subspace = false; // [σX, πX] ≅ L(F_p^r), r = shape length
  bool glue_matches = false;       // glued sum of the blocks is L(A) element for element
  bool modular = false;
  bool simple = false;
  std::string failure;
  bool ok() const { return decomposition && intervals_subspace && glue_matches && modular && simple; }
};

LAModel build_LA(std::uint32_t p, const std::vector<unsigned>& shape, const SearchOptions& opts = {});
LAReport check_LA(const LAModel& M, const SearchOptions& opts = {});

// L(G) = ⋃_{X ∈ L(pA)} [QX, Qπ(X)] inside L(B), Q = Z/p^k[G], B the Q-module on
// e_1..e_r with p^{k_i} e_i = 0, k = max k_i.
class LGModel {
 public:
  LGModel(const Group& G, std::uint32_t p, const std::vector<unsigned>& shape);

  const FiniteModule& A() const { return *A_; }
  const FiniteModule& B() const { return *B_; }
  // QX for a subgroup X of A.
  Submodule embed(const Submodule& X) const;
  Submodule sigma(const Submodule& X) const { return embed(X); }
  Submodule pi(const Submodule& X) const { return embed(p_preimage(*A_, X)); }
  const std::vector<Submodule>& skeleton() const { return skeleton_; }
  bool contains(const Submodule& Y) const;

  // X ↦ QX injective and a lattice homomorphism on L(A), and σ', π' on S;
  // exhaustive over pairs. Returns the first failure.
  std::optional<std::string> check_embeddings(const SearchOptions& opts = {}) const;
  // Every submodule of B lying in L(G), by enumeration.
  std::vector<Submodule> members(std::size_t bound = FiniteModule::kDefaultEnumBound) const;

  // Ψ⁰: Φ'⁰ = (Qpe_1, Qpe_3, Qe_4; Q(pe_1-pe_3), Q(pe_1-e_4)), Φ⁰ = (Qe_1,
  // Qe_3; Q(e_1-e_3)). Needs shape (2, k_2, 2, 1).
  SkewFrameConfig<Submodule> psi0() const;

 private:
  std::uint32_t p_;
  std::vector<unsigned> shape_;
  std::unique_ptr<FiniteModule> A_, B_;
  std::vector<Submodule> skeleton_, skeleton_pi_;
};

// L(G) as an oracle: operations of L(B), restricted to members.
class LGOracle final : public LatticeOracle<Submodule> {
 public:
  explicit LGOracle(const LGModel& M) : M_(M) {}
  bool equal(const Submodule& a, const Submodule& b) const override { return a == b; }
  Submodule join(const Submodule& a, const Submodule& b) const override;
  Submodule meet(const Submodule& a, const Submodule& b) const override;
  bool leq(const Submodule& a, const Submodule& b) const override { return M_.B().leq(a, b); }
  std::size_t hash(const Submodule& a) const override { return a.hash(); }
  std::string label(const Submodule& a) const override { return M_.B().label(a); }

 private:
  const LGModel& M_;
};

struct RewireResult {
  GluedLattice glued;
  // Largest ideal of S disjoint from U.
  std::vector<Elem> ideal;
  // χ on L_T: element of the input lattice -> element of the output.
  std::vector<std::pair<Elem, Elem>> chi;
  bool ideal_iso = false;
  std::string detail;
};

// Replaces the glue maps `phi` (keyed by their covers) and re-glues. U must
// be an antichain of S; replacements off U must agree with γ, and every
// x ≺ u ≺ y with u ∈ U must satisfy
//   φ_yu(a) = γ_yx(φ_ux^{-1}(a)) for a ∈ [φ_ux(0_{y,x}), 1_{u,x}]
//   φ_yu(b) = γ_yu(b)            for b ∈ [1_{u,x}, 1_u].
// Violations throw, naming the condition and the triple.
RewireResult rewire(const GluedLattice& G, const std::vector<Elem>& U, const std::vector<GlueMap>& phi,
                    const SearchOptions& opts = {});

// {skeleton, components: {label: lattice}, glue: [{x, y, pairs: [[a, b]]}]}
// with skeleton and component elements given by label.
nlohmann::json to_json(const GluedSumSpec& spec);
GluedSumSpec glued_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GluedLattice& G);

}  // namespace modlat
