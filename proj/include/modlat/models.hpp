#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "modlat/frames.hpp"
#include "modlat/module.hpp"
#include "modlat/tower.hpp"

#include <json.hpp>

namespace modlat {

using SubFrame = FrameConfig<Submodule>;
using SubTower = TowerConfig<Submodule>;

// a_⊥ = 0, a_i = R e_{idx[i]}, c_{1j} = R(e_{idx[0]} - e_{idx[j]}).
SubFrame canonical_frame(const FiniteModule& M, const std::vector<std::size_t>& indices);

// R(e_i - g e_j).
Submodule graph_element(const FiniteModule& M, const FiniteRing::Elt& g, std::size_t i, std::size_t j);

// Z-module on e_1..e_4 with p^2 e_1 = p^2 e_3 = 0, p^{3n-1} e_2 = 0,
// p e_4 = 0 (as a module over Z/p^{3n-1}) and the skew (4,3)-frames of the
// explicit tower. `named` holds every listed subgroup under a key such as
// "c13^2" or "c'24^1"; the frames in `tower` are built from a_i and c_{1j}.
struct TowerModel {
  int n = 0;
  std::uint32_t p = 0;
  std::unique_ptr<FiniteModule> module;
  SubTower tower;
  std::map<std::string, Submodule> named;
};

TowerModel tower_canonical_model(int n, std::uint32_t p);

// Assignment of the tower presentation's generators (bot_k, a1_k, a2_k,
// c12_k, a3_1, c13_1, a4'_1, c14'_1) to the model.
Assignment<Submodule> tower_assignment(const TowerModel& T);

// All submodules X with lo <= X <= hi.
std::vector<Submodule> interval_submodules(const FiniteModule& M, const Submodule& lo, const Submodule& hi,
                                           std::size_t bound = FiniteModule::kDefaultEnumBound);

nlohmann::json tower_to_json(const FiniteModule& M, const SubTower& T);

// Free module R^rank with its canonical frame on all basis vectors.
struct FrameModel {
  std::unique_ptr<FiniteModule> module;
  SubFrame frame;
};

FrameModel canonical_frame_model(const FiniteRing& R, std::size_t rank);

// Graphs R(e_i - g e_j) for every ring element g, in ring index order.
std::vector<Submodule> graph_domain(const FiniteModule& M, std::size_t i, std::size_t j);

}  // namespace modlat
