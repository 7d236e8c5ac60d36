#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "modlat/lattice.hpp"
#include "modlat/ring.hpp"

#include <json.hpp>

namespace modlat {

struct CriterionResult {
  std::string id;
  std::string title;
  bool correct = false;
  double seconds = 0;
  double limit_seconds = 0;
  std::vector<std::string> details;
  bool pass() const { return correct && seconds < limit_seconds; }
};

struct SuiteOptions {
  std::uint64_t seed = 0;
  SearchOptions search;
};

// Ids "A1".."A11".
const std::vector<std::string>& criterion_ids();

// Runs one criterion; unknown ids throw. Exceptions inside a criterion are
// caught and reported as a failure.
CriterionResult run_criterion(const std::string& id, const SuiteOptions& opts = {});

// One "A<k> PASS|FAIL <seconds>s (limit <limit>s) <title>" line.
std::string summary_line(const CriterionResult& r);
nlohmann::json to_json(const CriterionResult& r);

// Graph map r ↦ R(e_1 - r e_3) of the canonical 4-frame over R checked
// against the ring operations over all pairs; returns the first failure.
std::optional<std::string> graph_map_check(const FiniteRing& R, const SearchOptions& opts = {});

// The explicit lattices checked by the modularity criterion.
std::vector<std::pair<std::string, FiniteLattice>> lattice_corpus();

}  // namespace modlat
