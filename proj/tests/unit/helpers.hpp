#pragma once

#include <random>
#include <string>
#include <vector>

#include "modlat/term.hpp"

namespace testing {

// Random term over the given symbols with at most `depth` levels of nesting.
inline modlat::Term random_term(std::mt19937_64& rng, const std::vector<std::string>& vars, int depth) {
  using modlat::Term;
  std::uniform_int_distribution<int> op(0, depth > 0 ? 2 : 0);
  std::uniform_int_distribution<std::size_t> pick(0, vars.size() - 1);
  switch (op(rng)) {
    case 1: return random_term(rng, vars, depth - 1) + random_term(rng, vars, depth - 1);
    case 2: return random_term(rng, vars, depth - 1) * random_term(rng, vars, depth - 1);
    default: return Term::var(vars[pick(rng)]);
  }
}

}  // namespace testing
