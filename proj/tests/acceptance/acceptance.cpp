// Prints one line per acceptance criterion; exits nonzero if any fails.
// Usage: acceptance [--jobs N] [--verbose] [A1 ...]

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "modlat/acceptance.hpp"

int main(int argc, char** argv) {
  modlat::SuiteOptions opts;
  bool verbose = false;
  std::vector<std::string> ids;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--jobs") == 0 && i + 1 < argc) opts.search.jobs = std::atoi(argv[++i]);
    else if (std::strcmp(argv[i], "--verbose") == 0) verbose = true;
    else ids.emplace_back(argv[i]);
  }
  if (ids.empty()) ids = modlat::criterion_ids();

  int failed = 0;
  double total = 0;
  for (const auto& id : ids) {
    modlat::CriterionResult r = modlat::run_criterion(id, opts);
    total += r.seconds;
    std::cout << modlat::summary_line(r) << "\n";
    for (const auto& d : r.details)
      if (verbose || !r.pass()) std::cout << "    " << d << "\n";
    if (!r.pass()) ++failed;
  }
  std::cout << (failed ? "FAILED " : "ALL PASS ") << ids.size() - std::size_t(failed) << "/" << ids.size() << " in "
            << total << "s\n";
  return failed ? 1 : 0;
}
