#pragma once

// The acceptance suite: every criterion pinned to its stated tolerance,
// one pass/fail line per criterion. Shared by the test binary and the
// `uipt-lab verify all` subcommand.

#include <iosfwd>
#include <string>
#include <vector>

namespace uipt::acceptance {

struct Options {
  int workers = 2;
  long mc_trials = 100000;
  unsigned long long seed = 42;
};

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<CriterionResult> run_all(std::ostream& out, const Options& opt);

inline int failures(const std::vector<CriterionResult>& rs) {
  int n = 0;
  for (const auto& r : rs) n += r.pass ? 0 : 1;
  return n;
}

}  // namespace uipt::acceptance
