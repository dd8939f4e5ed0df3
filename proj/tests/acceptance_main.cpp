#include <uipt/acceptance.hpp>

#include <cstdlib>
#include <cstring>
#include <iostream>

int main(int argc, char** argv) {
  uipt::acceptance::Options opt;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--workers") == 0 && i + 1 < argc) opt.workers = std::atoi(argv[++i]);
    if (std::strcmp(argv[i], "--trials") == 0 && i + 1 < argc) opt.mc_trials = std::atol(argv[++i]);
  }
  auto results = uipt::acceptance::run_all(std::cout, opt);
  return uipt::acceptance::failures(results) == 0 ? 0 : 1;
}
