// Runs every acceptance criterion and prints one pass/fail line each.
#include <cstdlib>
#include <iostream>

#include "taulab/acceptance.hpp"

int main(int argc, char** argv) {
  taulab::acceptance::Options opt;
  for (int i = 1; i < argc; ++i) opt.only.emplace_back(argv[i]);
  bool all = true;
  for (const auto& r : taulab::acceptance::run_all(opt)) {
    std::cout << taulab::acceptance::summary_line(r) << std::endl;
    all = all && r.pass;
  }
  return all ? EXIT_SUCCESS : EXIT_FAILURE;
}
