// Acceptance gate: one PASS/FAIL line per criterion; nonzero exit if any criterion fails.
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "dpnls/acceptance.hpp"
#include "dpnls/core.hpp"

int main(int argc, char** argv) {
  dpnls::AcceptanceOptions opt;
  opt.fixtures = dpnls::default_fixture_dir();
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty()) ids = {1, 2, 3, 4, 5, 6, 7};

  int failed = 0;
  for (int id : ids) {
    dpnls::CriterionResult r;
    try {
      r = dpnls::run_criterion(id, opt);
    } catch (const dpnls::Error& e) {
      std::cout << "[FAIL] " << id << ": " << e.what() << std::endl;
      ++failed;
      continue;
    }
    std::cout << dpnls::format_result(r) << std::endl;
    if (!r.pass) ++failed;
  }
  std::cout << (failed == 0 ? "acceptance: all criteria pass" : "acceptance: " + std::to_string(failed) + " criterion/criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
