#include <cstdio>
#include <iostream>

#include "asim/verify.hpp"

int main() {
  std::vector<asim::CheckResult> results;
  try {
    results = asim::run_acceptance_checks();
  } catch (const std::exception& e) {
    std::cerr << "acceptance suite aborted: " << e.what() << "\n";
    return 2;
  }
  int unexpected = 0;
  for (const asim::CheckResult& r : results) {
    bool as_expected = r.expected_fail ? !r.pass : r.pass;
    if (!as_expected) ++unexpected;
    std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name
              << (r.expected_fail ? " [expected to fail]" : "") << "\n      " << r.detail
              << "\n";
  }
  if (asim::all_as_expected(results)) {
    std::cout << results.size() << " checks behaved as documented (" << unexpected
              << " surprises)\n";
    return 0;
  }
  std::cout << unexpected << " checks did not behave as documented\n";
  return 1;
}
