#include <iostream>

#include "ceal/acceptance.hpp"

int main() {
  ceal::AcceptanceOptions options;
  options.log = &std::cout;
  const auto results = ceal::run_acceptance(options);
  std::size_t passed = 0;
  for (const auto& r : results) passed += r.passed ? 1 : 0;
  std::cout << passed << "/" << results.size() << " acceptance criteria passed" << std::endl;
  return passed == results.size() ? 0 : 1;
}
