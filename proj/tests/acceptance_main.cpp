// Runs the full acceptance suite and prints one line per criterion.
// Criteria listed in kExpectedFailures are known not to hold at this scale
// (see the README); the test fails if the failing set differs from it in
// either direction.

#include "wpvol/acceptance.hpp"

#include <algorithm>
#include <iostream>
#include <vector>

int main() {
  const std::vector<int> kExpectedFailures = {8, 10};

  const wpvol::IntersectionEngine engine;
  const wpvol::AcceptanceReport report = wpvol::run_suite("all", engine);
  std::cout << report.to_text();

  std::vector<int> failing = report.failing();
  std::sort(failing.begin(), failing.end());
  std::cout << "expected failures:";
  for (int id : kExpectedFailures) std::cout << ' ' << id;
  std::cout << "\nobserved failures:";
  for (int id : failing) std::cout << ' ' << id;
  std::cout << '\n';
  return failing == kExpectedFailures ? 0 : 1;
}
