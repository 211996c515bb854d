// Acceptance suite: runs every verification criterion at its pinned
// tolerance and prints one pass/fail line per criterion. Exits nonzero if
// any criterion fails.

#include <cstdio>

#include "spinosc/experiment.hpp"

#ifndef SPINOSC_CONFIG_DIR
#define SPINOSC_CONFIG_DIR "configs"
#endif

int main() {
  auto results = spinosc::verify_all(SPINOSC_CONFIG_DIR);
  int failures = 0;
  for (const auto& r : results) {
    std::printf("[%2d] %s  %s\n      %s\n", r.id, r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.detail.c_str());
    if (!r.pass) ++failures;
  }
  std::printf("%zu criteria, %d failed\n", results.size(), failures);
  return failures == 0 ? 0 : 1;
}
