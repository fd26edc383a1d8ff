// Acceptance battery: one line per criterion, non-zero exit if any fails.
#include <iostream>

#include "anisofield/acceptance.hpp"

int main(int argc, char** argv) {
  const std::string suite = argc > 1 ? argv[1] : "all";
  int failed = 0;
  for (const auto& r : anisofield::run_acceptance(suite)) {
    std::cout << anisofield::format_result(r) << std::endl;
    if (!r.passed) ++failed;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << std::endl;
  return failed ? 1 : 0;
}
