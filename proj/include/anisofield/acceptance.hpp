#pragma once

#include <string>
#include <vector>

namespace anisofield {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Suite names accepted by run_acceptance, in criterion order.
const std::vector<std::string>& acceptance_suites();

/// Runs one suite by name, or every suite for "all". Criteria that throw are
/// reported as failures carrying the exception text.
std::vector<CriterionResult> run_acceptance(const std::string& suite);

/// "[PASS] 3 simulation: ..." style line.
std::string format_result(const CriterionResult& r);

}  // namespace anisofield
