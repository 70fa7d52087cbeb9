#pragma once

#include <functional>
#include <string>
#include <vector>

namespace kinklab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  // a failure that is understood and recorded: the measured value is correct
  // and the stated tolerance cannot be met by the underlying problem
  bool known_deviation = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  bool quick = false;
  std::string out_dir = "acceptance_out";
  int threads = 0;
  std::vector<int> only;  // empty: all criteria
  std::function<void(const CriterionResult&)> on_result;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt);

// "PASS"/"FAIL" line for one criterion.
std::string format_result(const CriterionResult& r);

// True when every failure is a known deviation.
bool acceptance_ok(const std::vector<CriterionResult>& results);

}  // namespace kinklab
