#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace holonomy::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  nlohmann::json metrics;
};

/// Numerical acceptance checks 1-11; every random draw derives from seed.
std::vector<CriterionResult> run_criteria(std::uint64_t seed);

/// Runs the checks twice and adds check 12: both serialized results agree
/// byte for byte.
std::vector<CriterionResult> run_all(std::uint64_t seed);

nlohmann::json to_json(const std::vector<CriterionResult>& results);

/// "[PASS] 3 werner-determinant: ..." style line.
std::string format_line(const CriterionResult& result);

}  // namespace holonomy::acceptance
