#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "holonomy/cli/scenario.hpp"

namespace holonomy::cli {

nlohmann::json cmd_intensity(const Scenario& scenario);
nlohmann::json cmd_maximize(const Scenario& scenario);
nlohmann::json cmd_transport(const Scenario& scenario);
nlohmann::json cmd_holonomy(const Scenario& scenario);
nlohmann::json cmd_levay_compare(const Scenario& scenario);
nlohmann::json cmd_selftest(std::uint64_t seed);

/// (step, intensity, closure_residual) rows of a transport report.
std::string transport_csv(const nlohmann::json& report);

/// 2 for invalid input, 3 for numerical failures.
int exit_code_for(ErrorCode code);

}  // namespace holonomy::cli
