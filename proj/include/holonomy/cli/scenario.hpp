#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "holonomy/transport.hpp"

namespace holonomy::cli {

inline constexpr int kSchemaVersion = 1;

/// A path on A as written in a scenario: explicit step unitaries, or a
/// Fourier loop discretized into n_steps.
struct PathSpec {
  std::string name;
  transport::DiscretePath steps;
  std::optional<transport::SmoothPath> smooth;
  int n_steps = 0;
};

/// Validated scenario document. Every random ingredient is drawn from one
/// generator seeded with `seed`, in document order: state, u, v, paths.
struct Scenario {
  std::uint64_t seed = 0;
  Group group = Group::Unitary;
  std::optional<states::DensityMatrix> state;
  std::optional<CVector> pure_vector;  // set when the state was given as a vector
  std::optional<CMatrix> u;
  std::optional<CMatrix> v;
  std::vector<PathSpec> paths;
  double closure_tol = transport::kDefaultClosureTol;
  int samples = 0;
  std::optional<std::string> csv;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> steps;
};

/// Throws Error(Schema) with the offending field on malformed input.
Scenario parse_scenario(const nlohmann::json& doc, const Overrides& overrides = {});

}  // namespace holonomy::cli
