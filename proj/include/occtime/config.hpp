#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "occtime/levy_model.hpp"
#include "occtime/weight_function.hpp"

namespace occtime {

struct Numerics {
  double mesh = 1e-3;
  std::optional<double> x_max;
};

/// Per-command parameters; command-line flags override these.
struct TaskParams {
  std::optional<double> x, b, c, q, delta, dt, y_max;
  std::optional<std::uint64_t> paths, seed;
  std::optional<int> points, stride, z_points, y_points;
  std::optional<unsigned> threads;
};

struct RunConfig {
  LevyModeld model;
  WeightFunction omega;
  Numerics numerics;
  TaskParams task;
};

/// {"type": "brownian", "mu", "sigma"} or
/// {"type": "cramer_lundberg_exp", "mu", "lambda", "beta"}.
LevyModeld parse_model(const nlohmann::json& j);

/// {"type": "constant", "q"}, {"type": "one_step", "q", "p", "a"} or
/// {"type": "step", "breakpoints": [...], "levels": [...]}.
WeightFunction parse_omega(const nlohmann::json& j);

/// {"model": ..., "omega": ..., "numerics": {"mesh", "x_max"}, "task": {...}};
/// omega defaults to the zero weight. Unknown keys are rejected.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

}  // namespace occtime
