#include "occtime/config.hpp"

#include <fstream>
#include <initializer_list>
#include <type_traits>
#include <vector>

#include "occtime/errors.hpp"

namespace occtime {

using nlohmann::json;

namespace {

void require_object(const json& j, const std::string& what) {
  if (!j.is_object()) throw ConfigError(what + " must be a JSON object");
}

void reject_unknown(const json& j, const std::string& what, std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed) known = known || item.key() == key;
    if (!known) throw ConfigError("unknown key '" + item.key() + "' in " + what);
  }
}

double number(const json& j, const char* key, const std::string& what) {
  if (!j.contains(key)) throw ConfigError(what + " is missing '" + key + "'");
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(what + "." + key + " must be a number");
  return v.get<double>();
}

template <typename T>
std::optional<T> optional_number(const json& j, const char* key, const std::string& what) {
  if (!j.contains(key)) return std::nullopt;
  const json& v = j.at(key);
  if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) throw ConfigError(what + "." + key + " must be a number");
  } else if constexpr (std::is_signed_v<T>) {
    if (!v.is_number_integer()) throw ConfigError(what + "." + key + " must be an integer");
  } else {
    if (!v.is_number_unsigned()) throw ConfigError(what + "." + key + " must be a nonnegative integer");
  }
  return v.get<T>();
}

std::vector<double> number_list(const json& j, const char* key, const std::string& what) {
  if (!j.contains(key) || !j.at(key).is_array()) throw ConfigError(what + "." + key + " must be an array");
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw ConfigError(what + "." + key + " must contain numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::string type_of(const json& j, const std::string& what) {
  if (!j.contains("type") || !j.at("type").is_string()) throw ConfigError(what + " needs a string 'type'");
  return j.at("type").get<std::string>();
}

}  // namespace

LevyModeld parse_model(const json& j) {
  require_object(j, "model");
  const std::string type = type_of(j, "model");
  if (type == "brownian") {
    reject_unknown(j, "model", {"type", "mu", "sigma"});
    return LevyModeld::brownian(number(j, "mu", "model"), number(j, "sigma", "model"));
  }
  if (type == "cramer_lundberg_exp") {
    reject_unknown(j, "model", {"type", "mu", "lambda", "beta"});
    return LevyModeld::cramer_lundberg(number(j, "mu", "model"), number(j, "lambda", "model"),
                                       number(j, "beta", "model"));
  }
  throw ConfigError("unknown model type '" + type + "'");
}

WeightFunction parse_omega(const json& j) {
  require_object(j, "omega");
  const std::string type = type_of(j, "omega");
  if (type == "constant") {
    reject_unknown(j, "omega", {"type", "q"});
    return WeightFunction::constant(number(j, "q", "omega"));
  }
  if (type == "one_step") {
    reject_unknown(j, "omega", {"type", "q", "p", "a"});
    return WeightFunction::one_step(number(j, "q", "omega"), number(j, "p", "omega"),
                                    number(j, "a", "omega"));
  }
  if (type == "step") {
    reject_unknown(j, "omega", {"type", "breakpoints", "levels"});
    return WeightFunction::step(number_list(j, "breakpoints", "omega"), number_list(j, "levels", "omega"));
  }
  throw ConfigError("unknown omega type '" + type + "'");
}

RunConfig parse_run_config(const json& j) {
  require_object(j, "config");
  reject_unknown(j, "config", {"model", "omega", "numerics", "task"});
  if (!j.contains("model")) throw ConfigError("config is missing 'model'");
  RunConfig cfg{parse_model(j.at("model")),
                j.contains("omega") ? parse_omega(j.at("omega")) : WeightFunction::constant(0.0),
                {},
                {}};
  if (j.contains("numerics")) {
    const json& n = j.at("numerics");
    require_object(n, "numerics");
    reject_unknown(n, "numerics", {"mesh", "x_max"});
    if (auto mesh = optional_number<double>(n, "mesh", "numerics")) cfg.numerics.mesh = *mesh;
    cfg.numerics.x_max = optional_number<double>(n, "x_max", "numerics");
  }
  if (j.contains("task")) {
    const json& t = j.at("task");
    require_object(t, "task");
    reject_unknown(t, "task", {"x", "b", "c", "q", "delta", "dt", "y_max", "paths", "seed", "points",
                               "stride", "z_points", "y_points", "threads"});
    auto& p = cfg.task;
    p.x = optional_number<double>(t, "x", "task");
    p.b = optional_number<double>(t, "b", "task");
    p.c = optional_number<double>(t, "c", "task");
    p.q = optional_number<double>(t, "q", "task");
    p.delta = optional_number<double>(t, "delta", "task");
    p.dt = optional_number<double>(t, "dt", "task");
    p.y_max = optional_number<double>(t, "y_max", "task");
    p.paths = optional_number<std::uint64_t>(t, "paths", "task");
    p.seed = optional_number<std::uint64_t>(t, "seed", "task");
    p.points = optional_number<int>(t, "points", "task");
    p.stride = optional_number<int>(t, "stride", "task");
    p.z_points = optional_number<int>(t, "z_points", "task");
    p.y_points = optional_number<int>(t, "y_points", "task");
    p.threads = optional_number<unsigned>(t, "threads", "task");
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return parse_run_config(j);
}

}  // namespace occtime
