#include "impulse/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace impulse::cli {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& msg) {
  throw ModelError(ErrorCode::Config, "config: " + msg);
}

void expect_keys(const json& j, const std::string& ctx, const std::set<std::string>& allowed) {
  if (!j.is_object()) config_error(ctx + " must be an object");
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      config_error("unknown key '" + item.key() + "' in " + ctx);
    }
  }
}

double get_number(const json& j, const std::string& ctx) {
  if (!j.is_number()) config_error(ctx + " must be a number");
  return j.get<double>();
}

double get_number(const json& j, const char* key, const std::string& ctx, double fallback) {
  if (!j.contains(key)) return fallback;
  return get_number(j.at(key), ctx + "." + key);
}

int get_int(const json& j, const char* key, const std::string& ctx, int fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) config_error(ctx + "." + key + " must be an integer");
  return v.get<int>();
}

bool get_bool(const json& j, const char* key, const std::string& ctx, bool fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_boolean()) config_error(ctx + "." + key + " must be a boolean");
  return v.get<bool>();
}

std::string get_string(const json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    config_error(ctx + "." + key + " must be a string");
  }
  return j.at(key).get<std::string>();
}

SymMat parse_matrix(const json& j, int dim, const std::string& ctx) {
  if (j.is_number()) return SymMat::scalar(dim, j.get<double>());
  if (!j.is_array()) config_error(ctx + " must be a number or an array");
  if (dim == 1) {
    if (j.size() == 1 && j.at(0).is_number()) return SymMat::scalar(1, j.at(0).get<double>());
    config_error(ctx + " must be a single value in one dimension");
  }
  if (j.size() == 2 && j.at(0).is_number()) {
    return SymMat::diag2(get_number(j.at(0), ctx), get_number(j.at(1), ctx));
  }
  if (j.size() == 2 && j.at(0).is_array()) {
    if (j.at(0).size() != 2 || j.at(1).size() != 2) config_error(ctx + " must be 2x2");
    double a11 = get_number(j.at(0).at(0), ctx);
    double a12 = get_number(j.at(0).at(1), ctx);
    double a21 = get_number(j.at(1).at(0), ctx);
    double a22 = get_number(j.at(1).at(1), ctx);
    auto violations = validate_raw_matrix(2, a11, a12, a21, a22);
    for (const auto& v : violations) {
      if (v.severity == Severity::Error) config_error(ctx + ": " + v.assumption + ", " + v.detail);
    }
    return SymMat{2, a11, 0.5 * (a12 + a21), a22};
  }
  config_error(ctx + " has an unsupported shape");
}

Vec parse_vec(const json& j, int dim, const std::string& ctx) {
  if (j.is_number()) {
    if (dim != 1) config_error(ctx + " must be an array of length 2");
    return Vec::of(j.get<double>());
  }
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    config_error(ctx + " must match the model dimension");
  }
  if (dim == 1) return Vec::of(get_number(j.at(0), ctx));
  return Vec::of2(get_number(j.at(0), ctx), get_number(j.at(1), ctx));
}

GrowthSpec parse_growth(const json& j) {
  std::string type = get_string(j, "type", "model.growth");
  if (type == "logistic") {
    expect_keys(j, "model.growth", {"type", "r"});
    return LogisticGrowth{get_number(j, "r", "model.growth", 1.0)};
  }
  if (type == "linear") {
    expect_keys(j, "model.growth", {"type", "rate"});
    return LinearGrowth{get_number(j, "rate", "model.growth", 1.0)};
  }
  if (type == "quadratic") {
    expect_keys(j, "model.growth", {"type", "rate", "quad"});
    return QuadraticGrowth{get_number(j, "rate", "model.growth", 1.0),
                           get_number(j, "quad", "model.growth", -1.0)};
  }
  config_error("model.growth.type must be logistic, linear, or quadratic");
}

StageMapSpec parse_map(const json& j) {
  std::string type = get_string(j, "type", "model.map");
  if (type == "linear") {
    expect_keys(j, "model.map", {"type", "alpha"});
    return LinearMap{get_number(j, "alpha", "model.map", 1.0)};
  }
  if (type == "ricker") {
    expect_keys(j, "model.map", {"type", "beta"});
    return RickerMap{get_number(j, "beta", "model.map", 1.0)};
  }
  if (type == "beverton_holt") {
    expect_keys(j, "model.map", {"type", "lambda"});
    return BevertonHoltMap{get_number(j, "lambda", "model.map", 1.0)};
  }
  if (type == "skellam") {
    expect_keys(j, "model.map", {"type", "alpha", "beta"});
    return SkellamMap{get_number(j, "alpha", "model.map", 1.0),
                      get_number(j, "beta", "model.map", 2.0)};
  }
  config_error("model.map.type must be linear, ricker, beverton_holt, or skellam");
}

KernelSpec parse_kernel(const json& j, int dim) {
  std::string type = get_string(j, "type", "model.kernel");
  if (type == "point_mass") {
    expect_keys(j, "model.kernel", {"type"});
    return PointMassKernel{dim};
  }
  if (type == "gaussian") {
    expect_keys(j, "model.kernel", {"type", "mu", "B"});
    GaussianKernel k;
    k.mu = j.contains("mu") ? parse_vec(j.at("mu"), dim, "model.kernel.mu") : Vec::zero(dim);
    if (!j.contains("B")) config_error("model.kernel.B is required for a gaussian kernel");
    k.B = parse_matrix(j.at("B"), dim, "model.kernel.B");
    return k;
  }
  config_error("model.kernel.type must be gaussian or point_mass");
}

ModelParams parse_model(const json& j) {
  expect_keys(j, "model", {"dim", "diffusion", "advection", "growth", "map", "kernel"});
  ModelParams p;
  p.dim = get_int(j, "dim", "model", 1);
  if (p.dim != 1 && p.dim != 2) config_error("model.dim must be 1 or 2");
  p.A = j.contains("diffusion") ? parse_matrix(j.at("diffusion"), p.dim, "model.diffusion")
                                : SymMat::scalar(p.dim, 1.0);
  p.q = j.contains("advection") ? parse_vec(j.at("advection"), p.dim, "model.advection")
                                : Vec::zero(p.dim);
  if (j.contains("growth")) p.growth = parse_growth(j.at("growth"));
  if (j.contains("map")) p.map = parse_map(j.at("map"));
  if (j.contains("kernel") && !j.at("kernel").is_null()) {
    p.kernel = parse_kernel(j.at("kernel"), p.dim);
  }
  return p;
}

NumericsConfig parse_numerics(const json& j) {
  expect_keys(j, "numerics",
              {"substeps", "spacing", "half_width", "generations", "burn_in_fraction",
               "threshold_fraction", "jitter", "box_spacing", "persistence_generations"});
  NumericsConfig n;
  n.season.substeps = get_int(j, "substeps", "numerics", n.season.substeps);
  if (n.season.substeps < 1) config_error("numerics.substeps must be >= 1");
  n.spacing = get_number(j, "spacing", "numerics", n.spacing);
  if (!(n.spacing > 0.0)) config_error("numerics.spacing must be positive");
  n.half_width = get_number(j, "half_width", "numerics", n.half_width);
  n.generations = get_int(j, "generations", "numerics", n.generations);
  n.burn_in_fraction = get_number(j, "burn_in_fraction", "numerics", n.burn_in_fraction);
  n.threshold_fraction = get_number(j, "threshold_fraction", "numerics", n.threshold_fraction);
  n.jitter = get_number(j, "jitter", "numerics", n.jitter);
  n.box_spacing = get_number(j, "box_spacing", "numerics", n.box_spacing);
  n.persistence_generations =
      get_int(j, "persistence_generations", "numerics", n.persistence_generations);
  return n;
}

std::vector<Direction> parse_directions(const json& j, int dim) {
  if (!j.is_array() || j.empty()) config_error("task.directions must be a nonempty array");
  std::vector<Direction> out;
  for (const auto& item : j) {
    if (item.is_number()) {
      if (dim != 1) config_error("2D directions must be [ex, ey] pairs");
      double v = item.get<double>();
      out.push_back(Direction::along(Vec::of(v)));
    } else if (item.is_array() && item.size() == 2) {
      out.push_back(Direction::along(
          Vec::of2(get_number(item.at(0), "task.directions"), get_number(item.at(1), "task.directions"))));
    } else {
      config_error("task.directions entries must be numbers (1D) or [ex, ey] pairs");
    }
  }
  return out;
}

ScenarioParams parse_scenario(const json& j) {
  ScenarioParams sp;
  sp.name = get_string(j, "name", "task.scenario");
  const json& pj = j.contains("params") ? j.at("params") : json::object();
  if (sp.name == "climate") {
    expect_keys(pj, "task.scenario.params", {"d", "lambda", "gamma", "L1", "L2", "c"});
    sp.climate.d = get_number(pj, "d", "climate", 1.0);
    sp.climate.lambda = get_number(pj, "lambda", "climate", 1.0);
    sp.climate.gamma = get_number(pj, "gamma", "climate", 0.0);
    sp.climate.L1 = get_number(pj, "L1", "climate", 1.0);
    sp.climate.L2 = get_number(pj, "L2", "climate", 1.0);
    sp.climate.c = get_number(pj, "c", "climate", 0.0);
  } else if (sp.name == "stream") {
    expect_keys(pj, "task.scenario.params", {"d", "sigma2", "r", "lambda", "q", "mu"});
    sp.stream.d = get_number(pj, "d", "stream", 0.5);
    sp.stream.sigma2 = get_number(pj, "sigma2", "stream", 0.5);
    sp.stream.r = get_number(pj, "r", "stream", 0.1);
    sp.stream.lambda = get_number(pj, "lambda", "stream", 1.0);
    sp.stream.q = get_number(pj, "q", "stream", 1.0);
    sp.stream.mu = get_number(pj, "mu", "stream", 0.5);
  } else if (sp.name == "savannah") {
    expect_keys(pj, "task.scenario.params", {"r", "s", "a11", "a22", "q1", "q2"});
    sp.savannah.r = get_number(pj, "r", "savannah", 1.0);
    sp.savannah.s = get_number(pj, "s", "savannah", 0.1);
    sp.savannah.a11 = get_number(pj, "a11", "savannah", 1.0);
    sp.savannah.a22 = get_number(pj, "a22", "savannah", 1.0);
    sp.savannah.q1 = get_number(pj, "q1", "savannah", 0.0);
    sp.savannah.q2 = get_number(pj, "q2", "savannah", 0.0);
  } else {
    config_error("task.scenario.name must be climate, stream, or savannah");
  }
  return sp;
}

std::vector<double> parse_sweep_values(const json& j) {
  if (j.is_array()) {
    std::vector<double> out;
    for (const auto& v : j) out.push_back(get_number(v, "task.values"));
    if (out.empty()) config_error("task.values must not be empty");
    return out;
  }
  expect_keys(j, "task.values", {"from", "to", "count"});
  double from = get_number(j, "from", "task.values", 0.0);
  double to = get_number(j, "to", "task.values", 1.0);
  int count = get_int(j, "count", "task.values", 0);
  if (count < 2) config_error("task.values.count must be >= 2");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = from + (to - from) * i / (count - 1);
  }
  return out;
}

TaskConfig parse_task(const json& j, const ModelParams& model) {
  TaskConfig t;
  std::string type = get_string(j, "type", "task");
  if (type == "speed") {
    expect_keys(j, "task", {"type", "directions", "oracle", "simulate"});
    t.type = TaskType::Speed;
    t.with_oracle = get_bool(j, "oracle", "task", false);
    t.with_simulation = get_bool(j, "simulate", "task", true);
  } else if (type == "critical-domain") {
    expect_keys(j, "task", {"type", "shape", "simulate"});
    t.type = TaskType::CriticalDomain;
    t.with_simulation = get_bool(j, "simulate", "task", false);
    if (j.contains("shape")) {
      std::string shape = get_string(j, "shape", "task");
      if (shape == "interval") t.shape = analytic::DomainShape::Interval;
      else if (shape == "hypercube") t.shape = analytic::DomainShape::Hypercube;
      else config_error("task.shape must be interval or hypercube");
    }
  } else if (type == "ray") {
    expect_keys(j, "task", {"type", "directions"});
    t.type = TaskType::Ray;
  } else if (type == "simulate") {
    expect_keys(j, "task", {"type", "directions"});
    t.type = TaskType::Simulate;
  } else if (type == "oracle") {
    expect_keys(j, "task", {"type", "directions", "iterations", "speed_tolerance"});
    t.type = TaskType::Oracle;
    t.oracle_cfg.iterations = get_int(j, "iterations", "task", t.oracle_cfg.iterations);
    t.oracle_cfg.speed_tolerance =
        get_number(j, "speed_tolerance", "task", t.oracle_cfg.speed_tolerance);
  } else if (type == "scenario") {
    expect_keys(j, "task", {"type", "name", "params"});
    t.type = TaskType::Scenario;
    t.scenario = parse_scenario(j);
  } else if (type == "sweep") {
    expect_keys(j, "task", {"type", "parameter", "values"});
    t.type = TaskType::Sweep;
    t.sweep_parameter = get_string(j, "parameter", "task");
    if (t.sweep_parameter != "q" && t.sweep_parameter != "L") {
      config_error("task.parameter must be q or L");
    }
    if (!j.contains("values")) config_error("task.values is required for a sweep");
    t.sweep_values = parse_sweep_values(j.at("values"));
  } else {
    config_error("task.type must be one of speed, critical-domain, ray, simulate, oracle, "
                 "scenario, sweep");
  }
  if (j.contains("directions")) t.directions = parse_directions(j.at("directions"), model.dim);
  return t;
}

}  // namespace

const char* task_name(TaskType t) {
  switch (t) {
    case TaskType::Speed: return "speed";
    case TaskType::CriticalDomain: return "critical-domain";
    case TaskType::Ray: return "ray";
    case TaskType::Simulate: return "simulate";
    case TaskType::Oracle: return "oracle";
    case TaskType::Scenario: return "scenario";
    case TaskType::Sweep: return "sweep";
  }
  return "unknown";
}

RunConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    config_error(std::string("invalid JSON: ") + e.what());
  }
  expect_keys(root, "config", {"model", "numerics", "task", "output"});
  if (!root.contains("task")) config_error("config requires exactly one task block");

  RunConfig cfg;
  if (root.contains("model")) cfg.model = parse_model(root.at("model"));
  if (root.contains("numerics")) cfg.numerics = parse_numerics(root.at("numerics"));
  cfg.task = parse_task(root.at("task"), cfg.model);
  if (root.contains("output")) {
    expect_keys(root.at("output"), "output", {"dir"});
    cfg.out_dir = get_string(root.at("output"), "dir", "output");
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open()) config_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace impulse::cli
