#pragma once

#include <string>
#include <vector>

#include "impulse/analytic.hpp"
#include "impulse/model.hpp"
#include "impulse/oracle.hpp"
#include "impulse/season.hpp"

namespace impulse::cli {

struct NumericsConfig {
  season::SeasonConfig season{};
  double spacing = 0.05;      // free-space grid spacing
  double half_width = 0.0;    // 0 = auto-sized from the planned drift
  int generations = 30;
  double burn_in_fraction = 0.4;
  double threshold_fraction = 0.5;  // front threshold relative to pi1
  double jitter = 0.0;              // multiplicative seed noise amplitude
  double box_spacing = 0.0;         // hostile-boundary grid spacing; 0 = auto
  int persistence_generations = 200;
};

enum class TaskType { Speed, CriticalDomain, Ray, Simulate, Oracle, Scenario, Sweep };
const char* task_name(TaskType t);

struct ScenarioParams {
  std::string name;  // climate | stream | savannah
  analytic::ClimateScenario climate{};
  analytic::StreamScenario stream{};
  analytic::SavannahScenario savannah{};
};

struct TaskConfig {
  TaskType type = TaskType::Speed;
  std::vector<Direction> directions;  // empty selects per-task defaults
  bool with_oracle = false;
  bool with_simulation = true;
  analytic::DomainShape shape = analytic::DomainShape::Hypercube;
  std::string sweep_parameter;  // "q" or "L"
  std::vector<double> sweep_values;
  ScenarioParams scenario{};
  oracle::OracleConfig oracle_cfg{};
};

struct RunConfig {
  ModelParams model;
  NumericsConfig numerics;
  TaskConfig task;
  std::string out_dir = ".";
};

// Strict JSON parsing: unknown keys are configuration errors.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

}  // namespace impulse::cli
