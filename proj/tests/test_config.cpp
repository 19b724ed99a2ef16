#include <doctest.h>

#include <cmath>

#include "impulse/config.hpp"
#include "impulse/runner.hpp"

using namespace impulse;
using namespace impulse::cli;

TEST_CASE("full configuration parses") {
  RunConfig cfg = parse_config_text(R"({
    "model": {
      "dim": 1,
      "diffusion": 0.5,
      "advection": 1.0,
      "growth": {"type": "linear", "rate": -0.1},
      "map": {"type": "beverton_holt", "lambda": 2.0},
      "kernel": {"type": "gaussian", "mu": 0.5, "B": 0.5}
    },
    "numerics": {"substeps": 8, "spacing": 0.1, "generations": 12},
    "task": {"type": "speed", "directions": [1.0, -1.0], "oracle": false},
    "output": {"dir": "out"}
  })");
  CHECK(cfg.model.dim == 1);
  CHECK(cfg.model.A.xx == 0.5);
  CHECK(cfg.model.q.x == 1.0);
  CHECK(std::holds_alternative<BevertonHoltMap>(cfg.model.map));
  REQUIRE(cfg.model.kernel.has_value());
  CHECK(std::get<GaussianKernel>(*cfg.model.kernel).mu.x == 0.5);
  CHECK(cfg.numerics.season.substeps == 8);
  CHECK(cfg.numerics.generations == 12);
  CHECK(cfg.task.type == TaskType::Speed);
  REQUIRE(cfg.task.directions.size() == 2);
  CHECK(cfg.task.directions[1].e.x == -1.0);
  CHECK(cfg.out_dir == "out");
}

TEST_CASE("unknown keys are rejected") {
  CHECK_THROWS_AS(parse_config_text(R"({
    "model": {"dim": 1, "diffusivity": 1.0},
    "task": {"type": "speed"}
  })"),
                  ModelError);
  CHECK_THROWS_AS(parse_config_text(R"({
    "task": {"type": "speed", "treshold": 0.5}
  })"),
                  ModelError);
  CHECK_THROWS_AS(parse_config_text(R"({
    "task": {"type": "speed"}, "extra": 1
  })"),
                  ModelError);
}

TEST_CASE("a task block is required and must be known") {
  CHECK_THROWS_AS(parse_config_text(R"({"model": {"dim": 1}})"), ModelError);
  CHECK_THROWS_AS(parse_config_text(R"({"task": {"type": "warp"}})"), ModelError);
}

TEST_CASE("matrices parse from scalars, diagonals, and full form") {
  RunConfig cfg = parse_config_text(R"({
    "model": {"dim": 2, "diffusion": [[4.0, 0.5], [0.5, 1.0]], "advection": [0.1, 0.2]},
    "task": {"type": "ray"}
  })");
  CHECK(cfg.model.A.xx == 4.0);
  CHECK(cfg.model.A.xy == 0.5);
  CHECK(cfg.model.A.yy == 1.0);

  // Asymmetric input is a configuration error.
  CHECK_THROWS_AS(parse_config_text(R"({
    "model": {"dim": 2, "diffusion": [[1.0, 0.5], [0.4, 1.0]]},
    "task": {"type": "ray"}
  })"),
                  ModelError);

  RunConfig diag = parse_config_text(R"({
    "model": {"dim": 2, "diffusion": [4.0, 1.0]},
    "task": {"type": "ray"}
  })");
  CHECK(diag.model.A.xy == 0.0);
  CHECK(diag.model.A.yy == 1.0);
}

TEST_CASE("sweep values parse from lists and ranges") {
  RunConfig cfg = parse_config_text(R"({
    "task": {"type": "sweep", "parameter": "q", "values": {"from": 0.0, "to": 3.0, "count": 7}}
  })");
  REQUIRE(cfg.task.sweep_values.size() == 7);
  CHECK(cfg.task.sweep_values[0] == 0.0);
  CHECK(cfg.task.sweep_values[6] == 3.0);

  CHECK_THROWS_AS(parse_config_text(R"({
    "task": {"type": "sweep", "parameter": "q", "values": []}
  })"),
                  ModelError);
  CHECK_THROWS_AS(parse_config_text(R"({
    "task": {"type": "sweep", "parameter": "beta", "values": [1.0]}
  })"),
                  ModelError);
}

TEST_CASE("scenario blocks parse by name") {
  RunConfig cfg = parse_config_text(R"({
    "task": {"type": "scenario", "name": "stream",
             "params": {"d": 0.5, "sigma2": 0.5, "r": 0.1, "lambda": 2.0, "q": 1.0, "mu": 0.5}}
  })");
  CHECK(cfg.task.scenario.name == "stream");
  CHECK(cfg.task.scenario.stream.mu == 0.5);

  CHECK_THROWS_AS(parse_config_text(R"({
    "task": {"type": "scenario", "name": "tundra"}
  })"),
                  ModelError);
  CHECK_THROWS_AS(parse_config_text(R"({
    "task": {"type": "scenario", "name": "climate", "params": {"depth": 2}}
  })"),
                  ModelError);
}

TEST_CASE("number formatting for files") {
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
}
