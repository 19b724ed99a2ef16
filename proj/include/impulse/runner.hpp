#pragma once

#include <iosfwd>
#include <string>

#include "impulse/config.hpp"
#include "impulse/hybrid.hpp"

namespace impulse::cli {

// Executes the configured task, writing CSV/plot files under cfg.out_dir and
// a short summary to `log`. Returns the process exit code (0 ok, 2 config,
// 3 growth regime, 4 numerical).
int run_task(const RunConfig& cfg, int jobs, std::ostream& log);

// Grid + seed + generations per the numerics block; shared with the tests.
hybrid::Trajectory simulate_trajectory(const RunConfig& cfg);

// %.12g with "inf"/"nan" literals; the one formatter used for all file output.
std::string format_number(double v);

}  // namespace impulse::cli
