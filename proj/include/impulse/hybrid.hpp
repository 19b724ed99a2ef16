#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "impulse/analytic.hpp"
#include "impulse/model.hpp"
#include "impulse/season.hpp"

namespace impulse::hybrid {

struct RunOptions {
  season::SeasonConfig season{};
  std::optional<season::Box> box;  // hostile-boundary habitat when set
  // Transform roundoff seeds the empty far field at a small multiple of eps
  // times the maximum and then grows by e^rho per generation; zeroing below
  // this relative level once per generation keeps vacant regions vacant. Far
  // below every measurement tolerance; set to 0 to disable.
  double noise_floor_rel = 1e-12;
};

struct Trajectory {
  ModelParams params;
  std::vector<Field> generations;  // generations[0] is the initial state
  std::vector<std::string> advisories;
  std::optional<std::string> aborted;  // set when a run stopped early

  int count() const { return static_cast<int>(generations.size()) - 1; }
};

// One generation of the local model: stage map pointwise, then the season.
Field generation_Q(const ModelParams& p, const Field& n, const RunOptions& opt);
// One generation of the nonlocal model: season, kernel redistribution (the
// discrete kernel is renormalized to sum 1), then the stage map pointwise.
Field generation_P(const ModelParams& p, const Field& u, const RunOptions& opt);
Field generation_step(const ModelParams& p, const Field& u, const RunOptions& opt);

// Iterates the configured generation operator; a boundary-contamination abort
// returns the partial trajectory with `aborted` set.
Trajectory run(const ModelParams& p, const Field& initial, int generations,
               const RunOptions& opt);

// Outermost threshold crossing along direction e, linearly interpolated;
// returned as the coordinate e.x of the crossing point.
double front_position(const Field& f, double threshold, const Direction& e);

struct SpeedReport {
  Direction e;
  double analytic = std::numeric_limits<double>::quiet_NaN();
  double slope = 0.0;     // length per generation
  double residual = 0.0;  // RMS of the linear fit
  int generations_used = 0;
  double threshold = 0.0;
};

// Least-squares slope of front position against generation index over the
// post-burn-in window (at least 5 generations).
SpeedReport estimate_speed(const Trajectory& t, const Direction& e, double threshold,
                           double burn_in_fraction);

// Equilibrium level the simulator drives toward: the nonspatial equilibrium
// (its image under g for kernel models), clamped into the Ricker monotone
// range with an advisory.
double operative_equilibrium(const ModelParams& p,
                             std::vector<std::string>* advisories = nullptr);

// Default compactly supported initial data: indicator of a ball of radius 5h
// at half the equilibrium level, mollified over two cells. amplitude == 0
// selects the default.
Field seed_ball(const ModelParams& p, Field grid, double amplitude = 0.0,
                std::vector<std::string>* advisories = nullptr);

enum class Persistence { Persistent, Extinct, Undecided };
const char* persistence_name(Persistence p);

struct PersistenceOptions {
  double spacing = 0.0;  // 0: box length / 128
  int generations = 200;
  double tol_fraction = 1e-6;  // extinction level relative to pi1
  season::SeasonConfig season{};
};

Persistence classify_persistence(const ModelParams& p, const season::Box& box,
                                 const PersistenceOptions& opt);

// Bisection on the habitat length until the bracket is narrower than 2% of
// its midpoint. The endpoints must classify differently.
double critical_length_search(const ModelParams& p, double lo, double hi,
                              const PersistenceOptions& opt);

}  // namespace impulse::hybrid
