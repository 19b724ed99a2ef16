#include "impulse/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "impulse/fft.hpp"

namespace impulse::hybrid {

namespace {

void apply_map_pointwise(const StageMapSpec& map, std::vector<double>& values) {
  long long n = static_cast<long long>(values.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) {
    values[static_cast<std::size_t>(i)] = eval_map(map, values[static_cast<std::size_t>(i)]);
  }
}

Field advance_season(const ModelParams& p, const Field& u, const RunOptions& opt) {
  if (opt.box) return season::advance_dirichlet(p, u, opt.season);
  return season::advance_free(p, u, opt.season);
}

// Discrete dispersal weights in wrap-around order. The analytic route folds
// the kernel in as a displacement with mean -mu (measure mean q - mu), so the
// weights sample the reflected density; renormalized to sum exactly 1.
std::vector<double> kernel_weights(const ModelParams& p, const Field& f) {
  const auto* g = std::get_if<GaussianKernel>(&*p.kernel);
  if (g == nullptr) {
    throw ModelError(ErrorCode::KernelUnsupported, "only Gaussian kernels are discretized");
  }
  double reach = 8.0 * std::sqrt(2.0 * g->B.max_eig()) + g->mu.norm();
  double half_x = 0.5 * f.ax.spacing * f.nx();
  double half_y = f.dim == 2 ? 0.5 * f.ay.spacing * f.ny() : half_x;
  if (reach > std::min(half_x, half_y)) {
    throw ModelError(ErrorCode::KernelGridMismatch,
                     "kernel support exceeds the simulation grid");
  }

  std::vector<double> w(f.size(), 0.0);
  auto offset = [](int i, int n, double h) {
    int k = (i <= n / 2) ? i : i - n;
    return k * h;
  };
  if (f.dim == 1) {
    for (int i = 0; i < f.nx(); ++i) {
      Vec x = Vec::of(-offset(i, f.nx(), f.ax.spacing));
      w[static_cast<std::size_t>(i)] = kernel_density(*g, x) * f.ax.spacing;
    }
  } else {
    for (int ix = 0; ix < f.nx(); ++ix) {
      for (int iy = 0; iy < f.ny(); ++iy) {
        Vec x = Vec::of2(-offset(ix, f.nx(), f.ax.spacing), -offset(iy, f.ny(), f.ay.spacing));
        w[static_cast<std::size_t>(ix) * f.ny() + iy] =
            kernel_density(*g, x) * f.ax.spacing * f.ay.spacing;
      }
    }
  }
  double total = 0.0;
  for (double v : w) total += v;
  if (!(total > 0.0)) {
    throw ModelError(ErrorCode::KernelGridMismatch, "kernel mass vanishes on the grid");
  }
  for (double& v : w) v /= total;
  return w;
}

}  // namespace

Field generation_Q(const ModelParams& p, const Field& n, const RunOptions& opt) {
  Field f = n;
  apply_map_pointwise(p.map, f.values);
  return advance_season(p, f, opt);
}

Field generation_P(const ModelParams& p, const Field& u, const RunOptions& opt) {
  if (!p.kernel) {
    throw ModelError(ErrorCode::KernelUnsupported, "generation_P requires a dispersal kernel");
  }
  if (opt.box && !std::holds_alternative<PointMassKernel>(*p.kernel)) {
    throw ModelError(ErrorCode::KernelUnsupported,
                     "kernel dispersal is defined on free space, not on a hostile-boundary box");
  }
  Field f = advance_season(p, u, opt);
  if (!std::holds_alternative<PointMassKernel>(*p.kernel)) {
    std::vector<double> w = kernel_weights(p, f);
    f.values = (f.dim == 2) ? fft::convolve_2d(f.values, w, f.nx(), f.ny())
                            : fft::convolve(f.values, w);
    for (double& v : f.values) v = v < 0.0 ? 0.0 : v;
  }
  apply_map_pointwise(p.map, f.values);
  return f;
}

Field generation_step(const ModelParams& p, const Field& u, const RunOptions& opt) {
  Field f = p.kernel ? generation_P(p, u, opt) : generation_Q(p, u, opt);
  if (opt.noise_floor_rel > 0.0) {
    double floor = opt.noise_floor_rel * f.max_value();
    for (double& v : f.values) {
      if (v < floor) v = 0.0;
    }
  }
  return f;
}

Trajectory run(const ModelParams& p, const Field& initial, int generations,
               const RunOptions& opt) {
  if (generations < 1) throw ModelError(ErrorCode::Config, "generations must be >= 1");
  Trajectory traj;
  traj.params = p;
  traj.generations.reserve(static_cast<std::size_t>(generations) + 1);
  traj.generations.push_back(initial);
  for (int m = 0; m < generations; ++m) {
    try {
      traj.generations.push_back(generation_step(p, traj.generations.back(), opt));
    } catch (const ModelError& err) {
      if (err.code() == ErrorCode::BoundaryContamination) {
        traj.aborted = err.what();
        break;
      }
      throw;
    }
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Front tracking
// ---------------------------------------------------------------------------

namespace {

double front_position_1d(const Field& f, double thr, double sign) {
  int n = f.nx();
  auto value = [&](int i) { return f.at(sign > 0 ? i : n - 1 - i); };
  auto coord = [&](int i) { return f.ax.coord(sign > 0 ? i : n - 1 - i); };
  // Scan inward from the far end along the direction of travel.
  int outer = -1;
  for (int i = n - 1; i >= 0; --i) {
    if (value(i) >= thr) {
      outer = i;
      break;
    }
  }
  if (outer < 0) {
    throw ModelError(ErrorCode::FrontNotFound, "no value reaches the threshold");
  }
  if (outer == n - 1) {
    throw ModelError(ErrorCode::FrontNotFound, "front lies outside the grid");
  }
  double v0 = value(outer);
  double v1 = value(outer + 1);
  double frac = (v0 - thr) / (v0 - v1);  // v0 >= thr > v1
  double x = coord(outer) + frac * (coord(outer + 1) - coord(outer));
  return sign * x;
}

double bilinear(const Field& f, double x, double y) {
  double sx = (x - f.ax.origin) / f.ax.spacing;
  double sy = (y - f.ay.origin) / f.ay.spacing;
  int ix = std::clamp(static_cast<int>(std::floor(sx)), 0, f.nx() - 2);
  int iy = std::clamp(static_cast<int>(std::floor(sy)), 0, f.ny() - 2);
  double tx = std::clamp(sx - ix, 0.0, 1.0);
  double ty = std::clamp(sy - iy, 0.0, 1.0);
  return (1 - tx) * (1 - ty) * f.at(ix, iy) + tx * (1 - ty) * f.at(ix + 1, iy) +
         (1 - tx) * ty * f.at(ix, iy + 1) + tx * ty * f.at(ix + 1, iy + 1);
}

double front_position_2d(const Field& f, double thr, const Direction& e) {
  double cx = f.ax.origin + 0.5 * f.ax.length();
  double cy = f.ay.origin + 0.5 * f.ay.length();
  // Distance from the center to the boundary along e.
  double tmax = std::numeric_limits<double>::infinity();
  if (e.e.x > 1e-14) tmax = std::min(tmax, (f.ax.coord(f.nx() - 1) - cx) / e.e.x);
  if (e.e.x < -1e-14) tmax = std::min(tmax, (f.ax.origin - cx) / e.e.x);
  if (e.e.y > 1e-14) tmax = std::min(tmax, (f.ay.coord(f.ny() - 1) - cy) / e.e.y);
  if (e.e.y < -1e-14) tmax = std::min(tmax, (f.ay.origin - cy) / e.e.y);

  double step = 0.5 * std::min(f.ax.spacing, f.ay.spacing);
  int count = static_cast<int>(tmax / step);
  auto sample = [&](int i) { return bilinear(f, cx + i * step * e.e.x, cy + i * step * e.e.y); };

  int outer = -1;
  for (int i = count; i >= 0; --i) {
    if (sample(i) >= thr) {
      outer = i;
      break;
    }
  }
  if (outer < 0) throw ModelError(ErrorCode::FrontNotFound, "no value reaches the threshold");
  if (outer == count) throw ModelError(ErrorCode::FrontNotFound, "front lies outside the grid");
  double v0 = sample(outer);
  double v1 = sample(outer + 1);
  double frac = (v0 - thr) / (v0 - v1);
  double t = (outer + frac) * step;
  return e.e.x * cx + e.e.y * cy + t;
}

}  // namespace

double front_position(const Field& f, double threshold, const Direction& e) {
  if (!(threshold > 0.0)) throw ModelError(ErrorCode::Config, "threshold must be positive");
  if (f.dim == 1) return front_position_1d(f, threshold, e.e.x >= 0.0 ? 1.0 : -1.0);
  return front_position_2d(f, threshold, e);
}

SpeedReport estimate_speed(const Trajectory& t, const Direction& e, double threshold,
                           double burn_in_fraction) {
  int total = t.count();
  int first = static_cast<int>(std::ceil(burn_in_fraction * total));
  int used = total - first + 1;
  if (used < 5) {
    throw ModelError(ErrorCode::InsufficientGenerations,
                     "fewer than 5 generations after burn-in");
  }

  std::vector<double> pos(static_cast<std::size_t>(used));
  for (int m = first; m <= total; ++m) {
    pos[static_cast<std::size_t>(m - first)] =
        front_position(t.generations[static_cast<std::size_t>(m)], threshold, e);
  }

  double mean_m = 0.0, mean_p = 0.0;
  for (int i = 0; i < used; ++i) {
    mean_m += first + i;
    mean_p += pos[static_cast<std::size_t>(i)];
  }
  mean_m /= used;
  mean_p /= used;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < used; ++i) {
    double dm = first + i - mean_m;
    sxx += dm * dm;
    sxy += dm * (pos[static_cast<std::size_t>(i)] - mean_p);
  }
  double slope = sxy / sxx;
  double intercept = mean_p - slope * mean_m;
  double ss = 0.0;
  for (int i = 0; i < used; ++i) {
    double r = pos[static_cast<std::size_t>(i)] - (slope * (first + i) + intercept);
    ss += r * r;
  }

  SpeedReport rep;
  rep.e = e;
  rep.slope = slope;
  rep.residual = std::sqrt(ss / used);
  rep.generations_used = used;
  rep.threshold = threshold;
  try {
    rep.analytic = analytic::spreading_speed(t.params, e);
  } catch (const ModelError&) {
    // extinction regime: leave NaN
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Equilibrium conventions and initial data
// ---------------------------------------------------------------------------

double operative_equilibrium(const ModelParams& p, std::vector<std::string>* advisories) {
  analytic::EquilibriumInfo eq = analytic::equilibrium_nonspatial(p);
  double pi1 = p.kernel ? eval_map(p.map, eq.pi1) : eq.pi1;
  double s_star = map_monotone_bound(p.map);
  if (pi1 > s_star) {
    if (advisories) {
      std::ostringstream msg;
      msg << "equilibrium " << pi1 << " clamped to the monotone range bound " << s_star;
      advisories->push_back(msg.str());
    }
    pi1 = s_star;
  }
  return pi1;
}

Field seed_ball(const ModelParams& p, Field grid, double amplitude,
                std::vector<std::string>* advisories) {
  if (amplitude <= 0.0) {
    try {
      amplitude = 0.5 * operative_equilibrium(p, advisories);
    } catch (const ModelError& err) {
      if (err.code() != ErrorCode::ExtinctionRegime) throw;
      amplitude = 0.5;  // extinction regime: any small positive seed
    }
  }
  double h = grid.ax.spacing;
  double radius = 5.0 * h;
  double taper = 2.0 * h;
  double cx = grid.ax.origin + 0.5 * grid.ax.length();
  double cy = grid.dim == 2 ? grid.ay.origin + 0.5 * grid.ay.length() : 0.0;
  auto profile = [&](double r) {
    if (r <= radius - taper) return amplitude;
    if (r >= radius) return 0.0;
    double t = (r - (radius - taper)) / taper;
    return amplitude * 0.5 * (1.0 + std::cos(M_PI * t));
  };
  for (int ix = 0; ix < grid.nx(); ++ix) {
    double dx = grid.ax.coord(ix) - cx;
    if (grid.dim == 1) {
      grid.at(ix) = profile(std::abs(dx));
    } else {
      for (int iy = 0; iy < grid.ny(); ++iy) {
        double dy = grid.ay.coord(iy) - cy;
        grid.at(ix, iy) = profile(std::hypot(dx, dy));
      }
    }
  }
  return grid;
}

// ---------------------------------------------------------------------------
// Persistence classification
// ---------------------------------------------------------------------------

const char* persistence_name(Persistence p) {
  switch (p) {
    case Persistence::Persistent: return "persistent";
    case Persistence::Extinct: return "extinct";
    case Persistence::Undecided: return "undecided";
  }
  return "unknown";
}

namespace {

struct ProbeResult {
  Persistence verdict = Persistence::Undecided;
  double trend = 0.0;  // log-slope of the field maximum near the end
};

ProbeResult probe_box(const ModelParams& p, const season::Box& box,
                      const PersistenceOptions& opt) {
  double spacing = opt.spacing > 0.0
                       ? opt.spacing
                       : std::min(box.L1, box.dim == 2 ? box.L2 : box.L1) / 128.0;
  Field grid = season::dirichlet_zeros(box, spacing);
  Field state = seed_ball(p, grid);

  double pi1;
  try {
    pi1 = operative_equilibrium(p);
  } catch (const ModelError&) {
    pi1 = 1.0;
  }
  double tol = opt.tol_fraction * pi1;

  std::vector<double> maxima;
  maxima.reserve(static_cast<std::size_t>(opt.generations) + 1);
  maxima.push_back(state.max_value());
  RunOptions ropt;
  ropt.season = opt.season;
  ropt.box = box;
  for (int m = 0; m < opt.generations; ++m) {
    state = generation_step(p, state, ropt);
    maxima.push_back(state.max_value());
  }

  ProbeResult res;
  int last = static_cast<int>(maxima.size()) - 1;
  int tail = std::max(1, last / 5);
  double first_tail = maxima[static_cast<std::size_t>(last - tail)];
  res.trend = std::log(std::max(maxima[static_cast<std::size_t>(last)], 1e-300) /
                       std::max(first_tail, 1e-300)) / tail;

  bool nondecreasing_tail = true;
  for (int m = last - std::min(10, last) + 1; m <= last; ++m) {
    if (maxima[static_cast<std::size_t>(m)] + 1e-12 * pi1 <
        maxima[static_cast<std::size_t>(m - 1)]) {
      nondecreasing_tail = false;
      break;
    }
  }
  bool above_tol_tail = true;
  for (int m = last - std::min(10, last) + 1; m <= last; ++m) {
    if (maxima[static_cast<std::size_t>(m)] <= tol) above_tol_tail = false;
  }

  if (nondecreasing_tail && above_tol_tail) {
    res.verdict = Persistence::Persistent;
  } else if (maxima[static_cast<std::size_t>(last)] < tol) {
    res.verdict = Persistence::Extinct;
  }
  return res;
}

// Near-critical probes decay too slowly to cross the extinction level within
// the generation budget; the late-time trend of the maximum decides the side.
bool leans_persistent(const ProbeResult& r) {
  if (r.verdict == Persistence::Persistent) return true;
  if (r.verdict == Persistence::Extinct) return false;
  return r.trend > 0.0;
}

}  // namespace

Persistence classify_persistence(const ModelParams& p, const season::Box& box,
                                 const PersistenceOptions& opt) {
  return probe_box(p, box, opt).verdict;
}

double critical_length_search(const ModelParams& p, double lo, double hi,
                              const PersistenceOptions& opt) {
  if (!(lo > 0.0) || !(hi > lo)) {
    throw ModelError(ErrorCode::Config, "bracket must satisfy 0 < lo < hi");
  }
  auto square = [&](double length) {
    season::Box box;
    box.dim = p.dim;
    box.L1 = length;
    box.L2 = length;
    return box;
  };
  bool lo_persists = leans_persistent(probe_box(p, square(lo), opt));
  bool hi_persists = leans_persistent(probe_box(p, square(hi), opt));
  if (lo_persists == hi_persists) {
    throw ModelError(ErrorCode::BracketInvalid,
                     "both bracket endpoints classify identically");
  }
  while (hi - lo > 0.02 * 0.5 * (hi + lo)) {
    double mid = 0.5 * (lo + hi);
    bool mid_persists = leans_persistent(probe_box(p, square(mid), opt));
    if (mid_persists == lo_persists) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace impulse::hybrid
