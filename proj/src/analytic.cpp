#include "impulse/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "impulse/quadrature.hpp"

namespace impulse::analytic {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_dim(const ModelParams& p, const Direction& e) {
  if (e.e.n != p.dim) {
    throw ModelError(ErrorCode::Config, "direction dimension does not match the model");
  }
}
}  // namespace

// ---------------------------------------------------------------------------
// Measures and transforms
// ---------------------------------------------------------------------------

GaussianMeasure measure_local(const ModelParams& p) {
  GaussianMeasure m;
  m.mass = map_slope0(p.map) * std::exp(growth_slope0(p.growth));
  m.mean = p.q;
  m.spread = 2.0 * p.A;
  return m;
}

GaussianMeasure measure_nonlocal(const ModelParams& p) {
  if (!p.kernel) {
    throw ModelError(ErrorCode::KernelUnsupported, "model has no dispersal kernel");
  }
  GaussianMeasure m = measure_local(p);
  m.mean = p.q - kernel_mean(*p.kernel, p.dim);
  m.spread = 2.0 * (p.A + kernel_shape(*p.kernel, p.dim));
  return m;
}

GaussianMeasure model_measure(const ModelParams& p) {
  return p.kernel ? measure_nonlocal(p) : measure_local(p);
}

double measure_density(const GaussianMeasure& m, const Vec& x) {
  int n = m.spread.n;
  Vec d = x - m.mean;
  double norm = std::pow(2.0 * M_PI, 0.5 * n) * std::sqrt(m.spread.det());
  return m.mass * std::exp(-0.5 * m.spread.inverse().quad(d)) / norm;
}

double mgf_measure(const GaussianMeasure& m, const Direction& e, double s) {
  double mean_e = e.e.dot(m.mean);
  double var_e = m.spread.quad(e.e);
  return m.mass * std::exp(s * mean_e + 0.5 * s * s * var_e);
}

double kernel_mgf(const KernelSpec& k, const Direction& e, double s) {
  if (std::holds_alternative<PointMassKernel>(k)) return 1.0;
  const auto& g = std::get<GaussianKernel>(k);
  return std::exp(-s * g.mu.dot(e.e) + g.B.quad(e.e) * s * s);
}

// ---------------------------------------------------------------------------
// Speeds
// ---------------------------------------------------------------------------

double speed_local(const ModelParams& p, const Direction& e) {
  require_dim(p, e);
  double rho = require_positive_net_growth(p);
  return 2.0 * std::sqrt(p.A.quad(e.e)) * std::sqrt(rho) + e.e.dot(p.q);
}

double speed_nonlocal(const ModelParams& p, const Direction& e) {
  require_dim(p, e);
  if (!p.kernel) {
    throw ModelError(ErrorCode::KernelUnsupported,
                     "nonlocal speed requires a Gaussian or point-mass kernel");
  }
  double rho = require_positive_net_growth(p);
  SymMat ab = p.A + kernel_shape(*p.kernel, p.dim);
  Vec drift = p.q - kernel_mean(*p.kernel, p.dim);
  return 2.0 * std::sqrt(ab.quad(e.e)) * std::sqrt(rho) + e.e.dot(drift);
}

double spreading_speed(const ModelParams& p, const Direction& e) {
  return p.kernel ? speed_nonlocal(p, e) : speed_local(p, e);
}

SpeedProfile speed_profile(const ModelParams& p, const Direction& e) {
  require_dim(p, e);
  double rho = require_positive_net_growth(p);
  GaussianMeasure m = model_measure(p);
  double mean_e = e.e.dot(m.mean);
  double half_var = 0.5 * m.spread.quad(e.e);  // <A_eff e, e>
  double log_mass = std::log(m.mass);

  SpeedProfile prof;
  prof.W = [log_mass, mean_e, half_var](double s) {
    return log_mass / s + mean_e + s * half_var;
  };
  prof.s_star = std::sqrt(rho / half_var);
  prof.c_star = prof.W(prof.s_star);
  return prof;
}

double ray_speed(const ModelParams& p, const Direction& e) {
  require_dim(p, e);
  require_positive_net_growth(p);
  if (p.dim == 1) {
    return spreading_speed(p, e);  // the only direction with positive projection
  }

  auto value_at = [&](double phi) -> double {
    Direction d = Direction::angle(phi);
    double proj = e.e.dot(d.e);
    if (proj <= 1e-12) return kInf;
    return spreading_speed(p, d) / proj;
  };

  const int kAngles = 720;
  double phi_e = std::atan2(e.e.y, e.e.x);
  double best_phi = phi_e;
  double best = value_at(phi_e);
  for (int i = 0; i < kAngles; ++i) {
    double phi = 2.0 * M_PI * i / kAngles;
    double v = value_at(phi);
    if (v < best) {
      best = v;
      best_phi = phi;
    }
  }
  double step = 2.0 * M_PI / kAngles;
  double refined = golden_min(value_at, best_phi - step, best_phi + step, 1e-10);
  return std::min(best, value_at(refined));
}

// ---------------------------------------------------------------------------
// Critical domain size
// ---------------------------------------------------------------------------

CriticalDomainReport critical_size(const ModelParams& p, DomainShape shape) {
  double scale = std::max(std::abs(p.A.xx), std::abs(p.A.yy));
  if (!p.A.is_isotropic(1e-12 * scale)) {
    throw ModelError(ErrorCode::AnisotropyUnsupported,
                     "critical domain size requires isotropic diffusion A = d I");
  }
  double d = p.A.xx;
  double rho = net_growth(p).rho;
  int n = (shape == DomainShape::Interval) ? 1 : p.dim;

  CriticalDomainReport rep;
  rep.blowup_advection = rho > 0.0 ? 2.0 * std::sqrt(d * rho) : 0.0;
  double window = 4.0 * d * rho - p.q.dot(p.q);
  if (window > 0.0) {
    rep.size = 2.0 * M_PI * d * std::sqrt(static_cast<double>(n) / window);
    rep.finite = true;
  } else {
    // The persistence window is empty at the equality point as well.
    rep.size = kInf;
    rep.finite = false;
  }
  return rep;
}

double critical_size_fisher(double d, double fp0, double q) {
  double window = 4.0 * d * fp0 - q * q;
  if (window <= 0.0) return kInf;
  return 2.0 * M_PI * d / std::sqrt(window);
}

// ---------------------------------------------------------------------------
// Nonspatial dynamics
// ---------------------------------------------------------------------------

double equilibrium_residual(const ModelParams& p, double n) {
  double gn = eval_map(p.map, n);
  double lo = std::min(n, gn);
  double hi = std::max(n, gn);
  if (lo == hi) return -1.0;

  // f must be bounded away from zero on the integration interval.
  const int kScan = 128;
  double f_lo = eval_growth(p.growth, lo);
  if (f_lo == 0.0) {
    throw ModelError(ErrorCode::QuadratureSingularity, "f vanishes at the integration endpoint");
  }
  bool positive = f_lo > 0.0;
  for (int i = 1; i <= kScan; ++i) {
    double w = lo + (hi - lo) * i / kScan;
    double fw = eval_growth(p.growth, w);
    if (fw == 0.0 || (fw > 0.0) != positive) {
      std::ostringstream msg;
      msg << "f vanishes inside the integration interval [" << lo << ", " << hi << "]";
      throw ModelError(ErrorCode::QuadratureSingularity, msg.str());
    }
  }

  QuadratureOptions opt;
  opt.abs_tol = 1e-12;
  double value = integrate([&](double w) { return 1.0 / eval_growth(p.growth, w); }, gn, n, opt);
  return value - 1.0;
}

namespace {

double positive_root_of_growth(const GrowthSpec& g) {
  if (const auto* lg = std::get_if<LogisticGrowth>(&g)) {
    (void)lg;
    return 1.0;
  }
  if (const auto* qd = std::get_if<QuadraticGrowth>(&g)) {
    if (qd->rate > 0.0 && qd->quad < 0.0) return -qd->rate / qd->quad;
  }
  throw ModelError(ErrorCode::Config,
                   "no positive equilibrium: growth has no positive root under an identity map");
}

}  // namespace

namespace {

// One nonspatial generation of the local order (map, then season flow).
double generation_map_value(const ModelParams& p, double n) {
  return growth_flow(p.growth, eval_map(p.map, n), 1.0);
}

}  // namespace

EquilibriumInfo equilibrium_nonspatial(const ModelParams& p) {
  double rho = require_positive_net_growth(p);
  (void)rho;

  EquilibriumInfo info;
  info.pi0 = 0.0;
  info.pi_plus = map_upper_bound(p.map);
  info.extinct = false;

  if (is_identity_map(p.map)) {
    info.pi1 = positive_root_of_growth(p.growth);
    return info;
  }

  auto residual_or_nan = [&](double n) -> double {
    try {
      return equilibrium_residual(p, n);
    } catch (const ModelError& err) {
      if (err.code() != ErrorCode::QuadratureSingularity) throw;
      return std::numeric_limits<double>::quiet_NaN();
    }
  };

  // Expand a candidate ladder upward from eps in quarter octaves until the
  // residual changes sign between consecutive well-defined candidates (plain
  // doubling can jump across the root together with the singular zone of 1/f
  // that flanks it).
  const double eps = 1e-12;
  const double step = std::pow(2.0, 0.25);
  const double cap = std::isfinite(info.pi_plus) ? 4.0 * info.pi_plus : 1e9;
  double prev_n = 0.0;
  double prev_r = 0.0;
  bool have_prev = false;
  bool skipped_singular = false;
  for (double n = eps; n <= cap; n *= step) {
    double r = residual_or_nan(n);
    if (std::isnan(r)) {
      if (have_prev) {
        // The residual diverges at the edge of the singular zone; probe just
        // inside the valid side for a sign change against the last candidate.
        double lo = prev_n, hi = n;
        for (int i = 0; i < 80; ++i) {
          double mid = 0.5 * (lo + hi);
          if (std::isnan(residual_or_nan(mid))) hi = mid; else lo = mid;
        }
        double r_edge = residual_or_nan(lo);
        if (!std::isnan(r_edge) && (r_edge > 0.0) != (prev_r > 0.0)) {
          info.pi1 = find_root([&](double x) { return equilibrium_residual(p, x); }, prev_n, lo,
                               1e-14);
          return info;
        }
      }
      have_prev = false;
      skipped_singular = true;
      continue;
    }
    if (have_prev && (r > 0.0) != (prev_r > 0.0)) {
      info.pi1 = find_root([&](double x) { return equilibrium_residual(p, x); }, prev_n, n, 1e-14);
      return info;
    }
    prev_n = n;
    prev_r = r;
    have_prev = true;
  }

  // Degenerate case: the positive fixed point of the generation map sits at a
  // zero of f (the season trajectory never moves), so the time-1 condition is
  // vacuous there. Locate the fixed point directly.
  {
    double prev_h = 0.0;
    double prev_x = 0.0;
    bool have = false;
    for (double n = eps; n <= cap; n *= step) {
      double h = generation_map_value(p, n) - n;
      if (have && (h > 0.0) != (prev_h > 0.0)) {
        double fixed = find_root([&](double x) { return generation_map_value(p, x) - x; },
                                 prev_x, n, 1e-14);
        if (std::abs(eval_growth(p.growth, fixed)) < 1e-9 &&
            std::abs(eval_map(p.map, fixed) - fixed) < 1e-9 * std::max(1.0, fixed)) {
          info.pi1 = fixed;
          return info;
        }
        break;
      }
      prev_x = n;
      prev_h = h;
      have = true;
    }
  }

  if (skipped_singular) {
    throw ModelError(ErrorCode::QuadratureSingularity,
                     "equilibrium bracket requires integrating across a zero of f");
  }
  throw ModelError(ErrorCode::BracketInvalid, "no sign change found for the equilibrium residual");
}

double nonspatial_step(const ModelParams& p, double u) {
  if (p.kernel) {
    // Dispersal preserves spatially constant states; the map acts last.
    return eval_map(p.map, growth_flow(p.growth, u, 1.0));
  }
  return growth_flow(p.growth, eval_map(p.map, u), 1.0);
}

std::vector<double> nonspatial_iterate(const ModelParams& p, double u0, int m) {
  if (u0 < 0.0) throw std::invalid_argument("nonspatial_iterate: u0 must be >= 0");
  std::vector<double> seq;
  seq.reserve(static_cast<std::size_t>(m));
  double u = u0;
  for (int i = 0; i < m; ++i) {
    u = nonspatial_step(p, u);
    seq.push_back(u);
  }
  return seq;
}

// ---------------------------------------------------------------------------
// Scenarios
// ---------------------------------------------------------------------------

ClimateReport climate_bounds(const ClimateScenario& s) {
  ClimateReport rep;
  rep.rho = std::log1p(s.lambda) - s.gamma;
  double geom = (s.L1 * s.L1 + s.L2 * s.L2) / (s.L1 * s.L1 * s.L2 * s.L2);
  double radicand = 4.0 * s.d * rep.rho - 4.0 * s.d * s.d * M_PI * M_PI * geom;
  if (radicand <= 0.0) {
    throw ModelError(ErrorCode::NoPersistenceWindow,
                     "domain too small: no envelope speed admits persistence");
  }
  rep.c_max = std::sqrt(radicand);
  rep.window_open =
      1.0 / (s.L1 * s.L1) + 1.0 / (s.L2 * s.L2) <
      (rep.rho - s.c * s.c / (4.0 * s.d)) / (s.d * M_PI * M_PI);
  rep.speed_right = 2.0 * std::sqrt(s.d * rep.rho) + s.c;
  rep.speed_left = 2.0 * std::sqrt(s.d * rep.rho) - s.c;
  return rep;
}

StreamReport stream_bounds(const StreamScenario& s) {
  StreamReport rep;
  rep.rho = std::log1p(s.lambda) - s.r;
  rep.persists = (1.0 + s.lambda) * std::exp(-s.r) > 1.0;
  if (!rep.persists) {
    rep.spreads_both_ways = false;
    rep.speed_down = std::numeric_limits<double>::quiet_NaN();
    rep.speed_up = rep.speed_down;
    return rep;
  }
  double shared = 2.0 * std::sqrt((s.d + s.sigma2) * rep.rho);
  rep.speed_down = shared + (s.q - s.mu);
  rep.speed_up = shared - (s.q - s.mu);
  double drift = s.q - s.mu;
  rep.spreads_both_ways =
      1.0 + s.lambda > std::exp(s.r + drift * drift / (4.0 * (s.d + s.sigma2)));
  return rep;
}

SavannahReport savannah_bounds(const SavannahScenario& s) {
  if (!(s.s > 0.0 && s.s < 1.0)) {
    throw ModelError(ErrorCode::Config, "fire loss fraction must lie in (0, 1)");
  }
  SavannahReport rep;
  rep.rho = s.r + std::log(1.0 - s.s);
  if (std::exp(s.r) * (1.0 - s.s) <= 1.0) {
    throw ModelError(ErrorCode::ExtinctionRegime,
                     "extinction regime: e^r (1-s) <= 1");
  }
  double er = std::exp(s.r);
  rep.n_star = ((1.0 - s.s) * er - 1.0) / ((1.0 - s.s) * (er - 1.0));
  return rep;
}

ModelParams savannah_params(const SavannahScenario& s) {
  ModelParams p;
  p.dim = 2;
  p.A = SymMat::diag2(s.a11 * s.a11, s.a22 * s.a22);
  p.q = Vec::of2(s.q1, s.q2);
  p.growth = LogisticGrowth{s.r};
  p.map = LinearMap{1.0 - s.s};
  return p;
}

}  // namespace impulse::analytic
