#include "impulse/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "impulse/quadrature.hpp"

namespace impulse::oracle {

namespace {

double normal_pdf(double x, double mean, double var) {
  double d = x - mean;
  return std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * M_PI * var);
}

QuadratureOptions tight_quadrature(double scale) {
  QuadratureOptions opt;
  opt.abs_tol = 1e-15 * std::max(scale, 1e-30);
  opt.rel_tol = 1e-12;
  return opt;
}

}  // namespace

ProjectedMeasure project_measure(const analytic::GaussianMeasure& m, const Direction& e) {
  ProjectedMeasure pm;
  pm.mass = m.mass;
  int n = m.spread.n;
  if (n == 1) {
    double sigma = std::sqrt(m.spread.xx);
    double lo = m.mean.x - 14.0 * sigma;
    double hi = m.mean.x + 14.0 * sigma;
    auto dens = [&](double x) { return analytic::measure_density(m, Vec::of(x)); };
    QuadratureOptions opt = tight_quadrature(m.mass / sigma);
    double mass_q = integrate(dens, lo, hi, opt);
    double mean_q = integrate([&](double x) { return x * dens(x); }, lo, hi, opt) / mass_q;
    double var_q =
        integrate([&](double x) { return (x - mean_q) * (x - mean_q) * dens(x); }, lo, hi, opt) /
        mass_q;
    pm.mean = mean_q * e.e.x;
    pm.var = var_q * e.e.x * e.e.x;
    return pm;
  }

  double s1 = std::sqrt(m.spread.xx);
  double s2 = std::sqrt(m.spread.yy);
  double lo1 = m.mean.x - 12.0 * s1, hi1 = m.mean.x + 12.0 * s1;
  double lo2 = m.mean.y - 12.0 * s2, hi2 = m.mean.y + 12.0 * s2;
  QuadratureOptions inner = tight_quadrature(m.mass / (s1 * s2));
  QuadratureOptions outer = tight_quadrature(m.mass / s1);

  auto plane_integral = [&](auto weight) {
    return integrate(
        [&](double x) {
          return integrate(
              [&](double y) {
                Vec v = Vec::of2(x, y);
                return weight(v) * analytic::measure_density(m, v);
              },
              lo2, hi2, inner);
        },
        lo1, hi1, outer);
  };

  double mass_q = plane_integral([](const Vec&) { return 1.0; });
  double mean_q = plane_integral([&](const Vec& v) { return v.dot(e.e); }) / mass_q;
  double var_q = plane_integral([&](const Vec& v) {
    double d = v.dot(e.e) - mean_q;
    return d * d;
  }) / mass_q;
  pm.mean = mean_q;
  pm.var = var_q;
  return pm;
}

// ---------------------------------------------------------------------------
// Weinberger recursion
// ---------------------------------------------------------------------------

namespace {

struct RecursionSetup {
  std::vector<double> s;
  double s_lo = 0.0;
  double hs = 0.0;
  std::vector<double> weights;   // quadrature weights (sum ~ 1)
  std::vector<double> offsets;   // c - eta_j in grid units
  double probe_s = 0.0;
  int probe_index = 0;
};

double phi_of(double s, double level) {
  return level * std::clamp(-s, 0.0, 1.0);
}

RecursionSetup make_setup(const ProjectedMeasure& pm, const OracleConfig& cfg, double c) {
  RecursionSetup setup;
  double sigma = std::sqrt(pm.var);
  double hs = cfg.s_spacing > 0.0 ? cfg.s_spacing : std::min(0.05, sigma / 10.0);
  setup.hs = hs;

  // The transition never travels far past the probe: a frame slow enough to
  // spread triggers the early exit when the probe is crossed, and a pinning
  // frame holds the transition near the obstacle. The grid ends a truncation
  // reach plus tail margin beyond the probe, guarded by the edge check.
  double margin = 10.0 * sigma + std::abs(pm.mean) + 2.0;
  setup.probe_s = cfg.probe_sigmas * sigma;
  setup.s_lo = -(margin + 2.0);
  double s_hi = setup.probe_s + cfg.truncation_radius * sigma + margin + 2.0;
  int count = static_cast<int>(std::ceil((s_hi - setup.s_lo) / hs)) + 1;
  setup.s.resize(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) setup.s[static_cast<std::size_t>(i)] = setup.s_lo + i * hs;
  setup.probe_index =
      std::clamp(static_cast<int>(std::lround((setup.probe_s - setup.s_lo) / hs)), 0, count - 1);

  // Trapezoid weights of the projected Gaussian truncated at the configured
  // radius; the truncated tail mass is far below the tested tolerances.
  int half = static_cast<int>(std::ceil(cfg.truncation_radius * sigma / hs));
  setup.weights.resize(static_cast<std::size_t>(2 * half + 1));
  setup.offsets.resize(setup.weights.size());
  for (int j = -half; j <= half; ++j) {
    double eta = pm.mean + j * hs;
    setup.weights[static_cast<std::size_t>(j + half)] = normal_pdf(eta, pm.mean, pm.var) * hs;
    setup.offsets[static_cast<std::size_t>(j + half)] = (c - eta) / hs;
  }
  return setup;
}

// One application of the linearized operator with the frame shift, evaluated
// by interpolating the current profile: values left of the grid extend as the
// plateau, values right of it as zero.
void apply_operator(const RecursionSetup& setup, double mass, const std::vector<double>& in,
                    std::vector<double>& out) {
  int count = static_cast<int>(in.size());
  int terms = static_cast<int>(setup.weights.size());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < count; ++i) {
    double acc = 0.0;
    for (int j = 0; j < terms; ++j) {
      double pos = i + setup.offsets[static_cast<std::size_t>(j)];
      double v;
      if (pos <= 0.0) {
        v = in[0];
      } else if (pos >= count - 1) {
        v = 0.0;
      } else {
        int k = static_cast<int>(pos);
        double frac = pos - k;
        v = (1.0 - frac) * in[static_cast<std::size_t>(k)] +
            frac * in[static_cast<std::size_t>(k) + 1];
      }
      acc += setup.weights[static_cast<std::size_t>(j)] * v;
    }
    out[static_cast<std::size_t>(i)] = mass * acc;
  }
}

void assert_monotone(const std::vector<double>& prev, const std::vector<double>& next,
                     double scale) {
  for (std::size_t i = 0; i < next.size(); ++i) {
    double slack = 1e-12 * std::max(scale, prev[i]);
    if (next[i] + slack < prev[i]) {
      throw ModelError(ErrorCode::GridExhausted,
                       "recursion lost monotonicity in m; grid resolution too coarse");
    }
    if (i > 0 && next[i] > next[i - 1] + 1e-12 * std::max(scale, next[i - 1])) {
      throw ModelError(ErrorCode::GridExhausted,
                       "recursion lost monotonicity in s; grid resolution too coarse");
    }
  }
}

OracleState run_recursion(const ProjectedMeasure& pm, const OracleConfig& cfg, double c) {
  RecursionSetup setup = make_setup(pm, cfg, c);
  int count = static_cast<int>(setup.s.size());

  OracleState state;
  state.s = setup.s;
  state.candidate_speed = c;
  state.profile.resize(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    state.profile[static_cast<std::size_t>(i)] = phi_of(setup.s[static_cast<std::size_t>(i)],
                                                        cfg.phi_level);
  }

  double spread_threshold = cfg.phi_level * (1.0 + 1e-6);
  // The linear operator has no saturation; cap the profile well above the
  // detection threshold to keep late iterations finite.
  double cap = 1e6 * cfg.phi_level;

  std::vector<double> next(static_cast<std::size_t>(count));
  for (int m = 0; m < cfg.iterations; ++m) {
    apply_operator(setup, pm.mass, state.profile, next);
    for (int i = 0; i < count; ++i) {
      double v = std::max(next[static_cast<std::size_t>(i)],
                          phi_of(setup.s[static_cast<std::size_t>(i)], cfg.phi_level));
      next[static_cast<std::size_t>(i)] = std::min(v, cap);
    }
    assert_monotone(state.profile, next, cfg.phi_level);
    state.profile.swap(next);
    state.iteration = m + 1;

    if (state.profile.back() > 1e-6 * cfg.phi_level) {
      throw ModelError(ErrorCode::GridExhausted, "profile transition reached the s-grid edge");
    }
    if (state.profile[static_cast<std::size_t>(setup.probe_index)] > spread_threshold) {
      state.spread_detected = true;
      break;
    }
  }
  return state;
}

double upper_speed_guess(const ProjectedMeasure& pm) {
  if (!(pm.mass > 1.0)) return 0.0;
  double s_star = std::sqrt(2.0 * std::log(pm.mass) / pm.var);
  return std::log(pm.mass) / s_star + pm.mean + 0.5 * s_star * pm.var;
}

}  // namespace

OracleState weinberger_iterate(const analytic::GaussianMeasure& m, const Direction& e,
                               const OracleConfig& cfg, double c) {
  ProjectedMeasure pm = project_measure(m, e);
  return run_recursion(pm, cfg, c);
}

double weinberger_speed(const analytic::GaussianMeasure& m, const Direction& e,
                        const OracleConfig& cfg) {
  ProjectedMeasure pm = project_measure(m, e);
  if (!(pm.mass > 1.0)) {
    throw ModelError(ErrorCode::ExtinctionRegime,
                     "measure mass <= 1: no spreading speed");
  }
  double guess = upper_speed_guess(pm);
  double lo = 0.0;
  double hi = std::max(2.0 * guess, 0.5);

  auto spreads_at = [&](double c) { return run_recursion(pm, cfg, c).spread_detected; };

  if (!spreads_at(lo)) {
    // No positive speed detectable: the frame at rest already pins.
    return 0.0;
  }
  int expand = 0;
  while (spreads_at(hi)) {
    hi *= 2.0;
    if (++expand > 6) {
      throw ModelError(ErrorCode::BracketInvalid, "speed bisection upper bound did not pin");
    }
  }
  while (hi - lo > cfg.speed_tolerance) {
    double mid = 0.5 * (lo + hi);
    if (spreads_at(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// MGF quadrature routes
// ---------------------------------------------------------------------------

double mgf_quadrature(const analytic::GaussianMeasure& m, const Direction& e, double s) {
  int n = m.spread.n;
  // Order-of-magnitude estimate of the result, used only to set tolerances.
  double magnitude =
      m.mass * std::exp(s * e.e.dot(m.mean) + 0.5 * s * s * m.spread.quad(e.e));
  if (n == 1) {
    double sigma = std::sqrt(m.spread.xx);
    double center = m.mean.x + s * m.spread.xx * e.e.x;
    return integrate(
        [&](double x) {
          return std::exp(s * x * e.e.x) * analytic::measure_density(m, Vec::of(x));
        },
        center - 14.0 * sigma, center + 14.0 * sigma, tight_quadrature(magnitude));
  }
  Vec tilt = m.spread.mul(e.e);
  double c1 = m.mean.x + s * tilt.x;
  double c2 = m.mean.y + s * tilt.y;
  double s1 = std::sqrt(m.spread.xx);
  double s2 = std::sqrt(m.spread.yy);
  QuadratureOptions inner = tight_quadrature(magnitude / s1);
  QuadratureOptions outer = tight_quadrature(magnitude);
  return integrate(
      [&](double x) {
        return integrate(
            [&](double y) {
              Vec v = Vec::of2(x, y);
              return std::exp(s * v.dot(e.e)) * analytic::measure_density(m, v);
            },
            c2 - 13.0 * s2, c2 + 13.0 * s2, inner);
      },
      c1 - 13.0 * s1, c1 + 13.0 * s1, outer);
}

namespace {

// 1D factor of the convolution-form MGF: the dispersal measure along one axis
// evaluated as integral over y of e^{s e_i y} integral over z of
// K_i(z - y) G_i(z) dz, with unit-mass Gaussian factors.
double convolution_axis_mgf(double se, double a, double q, double b, double mu) {
  double sigma_g = std::sqrt(2.0 * a);
  double sigma_k = std::sqrt(2.0 * std::max(b, 1e-30));
  double sigma_l = std::sqrt(2.0 * (a + b));
  auto heat = [&](double z) { return normal_pdf(z, q, 2.0 * a); };
  auto kern = [&](double w) { return normal_pdf(w, mu, 2.0 * b); };

  double center_y = (q - mu) + se * 2.0 * (a + b);
  double magnitude = std::exp(se * (q - mu) + se * se * (a + b));
  QuadratureOptions outer = tight_quadrature(magnitude);
  return integrate(
      [&](double y) {
        double zc_lo = std::min(y + mu - 12.0 * sigma_k, q - 12.0 * sigma_g);
        double zc_hi = std::max(y + mu + 12.0 * sigma_k, q + 12.0 * sigma_g);
        // The inner value decays like the combined Gaussian, while the outer
        // tilt e^{se y} amplifies the tail; scale the tolerance with the local
        // magnitude so the tail keeps full relative precision.
        double local_scale = normal_pdf(y, q - mu, 2.0 * (a + b)) + 1e-280;
        QuadratureOptions inner = tight_quadrature(local_scale);
        double l_y = integrate([&](double z) { return kern(z - y) * heat(z); }, zc_lo, zc_hi,
                               inner);
        return std::exp(se * y) * l_y;
      },
      center_y - 13.0 * sigma_l, center_y + 13.0 * sigma_l, outer);
}

}  // namespace

double mgf_quadrature_convolution(const ModelParams& p, const Direction& e, double s) {
  if (!p.kernel) {
    throw ModelError(ErrorCode::KernelUnsupported, "convolution route requires a kernel");
  }
  if (std::holds_alternative<PointMassKernel>(*p.kernel)) {
    return mgf_quadrature(analytic::measure_local(p), e, s);
  }
  const auto& g = std::get<GaussianKernel>(*p.kernel);
  double mass = map_slope0(p.map) * std::exp(growth_slope0(p.growth));
  if (p.dim == 1) {
    return mass * convolution_axis_mgf(s * e.e.x, p.A.xx, p.q.x, g.B.xx, g.mu.x);
  }
  if (p.A.xy != 0.0 || g.B.xy != 0.0) {
    // No axis factorization available; fall back to the density route.
    return mgf_quadrature(analytic::measure_nonlocal(p), e, s);
  }
  return mass * convolution_axis_mgf(s * e.e.x, p.A.xx, p.q.x, g.B.xx, g.mu.x) *
         convolution_axis_mgf(s * e.e.y, p.A.yy, p.q.y, g.B.yy, g.mu.y);
}

double crosscheck_mgf(const analytic::GaussianMeasure& m, const Direction& e,
                      const std::vector<double>& s_list) {
  double worst = 0.0;
  for (double s : s_list) {
    double closed = analytic::mgf_measure(m, e, s);
    double quad = mgf_quadrature(m, e, s);
    worst = std::max(worst, std::abs(quad - closed) / std::abs(closed));
  }
  return worst;
}

double crosscheck_mgf_convolution(const ModelParams& p, const Direction& e,
                                  const std::vector<double>& s_list) {
  analytic::GaussianMeasure m = analytic::measure_nonlocal(p);
  double worst = 0.0;
  for (double s : s_list) {
    double closed = analytic::mgf_measure(m, e, s);
    double quad = mgf_quadrature_convolution(p, e, s);
    worst = std::max(worst, std::abs(quad - closed) / std::abs(closed));
  }
  return worst;
}

}  // namespace impulse::oracle
