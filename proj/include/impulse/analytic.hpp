#pragma once

#include <functional>
#include <vector>

#include "impulse/model.hpp"

namespace impulse::analytic {

// ---------------------------------------------------------------------------
// One-season redistribution measures of the linearized generation operator
// ---------------------------------------------------------------------------

// The linearization of a generation acts as convolution with a Gaussian
// measure of total mass g'(0) e^{f'(0)}. For the local model the mean is q
// and the statistical covariance 2A; a Gaussian dispersal kernel folds in as
// mean q - mu and covariance 2(A + B).
struct GaussianMeasure {
  double mass = 1.0;
  Vec mean = Vec::zero(1);
  SymMat spread = SymMat::scalar(1, 2.0);  // statistical covariance
};

GaussianMeasure measure_local(const ModelParams& p);
GaussianMeasure measure_nonlocal(const ModelParams& p);  // requires a kernel
GaussianMeasure model_measure(const ModelParams& p);     // dispatch on kernel
double measure_density(const GaussianMeasure& m, const Vec& x);

// Closed-form moment generating function: integral of e^{s x.e} d(measure).
double mgf_measure(const GaussianMeasure& m, const Direction& e, double s);

// Kernel transform k(s) = integral of K(x) e^{-s x.e} dx; equals
// exp(-s mu.e + <Be,e> s^2) for the Gaussian family and 1 for a point mass.
double kernel_mgf(const KernelSpec& k, const Direction& e, double s);

// ---------------------------------------------------------------------------
// Spreading speeds
// ---------------------------------------------------------------------------

// c*(e) = 2 sqrt(<Ae,e>) sqrt(rho) + e.q for the local model.
double speed_local(const ModelParams& p, const Direction& e);
// c*(e) = 2 sqrt(<(A+B)e,e>) sqrt(rho) + e.(q - mu) with a Gaussian kernel.
double speed_nonlocal(const ModelParams& p, const Direction& e);
// Dispatches on kernel presence.
double spreading_speed(const ModelParams& p, const Direction& e);

struct SpeedProfile {
  std::function<double(double)> W;  // decay rate s > 0 -> speed bound
  double s_star = 0.0;              // minimizer
  double c_star = 0.0;              // W(s_star)
};
SpeedProfile speed_profile(const ModelParams& p, const Direction& e);

// Freidlin-Gartner ray speed: min over unit directions with positive
// projection of c*(d)/(e.d). Coarse angular scan plus golden-section
// refinement; always <= c*(e).
double ray_speed(const ModelParams& p, const Direction& e);

// ---------------------------------------------------------------------------
// Critical domain size
// ---------------------------------------------------------------------------

enum class DomainShape { Interval, Hypercube };

struct CriticalDomainReport {
  double size = 0.0;  // +inf when the persistence window is empty
  bool finite = false;
  double blowup_advection = 0.0;  // 2 sqrt(d rho): |q| at which size diverges
};

// Requires isotropic A = d*I.
CriticalDomainReport critical_size(const ModelParams& p, DomainShape shape);

// Classical one-season baseline (identity map): 2 pi d / sqrt(4 d f'(0) - q^2).
double critical_size_fisher(double d, double fp0, double q);

// ---------------------------------------------------------------------------
// Nonspatial dynamics
// ---------------------------------------------------------------------------

struct EquilibriumInfo {
  double pi0 = 0.0;
  double pi1 = 0.0;      // positive equilibrium of the generation map
  double pi_plus = 0.0;  // may be +inf
  bool extinct = false;
};

// Solves integral_{g(N)}^{N} dw/f(w) = 1 by bracketed root find with adaptive
// quadrature. For an identity map the equation degenerates and the positive
// root of f is returned instead.
EquilibriumInfo equilibrium_nonspatial(const ModelParams& p);

// Residual of the equilibrium condition at N; throws QuadratureSingularity
// when f vanishes inside the integration interval. Exposed for testing.
double equilibrium_residual(const ModelParams& p, double n);

// One nonspatial generation. Local model: season flow applied to g(U);
// kernel model: g applied to the season flow of U (dispersal conserves
// spatially constant states).
double nonspatial_step(const ModelParams& p, double u);
// Sequence U_1..U_m from U_0 = u0.
std::vector<double> nonspatial_iterate(const ModelParams& p, double u0, int m);

// ---------------------------------------------------------------------------
// Application scenarios
// ---------------------------------------------------------------------------

// Rectangular habitat tracking a shifting climate envelope at speed c;
// Beverton-Holt recruitment, mortality gamma inside the envelope.
struct ClimateScenario {
  double d = 1.0;
  double lambda = 1.0;
  double gamma = 0.0;
  double L1 = 1.0;
  double L2 = 1.0;
  double c = 0.0;
};
struct ClimateReport {
  double rho = 0.0;    // ln(1+lambda) - gamma
  double c_max = 0.0;  // largest envelope speed with a persistence window
  bool window_open = false;  // rectangle criterion at the given c
  double speed_right = 0.0;  // free-space propagation speeds along the shift
  double speed_left = 0.0;
};
// Throws NoPersistenceWindow when no envelope speed admits persistence.
ClimateReport climate_bounds(const ClimateScenario& s);

// Stream insects: larval drift q, mortality r, adult dispersal Gaussian with
// mean mu against the drift, Beverton-Holt recruitment.
struct StreamScenario {
  double d = 0.5;
  double sigma2 = 0.5;
  double r = 0.1;
  double lambda = 1.0;
  double q = 1.0;
  double mu = 0.5;
};
struct StreamReport {
  double rho = 0.0;
  bool persists = false;  // (1+lambda) e^{-r} > 1
  bool spreads_both_ways = false;
  double speed_down = 0.0;
  double speed_up = 0.0;
};
StreamReport stream_bounds(const StreamScenario& s);

// Savannah grass with logistic growth r, fire survival 1-s, anisotropic
// dispersal diag(a11^2, a22^2) and drift (q1, q2).
struct SavannahScenario {
  double r = 1.0;
  double s = 0.1;
  double a11 = 1.0;
  double a22 = 1.0;
  double q1 = 0.0;
  double q2 = 0.0;
};
struct SavannahReport {
  double rho = 0.0;     // r + ln(1-s)
  double n_star = 0.0;  // ((1-s)e^r - 1) / ((1-s)(e^r - 1))
};
// Throws ExtinctionRegime when e^r (1-s) <= 1.
SavannahReport savannah_bounds(const SavannahScenario& s);
ModelParams savannah_params(const SavannahScenario& s);

}  // namespace impulse::analytic
