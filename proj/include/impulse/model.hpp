#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "impulse/common.hpp"
#include "impulse/errors.hpp"

namespace impulse {

// ---------------------------------------------------------------------------
// Growth functions f for the continuous season u' = f(u)
// ---------------------------------------------------------------------------

struct LinearGrowth {
  double rate = 1.0;  // f(s) = rate*s; rate may be negative (mortality)
};
struct QuadraticGrowth {
  double rate = 1.0;   // f(s) = rate*s + quad*s^2
  double quad = -1.0;  // quad <= 0
};
struct LogisticGrowth {
  double r = 1.0;  // f(s) = r*s*(1 - s)
};

using GrowthSpec = std::variant<LinearGrowth, QuadraticGrowth, LogisticGrowth>;

double growth_slope0(const GrowthSpec& g);          // f'(0)
double eval_growth(const GrowthSpec& g, double s);  // requires s >= 0

// Exact flow of u' = f(u) over a step dt. All three families are linear or
// Riccati with constant coefficients, so the season reaction step has no
// time-discretization error.
double growth_flow(const GrowthSpec& g, double u0, double dt);

// ---------------------------------------------------------------------------
// Stage maps g applied once per generation
// ---------------------------------------------------------------------------

struct LinearMap {
  double alpha = 1.0;  // g(s) = alpha*s
};
struct RickerMap {
  double beta = 1.0;  // g(s) = s*exp(beta*(1 - s)); nondecreasing on (0, 1/beta]
};
struct BevertonHoltMap {
  double lambda = 1.0;  // g(s) = (1+lambda)s / (1 + lambda*s)
};
struct SkellamMap {
  double alpha = 1.0;  // g(s) = alpha*(1 - exp(-beta*s))
  double beta = 2.0;
};

using StageMapSpec = std::variant<LinearMap, RickerMap, BevertonHoltMap, SkellamMap>;

double map_slope0(const StageMapSpec& m);          // g'(0)
double map_monotone_bound(const StageMapSpec& m);  // s*: g nondecreasing on (0, s*]
double map_upper_bound(const StageMapSpec& m);     // pi_+: smallest invariant bound
double eval_map(const StageMapSpec& m, double s);  // requires s >= 0
bool is_identity_map(const StageMapSpec& m);

// ---------------------------------------------------------------------------
// Dispersal kernels
// ---------------------------------------------------------------------------

// Gaussian dispersal density
//   K(x) = (4 pi)^{-n/2} (det B)^{-1/2} exp(-<B^{-1}(x-mu), (x-mu)>/4).
// Under this normalization the statistical covariance is 2B; in one dimension
// B plays the role of sigma^2.
struct GaussianKernel {
  Vec mu = Vec::zero(1);
  SymMat B = SymMat::scalar(1, 1.0);
};
struct PointMassKernel {
  int n = 1;
};

using KernelSpec = std::variant<GaussianKernel, PointMassKernel>;

double kernel_density(const GaussianKernel& k, const Vec& x);
Vec kernel_mean(const KernelSpec& k, int n);
SymMat kernel_shape(const KernelSpec& k, int n);  // B; zero matrix for a point mass

// ---------------------------------------------------------------------------
// Model parameters
// ---------------------------------------------------------------------------

struct ModelParams {
  int dim = 1;
  SymMat A = SymMat::scalar(1, 1.0);  // diffusivity, length^2 per season
  Vec q = Vec::zero(1);               // advection, length per season
  GrowthSpec growth = LogisticGrowth{1.0};
  StageMapSpec map = LinearMap{1.0};
  std::optional<KernelSpec> kernel;  // nullopt = local model
};

struct NetGrowth {
  double rho = 0.0;  // f'(0) + ln g'(0)
  bool extinct = false;
};
NetGrowth net_growth(const ModelParams& p);

// Requires rho > 0; throws ModelError(ExtinctionRegime) otherwise.
double require_positive_net_growth(const ModelParams& p);

enum class Severity { Error, Warning };

struct Violation {
  std::string assumption;
  std::string detail;
  Severity severity = Severity::Error;
};

// Empty iff all standing assumptions hold. Violations are data, not failures;
// warning-class entries (e.g. a Ricker equilibrium past the monotone range)
// are clamped by the simulator rather than rejected.
std::vector<Violation> validate(const ModelParams& p);

// Symmetry/positivity check on raw user-supplied matrix entries (tolerance
// 1e-12) before they collapse into SymMat.
std::vector<Violation> validate_raw_matrix(int n, double a11, double a12, double a21, double a22);
bool has_errors(const std::vector<Violation>& v);
std::string describe(const std::vector<Violation>& v);

// ---------------------------------------------------------------------------
// Fields
// ---------------------------------------------------------------------------

struct GridAxis {
  double origin = 0.0;
  double spacing = 1.0;
  int count = 0;

  double coord(int i) const { return origin + spacing * i; }
  double length() const { return spacing * (count - 1); }
};

// Uniform-grid density field (individuals per length^n). In two dimensions
// values are stored row-major with x as the slow index.
struct Field {
  int dim = 1;
  GridAxis ax{};
  GridAxis ay{};
  std::vector<double> values;

  static Field zeros(const GridAxis& ax);
  static Field zeros2(const GridAxis& ax, const GridAxis& ay);

  int nx() const { return ax.count; }
  int ny() const { return dim == 2 ? ay.count : 1; }
  std::size_t size() const { return values.size(); }
  double cell_volume() const { return dim == 2 ? ax.spacing * ay.spacing : ax.spacing; }

  double& at(int ix, int iy = 0) { return values[static_cast<std::size_t>(ix) * ny() + iy]; }
  double at(int ix, int iy = 0) const { return values[static_cast<std::size_t>(ix) * ny() + iy]; }

  double max_value() const;
  double mass() const;  // sum * cell volume
};

std::vector<Violation> validate_field(const Field& f, double pi_plus);

}  // namespace impulse
