#include "impulse/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace impulse {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_nonnegative(double s, const char* who) {
  if (s < 0.0 || !std::isfinite(s)) {
    throw std::invalid_argument(std::string(who) + ": density must be finite and >= 0");
  }
}
}  // namespace

// ---------------------------------------------------------------------------
// Growth
// ---------------------------------------------------------------------------

double growth_slope0(const GrowthSpec& g) {
  return std::visit(
      [](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LinearGrowth>) return v.rate;
        else if constexpr (std::is_same_v<T, QuadraticGrowth>) return v.rate;
        else return v.r;
      },
      g);
}

double eval_growth(const GrowthSpec& g, double s) {
  require_nonnegative(s, "eval_growth");
  return std::visit(
      [s](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LinearGrowth>) return v.rate * s;
        else if constexpr (std::is_same_v<T, QuadraticGrowth>) return v.rate * s + v.quad * s * s;
        else return v.r * s * (1.0 - s);
      },
      g);
}

namespace {
// Flow of u' = a u + c u^2 through time dt (Bernoulli substitution v = 1/u):
//   u(dt) = u0 a e^{a dt} / (a + c u0 (1 - e^{a dt})).
double riccati_flow(double a, double c, double u0, double dt) {
  if (u0 == 0.0) return 0.0;
  if (c == 0.0) return u0 * std::exp(a * dt);
  if (a == 0.0) return u0 / (1.0 - c * u0 * dt);
  double ea = std::exp(a * dt);
  return u0 * a * ea / (a + c * u0 * (1.0 - ea));
}
}  // namespace

double growth_flow(const GrowthSpec& g, double u0, double dt) {
  return std::visit(
      [u0, dt](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LinearGrowth>) return u0 * std::exp(v.rate * dt);
        else if constexpr (std::is_same_v<T, QuadraticGrowth>) return riccati_flow(v.rate, v.quad, u0, dt);
        else return riccati_flow(v.r, -v.r, u0, dt);
      },
      g);
}

// ---------------------------------------------------------------------------
// Stage maps
// ---------------------------------------------------------------------------

double map_slope0(const StageMapSpec& m) {
  return std::visit(
      [](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LinearMap>) return v.alpha;
        else if constexpr (std::is_same_v<T, RickerMap>) return std::exp(v.beta);
        else if constexpr (std::is_same_v<T, BevertonHoltMap>) return 1.0 + v.lambda;
        else return v.alpha * v.beta;
      },
      m);
}

double map_monotone_bound(const StageMapSpec& m) {
  return std::visit(
      [](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, RickerMap>) return 1.0 / v.beta;
        else { (void)v; return kInf; }
      },
      m);
}

double map_upper_bound(const StageMapSpec& m) {
  return std::visit(
      [](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LinearMap>) { (void)v; return kInf; }
        else if constexpr (std::is_same_v<T, RickerMap>) return std::exp(v.beta - 1.0) / v.beta;
        else if constexpr (std::is_same_v<T, BevertonHoltMap>) return (1.0 + v.lambda) / v.lambda;
        else return v.alpha;
      },
      m);
}

double eval_map(const StageMapSpec& m, double s) {
  require_nonnegative(s, "eval_map");
  return std::visit(
      [s](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LinearMap>) return v.alpha * s;
        else if constexpr (std::is_same_v<T, RickerMap>) return s * std::exp(v.beta * (1.0 - s));
        else if constexpr (std::is_same_v<T, BevertonHoltMap>)
          return (1.0 + v.lambda) * s / (1.0 + v.lambda * s);
        else return v.alpha * (1.0 - std::exp(-v.beta * s));
      },
      m);
}

bool is_identity_map(const StageMapSpec& m) {
  const auto* lin = std::get_if<LinearMap>(&m);
  return lin != nullptr && lin->alpha == 1.0;
}

// ---------------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------------

double kernel_density(const GaussianKernel& k, const Vec& x) {
  int n = k.B.n;
  Vec d = x - k.mu;
  double norm = std::pow(4.0 * M_PI, 0.5 * n) * std::sqrt(k.B.det());
  return std::exp(-0.25 * k.B.inverse().quad(d)) / norm;
}

Vec kernel_mean(const KernelSpec& k, int n) {
  if (const auto* g = std::get_if<GaussianKernel>(&k)) return g->mu;
  return Vec::zero(n);
}

SymMat kernel_shape(const KernelSpec& k, int n) {
  if (const auto* g = std::get_if<GaussianKernel>(&k)) return g->B;
  return SymMat{n, 0.0, 0.0, 0.0};
}

// ---------------------------------------------------------------------------
// Net growth and validation
// ---------------------------------------------------------------------------

NetGrowth net_growth(const ModelParams& p) {
  double rho = growth_slope0(p.growth) + std::log(map_slope0(p.map));
  return {rho, rho <= 0.0};
}

double require_positive_net_growth(const ModelParams& p) {
  NetGrowth ng = net_growth(p);
  if (ng.extinct) {
    std::ostringstream msg;
    msg << "extinction regime: g'(0) e^{f'(0)} <= 1 (rho = " << ng.rho << ")";
    throw ModelError(ErrorCode::ExtinctionRegime, msg.str());
  }
  return ng.rho;
}

namespace {

void check_matrix(const ModelParams& p, std::vector<Violation>& out) {
  const SymMat& a = p.A;
  if (!std::isfinite(a.xx) || !std::isfinite(a.xy) || !std::isfinite(a.yy) ||
      !std::isfinite(p.q.x) || !std::isfinite(p.q.y)) {
    out.push_back({"finite-components", "diffusion or advection has a nonfinite entry"});
    return;
  }
  // Symmetry is structural for SymMat; an asymmetric user matrix is reported
  // by the config layer before it collapses into SymMat. Positivity:
  if (a.min_eig() <= 0.0) {
    out.push_back({"A-positive-definite", "diffusion matrix must have strictly positive eigenvalues"});
  }
}

void check_growth(const ModelParams& p, std::vector<Violation>& out, double pi_plus) {
  double fp0 = growth_slope0(p.growth);
  if (fp0 == 0.0) {
    out.push_back({"F0-slope-nonzero", "f'(0) must be nonzero"});
    return;
  }
  if (const auto* qd = std::get_if<QuadraticGrowth>(&p.growth)) {
    if (qd->quad > 0.0) out.push_back({"F0-f1-nonpositive", "quadratic coefficient must be <= 0"});
  }
  if (const auto* lg = std::get_if<LogisticGrowth>(&p.growth)) {
    if (lg->r <= 0.0) out.push_back({"F0-f1-nonpositive", "logistic rate must be positive"});
  }
  // Sampled check of f1(s) = f(s) - f'(0) s <= 0 on [0, pi_plus] (capped).
  double hi = std::isfinite(pi_plus) ? pi_plus : 2.0;
  for (int i = 1; i <= 64; ++i) {
    double s = hi * i / 64.0;
    double f1 = eval_growth(p.growth, s) - fp0 * s;
    if (f1 > 1e-12 * std::max(1.0, std::abs(fp0) * s)) {
      out.push_back({"F0-f1-nonpositive", "f(s) - f'(0)s must be <= 0 on [0, pi_plus]"});
      return;
    }
  }
}

void check_map(const ModelParams& p, std::vector<Violation>& out) {
  if (std::visit(
          [](const auto& v) -> bool {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, LinearMap>) return !(v.alpha > 0.0);
            else if constexpr (std::is_same_v<T, RickerMap>) return !(v.beta > 0.0);
            else if constexpr (std::is_same_v<T, BevertonHoltMap>) return !(v.lambda > 0.0);
            else return !(v.alpha > 0.0) || !(v.beta > 0.0);
          },
          p.map)) {
    out.push_back({"G0-positive-slope", "stage map parameters must be positive"});
    return;
  }
  if (eval_map(p.map, 0.0) != 0.0) {
    out.push_back({"G0-zero-at-zero", "g(0) must equal 0"});
  }
  // Sampled monotonicity on (0, s*] and nonincreasing g(s)/s on a positive
  // log-spaced grid.
  double s_star = map_monotone_bound(p.map);
  double hi = std::isfinite(s_star) ? s_star : 10.0;
  double prev_g = 0.0;
  double prev_ratio = kInf;
  for (int i = 0; i < 200; ++i) {
    double s = hi * std::pow(10.0, -4.0 * (1.0 - i / 199.0));
    double gs = eval_map(p.map, s);
    if (gs + 1e-12 < prev_g) {
      out.push_back({"G0-nondecreasing", "g must be nondecreasing on (0, s*]"});
      break;
    }
    double ratio = gs / s;
    if (ratio > prev_ratio * (1.0 + 1e-12)) {
      out.push_back({"G0-quotient-nonincreasing", "g(s)/s must be nonincreasing"});
      break;
    }
    prev_g = gs;
    prev_ratio = ratio;
  }
  // A Ricker equilibrium beyond the monotone range is clamped by the
  // simulator; report it as a warning rather than an error.
  if (const auto* rk = std::get_if<RickerMap>(&p.map)) {
    double fixed_point = 1.0;  // g(s) = s iff s = 1
    if (fixed_point > 1.0 / rk->beta + 1e-15) {
      std::ostringstream msg;
      msg << "equilibrium 1 exceeds the Ricker monotone range 1/beta = " << 1.0 / rk->beta
          << "; simulations clamp to the bound";
      out.push_back({"monotone-range", msg.str(), Severity::Warning});
    }
  }
}

void check_kernel(const ModelParams& p, std::vector<Violation>& out) {
  if (!p.kernel) return;
  if (const auto* g = std::get_if<GaussianKernel>(&*p.kernel)) {
    if (g->B.n != p.dim || g->mu.n != p.dim) {
      out.push_back({"kernel-dimension", "kernel dimension must match the model"});
    } else if (g->B.min_eig() <= 0.0) {
      out.push_back({"kernel-spd", "kernel shape matrix must be positive definite"});
    }
  }
}

}  // namespace

std::vector<Violation> validate(const ModelParams& p) {
  std::vector<Violation> out;
  if (p.dim != 1 && p.dim != 2) {
    out.push_back({"dimension", "spatial dimension must be 1 or 2"});
    return out;
  }
  if (p.A.n != p.dim || p.q.n != p.dim) {
    out.push_back({"dimension", "diffusion/advection dimension mismatch"});
    return out;
  }
  check_matrix(p, out);
  check_growth(p, out, map_upper_bound(p.map));
  check_map(p, out);
  check_kernel(p, out);
  return out;
}

std::vector<Violation> validate_raw_matrix(int n, double a11, double a12, double a21, double a22) {
  std::vector<Violation> out;
  if (!std::isfinite(a11) || !std::isfinite(a12) || !std::isfinite(a21) || !std::isfinite(a22)) {
    out.push_back({"finite-components", "matrix has a nonfinite entry"});
    return out;
  }
  if (n == 2 && std::abs(a12 - a21) > 1e-12) {
    out.push_back({"A-symmetric", "matrix must be symmetric to 1e-12"});
  }
  SymMat m{n, a11, 0.5 * (a12 + a21), a22};
  if (m.min_eig() <= 0.0) {
    out.push_back({"A-positive-definite", "matrix eigenvalues must be strictly positive"});
  }
  return out;
}

bool has_errors(const std::vector<Violation>& v) {
  return std::any_of(v.begin(), v.end(),
                     [](const Violation& x) { return x.severity == Severity::Error; });
}

std::string describe(const std::vector<Violation>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << "; ";
    os << v[i].assumption << ": " << v[i].detail;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Fields
// ---------------------------------------------------------------------------

Field Field::zeros(const GridAxis& ax) {
  Field f;
  f.dim = 1;
  f.ax = ax;
  f.values.assign(static_cast<std::size_t>(ax.count), 0.0);
  return f;
}

Field Field::zeros2(const GridAxis& ax, const GridAxis& ay) {
  Field f;
  f.dim = 2;
  f.ax = ax;
  f.ay = ay;
  f.values.assign(static_cast<std::size_t>(ax.count) * ay.count, 0.0);
  return f;
}

double Field::max_value() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, v);
  return m;
}

double Field::mass() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * cell_volume();
}

std::vector<Violation> validate_field(const Field& f, double pi_plus) {
  std::vector<Violation> out;
  if (f.ax.spacing <= 0.0 || (f.dim == 2 && f.ay.spacing <= 0.0)) {
    out.push_back({"grid-spacing", "grid spacing must be positive"});
  }
  if (f.values.size() != static_cast<std::size_t>(f.nx()) * f.ny()) {
    out.push_back({"grid-size", "value count does not match the grid"});
    return out;
  }
  for (double v : f.values) {
    if (v < 0.0) {
      out.push_back({"nonnegative", "field values must be >= 0"});
      break;
    }
  }
  if (std::isfinite(pi_plus)) {
    for (double v : f.values) {
      if (v > pi_plus * (1.0 + 1e-12)) {
        out.push_back({"bounded", "field values must not exceed pi_plus"});
        break;
      }
    }
  }
  return out;
}

}  // namespace impulse
