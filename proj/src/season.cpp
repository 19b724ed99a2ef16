#include "impulse/season.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "impulse/fft.hpp"

namespace impulse::season {

namespace {

double wavenumber(int k, int n, double spacing) {
  int kk = (k <= n / 2) ? k : k - n;
  return 2.0 * M_PI * kk / (n * spacing);
}

// Fourier symbol of exp(dt (div(A grad .) - q . grad .)) per mode.
std::vector<std::complex<double>> build_multiplier(const ModelParams& p, const Field& f,
                                                   double dt) {
  if (f.dim == 1) {
    int n = f.nx();
    std::vector<std::complex<double>> mult(n);
    for (int k = 0; k < n; ++k) {
      double z = wavenumber(k, n, f.ax.spacing);
      mult[k] = std::polar(std::exp(-dt * p.A.xx * z * z), -dt * p.q.x * z);
    }
    return mult;
  }
  int nx = f.nx(), ny = f.ny();
  std::vector<std::complex<double>> mult(static_cast<std::size_t>(nx) * ny);
  for (int kx = 0; kx < nx; ++kx) {
    double zx = wavenumber(kx, nx, f.ax.spacing);
    for (int ky = 0; ky < ny; ++ky) {
      double zy = wavenumber(ky, ny, f.ay.spacing);
      double quad = p.A.xx * zx * zx + 2.0 * p.A.xy * zx * zy + p.A.yy * zy * zy;
      double phase = -dt * (p.q.x * zx + p.q.y * zy);
      mult[static_cast<std::size_t>(kx) * ny + ky] = std::polar(std::exp(-dt * quad), phase);
    }
  }
  return mult;
}

void reaction_half_step(const GrowthSpec& g, std::vector<double>& u, double dt) {
  long long n = static_cast<long long>(u.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) {
    u[static_cast<std::size_t>(i)] = growth_flow(g, u[static_cast<std::size_t>(i)], dt);
  }
}

void spectral_step(std::vector<double>& u, const std::vector<std::complex<double>>& mult,
                   int nx, int ny) {
  long long n = static_cast<long long>(u.size());
  std::vector<std::complex<double>> buf(u.begin(), u.end());
  if (ny > 1) {
    fft::transform_2d(buf, nx, ny, false);
  } else {
    fft::transform(buf, false);
  }
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) {
    buf[static_cast<std::size_t>(i)] *= mult[static_cast<std::size_t>(i)];
  }
  if (ny > 1) {
    fft::transform_2d(buf, nx, ny, true);
  } else {
    fft::transform(buf, true);
  }
  // Spectral ringing produces tiny negatives; clamp to keep the state
  // admissible without biasing mass at tested tolerances.
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) {
    double v = buf[static_cast<std::size_t>(i)].real();
    u[static_cast<std::size_t>(i)] = v < 0.0 ? 0.0 : v;
  }
}

void check_wraparound(const Field& f, const SeasonConfig& cfg) {
  if (!cfg.check_boundary) return;
  double maxv = f.max_value();
  if (maxv <= 0.0) return;
  double tol = cfg.boundary_rel_tolerance * maxv;
  int zx = std::max(1, static_cast<int>(cfg.boundary_zone_fraction * f.nx()));
  auto edge_x = [&](int ix) { return ix < zx || ix >= f.nx() - zx; };
  if (f.dim == 1) {
    for (int ix = 0; ix < f.nx(); ++ix) {
      if (edge_x(ix) && f.at(ix) > tol) {
        std::ostringstream msg;
        msg << "front reached the truncation boundary (value " << f.at(ix) << " at x="
            << f.ax.coord(ix) << "); widen the domain";
        throw ModelError(ErrorCode::BoundaryContamination, msg.str());
      }
    }
    return;
  }
  int zy = std::max(1, static_cast<int>(cfg.boundary_zone_fraction * f.ny()));
  for (int ix = 0; ix < f.nx(); ++ix) {
    bool ex = edge_x(ix);
    for (int iy = 0; iy < f.ny(); ++iy) {
      bool ey = iy < zy || iy >= f.ny() - zy;
      if ((ex || ey) && f.at(ix, iy) > tol) {
        throw ModelError(ErrorCode::BoundaryContamination,
                         "front reached the truncation boundary; widen the domain");
      }
    }
  }
}

}  // namespace

Field advance_free(const ModelParams& p, const Field& u0, const SeasonConfig& cfg) {
  if (cfg.substeps < 1) throw ModelError(ErrorCode::Config, "substeps must be >= 1");
  if (!fft::is_pow2(u0.nx()) || (u0.dim == 2 && !fft::is_pow2(u0.ny()))) {
    throw ModelError(ErrorCode::Config, "free-space grid counts must be powers of two");
  }
  Field f = u0;
  double dt = 1.0 / cfg.substeps;
  auto mult = build_multiplier(p, f, dt);
  for (int s = 0; s < cfg.substeps; ++s) {
    reaction_half_step(p.growth, f.values, 0.5 * dt);
    spectral_step(f.values, mult, f.nx(), f.ny());
    reaction_half_step(p.growth, f.values, 0.5 * dt);
  }
  check_wraparound(f, cfg);
  return f;
}

// ---------------------------------------------------------------------------
// Dirichlet season
// ---------------------------------------------------------------------------

namespace {

// Interior tridiagonal theta sweep along one line:
//   (I - tau_imp L) u_new = (I + tau_exp L) u_old,  L = d dxx - q dx (central).
// tau_imp == tau_exp is Crank-Nicolson; tau_exp == 0 is backward Euler.
struct LineOperator {
  double lower = 0.0;  // coefficient of u_{i-1} inside L
  double diag = 0.0;
  double upper = 0.0;

  static LineOperator make(double d, double q, double h) {
    LineOperator op;
    op.lower = d / (h * h) + q / (2.0 * h);
    op.diag = -2.0 * d / (h * h);
    op.upper = d / (h * h) - q / (2.0 * h);
    return op;
  }
};

// Thomas solve of the constant-coefficient interior system; first and last
// entries of u are boundary values held at zero.
void cn_line(const LineOperator& op, double tau_imp, double tau_exp,
             std::vector<double>& rhs_scratch, std::vector<double>& cprime, double* u, int n,
             int stride) {
  int m = n - 2;
  if (m <= 0) return;
  double a = -tau_imp * op.lower;      // sub-diagonal of (I - tau_imp L)
  double b = 1.0 - tau_imp * op.diag;  // diagonal
  double c = -tau_imp * op.upper;      // super-diagonal
  double ra = tau_exp * op.lower;      // rhs uses (I + tau_exp L)
  double rb = 1.0 + tau_exp * op.diag;
  double rc = tau_exp * op.upper;

  for (int i = 0; i < m; ++i) {
    double um = u[(i)*stride];          // u_{i} (left neighbor of interior i)
    double uc = u[(i + 1) * stride];
    double up = u[(i + 2) * stride];
    rhs_scratch[i] = ra * um + rb * uc + rc * up;
  }
  // Forward elimination.
  cprime[0] = c / b;
  rhs_scratch[0] = rhs_scratch[0] / b;
  for (int i = 1; i < m; ++i) {
    double denom = b - a * cprime[i - 1];
    cprime[i] = c / denom;
    rhs_scratch[i] = (rhs_scratch[i] - a * rhs_scratch[i - 1]) / denom;
  }
  // Back substitution.
  u[m * stride] = rhs_scratch[m - 1];
  for (int i = m - 2; i >= 0; --i) {
    u[(i + 1) * stride] = rhs_scratch[i] - cprime[i] * u[(i + 2) * stride];
  }
}

// Crank-Nicolson is not positivity preserving; clamp the same roundoff-scale
// negatives the spectral step clamps so downstream maps see admissible states.
void clamp_negative(Field& f) {
  for (double& v : f.values) {
    if (v < 0.0) v = 0.0;
  }
}

void pin_boundary(Field& f) {
  if (f.dim == 1) {
    f.at(0) = 0.0;
    f.at(f.nx() - 1) = 0.0;
    return;
  }
  for (int ix = 0; ix < f.nx(); ++ix) {
    f.at(ix, 0) = 0.0;
    f.at(ix, f.ny() - 1) = 0.0;
  }
  for (int iy = 0; iy < f.ny(); ++iy) {
    f.at(0, iy) = 0.0;
    f.at(f.nx() - 1, iy) = 0.0;
  }
}

void peclet_advisory(const ModelParams& p, const Field& f, std::vector<std::string>* advisories) {
  if (!advisories) return;
  double px = std::abs(p.q.x) * f.ax.spacing / (2.0 * p.A.xx);
  double py = (f.dim == 2) ? std::abs(p.q.y) * f.ay.spacing / (2.0 * p.A.yy) : 0.0;
  double pe = std::max(px, py);
  if (pe > 1.0) {
    std::ostringstream msg;
    msg << "cell Peclet number " << pe << " exceeds 1; central advection may oscillate";
    advisories->push_back(msg.str());
  }
}

}  // namespace

Field advance_dirichlet(const ModelParams& p, const Field& u0, const SeasonConfig& cfg,
                        std::vector<std::string>* advisories) {
  if (cfg.substeps < 1) throw ModelError(ErrorCode::Config, "substeps must be >= 1");
  if (p.dim == 2 && p.A.xy != 0.0) {
    throw ModelError(ErrorCode::AnisotropyUnsupported,
                     "hostile-boundary season supports diagonal diffusion only");
  }
  Field f = u0;
  pin_boundary(f);
  peclet_advisory(p, f, advisories);

  double dt = 1.0 / cfg.substeps;
  double tau = 0.5 * dt;

  // Crank-Nicolson leaves grid-scale modes essentially undamped while the
  // reaction multiplies them by e^{f'(0) dt}; with rho > 0 that compounds into
  // spurious growth from rough data. Rannacher startup: the first substep of
  // each season runs as two backward-Euler half-steps, which crushes the
  // stiff tail at O(dt^2) cost to the smooth modes.
  if (f.dim == 1) {
    LineOperator op = LineOperator::make(p.A.xx, p.q.x, f.ax.spacing);
    std::vector<double> rhs(static_cast<std::size_t>(f.nx()));
    std::vector<double> cp(static_cast<std::size_t>(f.nx()));
    for (int s = 0; s < cfg.substeps; ++s) {
      reaction_half_step(p.growth, f.values, 0.5 * dt);
      f.at(0) = 0.0;
      f.at(f.nx() - 1) = 0.0;
      if (s == 0) {
        cn_line(op, tau, 0.0, rhs, cp, f.values.data(), f.nx(), 1);
        cn_line(op, tau, 0.0, rhs, cp, f.values.data(), f.nx(), 1);
      } else {
        cn_line(op, tau, tau, rhs, cp, f.values.data(), f.nx(), 1);
      }
      clamp_negative(f);
      reaction_half_step(p.growth, f.values, 0.5 * dt);
      pin_boundary(f);
    }
    return f;
  }

  // On a rectangle with constant diagonal A the per-axis operators commute,
  // so a full sweep along x followed by one along y carries the same order
  // and stability as a 2D solve.
  int nx = f.nx(), ny = f.ny();
  LineOperator opx = LineOperator::make(p.A.xx, p.q.x, f.ax.spacing);
  LineOperator opy = LineOperator::make(p.A.yy, p.q.y, f.ay.spacing);

  for (int s = 0; s < cfg.substeps; ++s) {
    reaction_half_step(p.growth, f.values, 0.5 * dt);
    pin_boundary(f);
    int passes = (s == 0) ? 2 : 1;          // Rannacher startup pair
    double tau_exp = (s == 0) ? 0.0 : tau;  // backward Euler on the startup
#pragma omp parallel
    {
      std::vector<double> rhs(static_cast<std::size_t>(std::max(nx, ny)));
      std::vector<double> cp(static_cast<std::size_t>(std::max(nx, ny)));
      for (int pass = 0; pass < passes; ++pass) {
#pragma omp for schedule(static)
        for (int iy = 1; iy < ny - 1; ++iy) {
          cn_line(opx, tau, tau_exp, rhs, cp, f.values.data() + iy, nx, ny);
        }
#pragma omp for schedule(static)
        for (int ix = 1; ix < nx - 1; ++ix) {
          cn_line(opy, tau, tau_exp, rhs, cp, f.values.data() + static_cast<std::size_t>(ix) * ny,
                  ny, 1);
        }
      }
    }
    clamp_negative(f);
    reaction_half_step(p.growth, f.values, 0.5 * dt);
    pin_boundary(f);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Heat kernel and grids
// ---------------------------------------------------------------------------

double green_eval(const ModelParams& p, const Vec& x, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("green_eval: t must be positive");
  int n = p.dim;
  Vec z = x - t * p.q;
  double quad = p.A.inverse().quad(z) / (4.0 * t);
  double norm = std::pow(4.0 * M_PI * t, 0.5 * n) * std::sqrt(p.A.det());
  return std::exp(t * growth_slope0(p.growth)) * std::exp(-quad) / norm;
}

GridAxis centered_axis(double half_width, double spacing) {
  int count = fft::next_pow2(static_cast<int>(std::ceil(2.0 * half_width / spacing)));
  count = std::max(count, 16);
  GridAxis ax;
  ax.spacing = spacing;
  ax.count = count;
  ax.origin = -0.5 * spacing * count;
  return ax;
}

double default_half_width(const ModelParams& p, int generations) {
  SymMat eff = p.A;
  Vec drift_vec = p.q;
  if (p.kernel) {
    eff = p.A + kernel_shape(*p.kernel, p.dim);
    drift_vec = p.q - kernel_mean(*p.kernel, p.dim);
  }
  double lam = eff.max_eig();
  NetGrowth ng = net_growth(p);
  double front = ng.rho > 0.0 ? 2.0 * std::sqrt(lam * ng.rho) : 2.0 * std::sqrt(lam);
  double per_gen = front + drift_vec.norm();
  double support = 1.0;
  double by_drift = support + 1.5 * per_gen * generations;
  double by_diffusion = 50.0 * std::sqrt(2.0 * lam);
  return std::max(by_drift, by_diffusion);
}

Field free_zeros(const ModelParams& p, double spacing, int generations) {
  double half = default_half_width(p, generations);
  GridAxis ax = centered_axis(half, spacing);
  if (p.dim == 1) return Field::zeros(ax);
  return Field::zeros2(ax, ax);
}

Field dirichlet_zeros(const Box& box, double spacing) {
  auto axis = [&](double length) {
    GridAxis ax;
    ax.count = std::max(3, static_cast<int>(std::lround(length / spacing)) + 1);
    ax.spacing = length / (ax.count - 1);
    ax.origin = 0.0;
    return ax;
  };
  if (box.dim == 1) return Field::zeros(axis(box.L1));
  return Field::zeros2(axis(box.L1), axis(box.L2));
}

}  // namespace impulse::season
