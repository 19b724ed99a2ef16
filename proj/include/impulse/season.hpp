#pragma once

#include <string>
#include <vector>

#include "impulse/model.hpp"

namespace impulse::season {

// Numerics for one continuous season t in (0, 1].
struct SeasonConfig {
  int substeps = 16;                    // Strang splitting steps per season
  bool check_boundary = true;           // wrap-around guard on free space
  double boundary_zone_fraction = 0.10;
  double boundary_rel_tolerance = 1e-8;  // relative to the field maximum
};

// Rectangular habitat (0, L1) x (0, L2) with hostile boundary.
struct Box {
  int dim = 1;
  double L1 = 1.0;
  double L2 = 0.0;
};

// One season on free space (periodic truncation): Strang splitting with an
// exact reaction flow and an exact Fourier advection-diffusion step. Grid
// counts must be powers of two. Throws BoundaryContamination if mass reaches
// the truncation edge.
Field advance_free(const ModelParams& p, const Field& u0, const SeasonConfig& cfg);

// One season on a box with zero (hostile) boundary: Strang splitting with the
// reaction flow around Crank-Nicolson advection-diffusion sweeps (alternating
// directions in 2D; diagonal A only). Appends a cell-Peclet advisory when
// |q| h / (2d) > 1.
Field advance_dirichlet(const ModelParams& p, const Field& u0, const SeasonConfig& cfg,
                        std::vector<std::string>* advisories = nullptr);

// Heat kernel of the linearized season:
//   k(x,t) = e^{t f'(0)} (4 pi t)^{-n/2} (det A)^{-1/2}
//            exp(-<A^{-1}(x - t q), (x - t q)> / (4t)).
// Mass e^{t f'(0)}, peak at x = t q, second moment 2At about the peak.
double green_eval(const ModelParams& p, const Vec& x, double t);

// Grid builders. The centered free-space axis rounds the point count up to a
// power of two; the default half-width covers the planned drift with margin.
GridAxis centered_axis(double half_width, double spacing);
double default_half_width(const ModelParams& p, int generations);
Field free_zeros(const ModelParams& p, double spacing, int generations);
Field dirichlet_zeros(const Box& box, double spacing);

}  // namespace impulse::season
