#pragma once

#include <vector>

#include "impulse/analytic.hpp"

namespace impulse::oracle {

struct OracleConfig {
  double phi_level = 0.5;  // phi(-inf); must lie strictly between pi0 and pi1
  double s_spacing = 0.0;  // 0 selects min(0.05, sigma/10)
  int iterations = 400;    // finite-M proxy biases the speed low by ~probe/M
  double speed_tolerance = 2e-3;   // absolute bisection bracket width on c
  double truncation_radius = 8.0;  // quadrature cut in standard deviations
  double probe_sigmas = 5.0;       // probe point s0 = probe_sigmas * sigma
};

// 1D marginal of the measure along e. Moments come from quadrature of the
// density rather than the closed-form projection, so the recursion route
// stays independent of the measure algebra.
struct ProjectedMeasure {
  double mass = 1.0;
  double mean = 0.0;
  double var = 1.0;
};
ProjectedMeasure project_measure(const analytic::GaussianMeasure& m, const Direction& e);

struct OracleState {
  std::vector<double> s;
  std::vector<double> profile;  // a_m on the s grid
  int iteration = 0;
  double candidate_speed = 0.0;
  bool spread_detected = false;
};

// Runs the max-with-obstacle recursion
//   a_{m+1}(s) = max{ phi(s), mass * integral a_m(s + c - eta) dN(eta) }
// for up to cfg.iterations steps at frame speed c. Monotonicity in m and s is
// asserted, never repaired. Throws GridExhausted if the transition reaches
// the grid edge.
OracleState weinberger_iterate(const analytic::GaussianMeasure& m, const Direction& e,
                               const OracleConfig& cfg, double c);

// Bisection on c of the spread/pinned dichotomy; requires mass > 1.
double weinberger_speed(const analytic::GaussianMeasure& m, const Direction& e,
                        const OracleConfig& cfg);

// Quadrature of the measure density against e^{s x.e} (iterated in 2D);
// the independent route behind crosscheck_mgf.
double mgf_quadrature(const analytic::GaussianMeasure& m, const Direction& e, double s);

// Convolution-form route for a kernel model: the dispersal measure density is
// itself evaluated as a nested integral of kernel times heat kernel.
double mgf_quadrature_convolution(const ModelParams& p, const Direction& e, double s);

// Max relative error of the closed-form MGF against quadrature over s_list.
double crosscheck_mgf(const analytic::GaussianMeasure& m, const Direction& e,
                      const std::vector<double>& s_list);
double crosscheck_mgf_convolution(const ModelParams& p, const Direction& e,
                                  const std::vector<double>& s_list);

}  // namespace impulse::oracle
