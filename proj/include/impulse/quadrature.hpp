#pragma once

#include <functional>

namespace impulse {

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_depth = 50;
};

// Adaptive Gauss-Kronrod (G7/K15) integration on [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opt = {});

// Brent root find; f(a) and f(b) must have opposite signs.
double find_root(const std::function<double(double)>& f, double a, double b,
                 double xtol = 1e-13, int max_iter = 200);

// Golden-section minimizer on [a, b]; returns the argmin to xtol.
double golden_min(const std::function<double(double)>& f, double a, double b,
                  double xtol = 1e-10);

}  // namespace impulse
