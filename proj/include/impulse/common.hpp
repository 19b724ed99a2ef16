#pragma once

#include <cmath>
#include <stdexcept>

namespace impulse {

// Minimal fixed-size linear algebra for spatial dimension n in {1, 2}.
// Everything is plain value data; a Vec with n == 1 ignores its y slot.

struct Vec {
  int n = 1;
  double x = 0.0;
  double y = 0.0;

  static Vec zero(int n) { return {n, 0.0, 0.0}; }
  static Vec of(double x) { return {1, x, 0.0}; }
  static Vec of2(double x, double y) { return {2, x, y}; }

  double operator[](int i) const { return i == 0 ? x : y; }
  double dot(const Vec& o) const { return x * o.x + (n == 2 ? y * o.y : 0.0); }
  double norm() const { return std::sqrt(dot(*this)); }
};

inline Vec operator+(const Vec& a, const Vec& b) { return {a.n, a.x + b.x, a.y + b.y}; }
inline Vec operator-(const Vec& a, const Vec& b) { return {a.n, a.x - b.x, a.y - b.y}; }
inline Vec operator*(double c, const Vec& a) { return {a.n, c * a.x, c * a.y}; }

// Symmetric n-by-n matrix. Positive definiteness is a model invariant checked
// by validate(), not a structural guarantee of the type.
struct SymMat {
  int n = 1;
  double xx = 1.0;
  double xy = 0.0;
  double yy = 0.0;

  static SymMat scalar(int n, double d) { return {n, d, 0.0, n == 2 ? d : 0.0}; }
  static SymMat diag2(double a, double b) { return {2, a, 0.0, b}; }

  double quad(const Vec& v) const {
    if (n == 1) return xx * v.x * v.x;
    return xx * v.x * v.x + 2.0 * xy * v.x * v.y + yy * v.y * v.y;
  }
  Vec mul(const Vec& v) const {
    if (n == 1) return Vec::of(xx * v.x);
    return Vec::of2(xx * v.x + xy * v.y, xy * v.x + yy * v.y);
  }
  double det() const { return n == 1 ? xx : xx * yy - xy * xy; }
  double trace() const { return n == 1 ? xx : xx + yy; }

  double min_eig() const {
    if (n == 1) return xx;
    double mid = 0.5 * (xx + yy);
    double rad = std::sqrt(0.25 * (xx - yy) * (xx - yy) + xy * xy);
    return mid - rad;
  }
  double max_eig() const {
    if (n == 1) return xx;
    double mid = 0.5 * (xx + yy);
    double rad = std::sqrt(0.25 * (xx - yy) * (xx - yy) + xy * xy);
    return mid + rad;
  }
  SymMat inverse() const {
    double d = det();
    if (d == 0.0) throw std::domain_error("singular matrix");
    if (n == 1) return {1, 1.0 / xx, 0.0, 0.0};
    return {2, yy / d, -xy / d, xx / d};
  }
  // True when the matrix is a scalar multiple of the identity.
  bool is_isotropic(double tol = 0.0) const {
    if (n == 1) return true;
    return std::abs(xy) <= tol && std::abs(xx - yy) <= tol;
  }
};

inline SymMat operator+(const SymMat& a, const SymMat& b) {
  return {a.n, a.xx + b.xx, a.xy + b.xy, a.yy + b.yy};
}
inline SymMat operator*(double c, const SymMat& a) { return {a.n, c * a.xx, c * a.xy, c * a.yy}; }

// Unit direction vector, normalized on construction to 1e-12 or better.
struct Direction {
  Vec e = Vec::of(1.0);

  static Direction along(const Vec& v) {
    double r = v.norm();
    if (!(r > 0.0)) throw std::invalid_argument("direction vector must be nonzero");
    return Direction{(1.0 / r) * v};
  }
  static Direction angle(double theta) {
    return Direction{Vec::of2(std::cos(theta), std::sin(theta))};
  }
  static Direction axis(int n, int i, double sign = 1.0) {
    Vec v = Vec::zero(n);
    if (i == 0) v.x = sign; else v.y = sign;
    return Direction{v};
  }
};

}  // namespace impulse
