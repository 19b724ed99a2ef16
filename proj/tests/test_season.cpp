#include <doctest.h>

#include <cmath>
#include <random>

#include "impulse/fft.hpp"
#include "impulse/quadrature.hpp"
#include "impulse/reference.hpp"
#include "impulse/season.hpp"

using namespace impulse;
using season::SeasonConfig;

namespace {

ModelParams fisher_1d(double d = 1.0, double q = 0.0) {
  ModelParams p;
  p.dim = 1;
  p.A = SymMat::scalar(1, d);
  p.q = Vec::of(q);
  p.growth = LogisticGrowth{1.0};
  p.map = LinearMap{1.0};
  return p;
}

Field gaussian_blob_1d(const GridAxis& ax, double center, double width, double amp) {
  Field f = Field::zeros(ax);
  for (int i = 0; i < f.nx(); ++i) {
    double d = (ax.coord(i) - center) / width;
    f.at(i) = amp * std::exp(-d * d);
  }
  return f;
}

SeasonConfig interior_cfg(int substeps = 16) {
  SeasonConfig cfg;
  cfg.substeps = substeps;
  cfg.check_boundary = false;
  return cfg;
}

}  // namespace

TEST_CASE("zero field stays zero") {
  ModelParams p = fisher_1d();
  Field z = Field::zeros(season::centered_axis(10.0, 0.1));
  Field out = season::advance_free(p, z, interior_cfg());
  for (double v : out.values) CHECK(v == 0.0);

  season::Box box{1, 4.0, 0.0};
  Field zd = season::dirichlet_zeros(box, 0.05);
  Field outd = season::advance_dirichlet(p, zd, interior_cfg());
  for (double v : outd.values) CHECK(v == 0.0);
}

TEST_CASE("spatially constant data follows the exact reaction flow") {
  ModelParams p = fisher_1d();
  Field f = Field::zeros(season::centered_axis(10.0, 0.1));
  for (double& v : f.values) v = 0.3;
  Field out = season::advance_free(p, f, interior_cfg());
  double expect = 0.3 * std::exp(1.0) / (1.0 + 0.3 * (std::exp(1.0) - 1.0));
  for (double v : out.values) CHECK(v == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("pure transport conserves mass") {
  ModelParams p = fisher_1d(0.8, 0.6);
  p.growth = LinearGrowth{0.0};  // plumbing-only mode: no reaction
  GridAxis ax = season::centered_axis(30.0, 0.1);
  Field f = gaussian_blob_1d(ax, 0.0, 2.0, 1.0);
  double mass0 = f.mass();
  Field out = season::advance_free(p, f, interior_cfg());
  CHECK(out.mass() == doctest::Approx(mass0).epsilon(1e-12));
}

TEST_CASE("comparison principle for the season step") {
  std::mt19937 rng(97);
  std::uniform_real_distribution<double> u(0.0, 0.4);
  ModelParams p = fisher_1d(1.0, 0.3);
  GridAxis ax = season::centered_axis(20.0, 0.1);
  for (int trial = 0; trial < 20; ++trial) {
    Field lo = Field::zeros(ax);
    Field hi = Field::zeros(ax);
    for (int i = 0; i < ax.count; ++i) {
      double envelope = std::exp(-0.02 * std::pow(ax.coord(i), 2));
      double a = u(rng) * envelope;
      double b = a + u(rng) * envelope;
      lo.at(i) = a;
      hi.at(i) = b;
    }
    Field lo1 = season::advance_free(p, lo, interior_cfg(8));
    Field hi1 = season::advance_free(p, hi, interior_cfg(8));
    for (std::size_t i = 0; i < lo1.values.size(); ++i) {
      CHECK(lo1.values[i] <= hi1.values[i] + 1e-10);
    }
  }
}

TEST_CASE("translation equivariance on the periodic grid") {
  ModelParams p = fisher_1d(1.0, 0.4);
  GridAxis ax = season::centered_axis(25.0, 0.1);
  Field f = gaussian_blob_1d(ax, -3.0, 1.5, 0.5);
  int shift = 17;

  Field shifted = f;
  for (int i = 0; i < ax.count; ++i) {
    shifted.at((i + shift) % ax.count) = f.at(i);
  }
  Field a = season::advance_free(p, shifted, interior_cfg());
  Field b = season::advance_free(p, f, interior_cfg());
  for (int i = 0; i < ax.count; ++i) {
    CHECK(std::abs(a.at((i + shift) % ax.count) - b.at(i)) < 1e-8);
  }
}

TEST_CASE("heat kernel mass, peak, and spread") {
  ModelParams p = fisher_1d(1.3, 0.7);
  p.growth = LinearGrowth{0.4};

  double t = 1.0;
  auto k = [&](double x) { return season::green_eval(p, Vec::of(x), t); };
  double sigma = std::sqrt(2.0 * 1.3 * t);
  double lo = 0.7 * t - 12.0 * sigma, hi = 0.7 * t + 12.0 * sigma;
  double mass = integrate(k, lo, hi);
  CHECK(std::abs(mass - std::exp(0.4 * t)) < 1e-8);

  // Peak sits at x = t q.
  CHECK(k(0.7 * t) > k(0.7 * t + 0.1));
  CHECK(k(0.7 * t) > k(0.7 * t - 0.1));

  // Second moment about the peak is 2At.
  double m2 = integrate([&](double x) { return (x - 0.7 * t) * (x - 0.7 * t) * k(x); }, lo, hi);
  CHECK(m2 / mass == doctest::Approx(2.0 * 1.3 * t).epsilon(1e-8));

  // 2D mass check.
  ModelParams p2;
  p2.dim = 2;
  p2.A = SymMat{2, 1.0, 0.2, 0.7};
  p2.q = Vec::of2(0.3, -0.1);
  p2.growth = LinearGrowth{0.4};
  p2.map = LinearMap{1.0};
  double s1 = std::sqrt(2.0 * p2.A.xx), s2 = std::sqrt(2.0 * p2.A.yy);
  double mass2 = integrate(
      [&](double x) {
        return integrate([&](double y) { return season::green_eval(p2, Vec::of2(x, y), 1.0); },
                         -0.1 - 10.0 * s2, -0.1 + 10.0 * s2);
      },
      0.3 - 10.0 * s1, 0.3 + 10.0 * s1);
  CHECK(std::abs(mass2 - std::exp(0.4)) < 1e-8);
}

TEST_CASE("spectral season with linear growth matches the heat-kernel convolution") {
  ModelParams p = fisher_1d(1.0, 0.4);
  p.growth = LinearGrowth{0.3};
  GridAxis ax = season::centered_axis(25.0, 0.1);
  Field f = gaussian_blob_1d(ax, 0.0, 1.2, 0.8);

  Field spectral = season::advance_free(p, f, interior_cfg());
  Field direct = ref::green_convolution(p, f, 1.0);
  double err = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    err = std::max(err, std::abs(spectral.values[i] - direct.values[i]));
  }
  CHECK(err < 1e-6);

  // The serial reference season agrees with the parallel one to roundoff.
  Field serial = ref::advance_free_serial(p, f, interior_cfg());
  double gap = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    gap = std::max(gap, std::abs(spectral.values[i] - serial.values[i]));
  }
  CHECK(gap < 1e-11);
}

TEST_CASE("hostile boundary eigenmode decay") {
  // With f = a u the mode sin(pi x / L) changes by e^{a - d pi^2/L^2} per season.
  double L = M_PI;
  ModelParams p = fisher_1d();
  p.growth = LinearGrowth{0.5};
  season::Box box{1, L, 0.0};
  Field f = season::dirichlet_zeros(box, L / 256.0);
  for (int i = 0; i < f.nx(); ++i) f.at(i) = std::sin(M_PI * f.ax.coord(i) / L);

  Field out = season::advance_dirichlet(p, f, interior_cfg(64));
  double factor = std::exp(0.5 - M_PI * M_PI / (L * L));
  int mid = f.nx() / 2;
  CHECK(out.at(mid) / f.at(mid) == doctest::Approx(factor).epsilon(1e-4));

  // A wider habitat flips the sign of the exponent.
  double L2 = 2.0 * M_PI;
  season::Box box2{1, L2, 0.0};
  Field g = season::dirichlet_zeros(box2, L2 / 256.0);
  for (int i = 0; i < g.nx(); ++i) g.at(i) = 0.01 * std::sin(M_PI * g.ax.coord(i) / L2);
  Field out2 = season::advance_dirichlet(p, g, interior_cfg(64));
  double factor2 = std::exp(0.5 - M_PI * M_PI / (L2 * L2));
  CHECK(factor2 > 1.0);
  int mid2 = g.nx() / 2;
  CHECK(out2.at(mid2) / g.at(mid2) == doctest::Approx(factor2).epsilon(1e-4));
}

TEST_CASE("2d hostile boundary eigenmode") {
  ModelParams p;
  p.dim = 2;
  p.A = SymMat::diag2(1.0, 0.5);
  p.q = Vec::zero(2);
  p.growth = LinearGrowth{0.4};
  p.map = LinearMap{1.0};

  double L1 = M_PI, L2 = 2.0;
  season::Box box{2, L1, L2};
  Field f = season::dirichlet_zeros(box, std::min(L1, L2) / 64.0);
  for (int ix = 0; ix < f.nx(); ++ix) {
    for (int iy = 0; iy < f.ny(); ++iy) {
      f.at(ix, iy) =
          std::sin(M_PI * f.ax.coord(ix) / L1) * std::sin(M_PI * f.ay.coord(iy) / L2);
    }
  }
  Field out = season::advance_dirichlet(p, f, interior_cfg(32));
  double factor =
      std::exp(0.4 - 1.0 * M_PI * M_PI / (L1 * L1) - 0.5 * M_PI * M_PI / (L2 * L2));
  int mx = f.nx() / 2, my = f.ny() / 2;
  CHECK(out.at(mx, my) / f.at(mx, my) == doctest::Approx(factor).epsilon(1e-3));
}

TEST_CASE("subcritical habitat loses small populations") {
  ModelParams p = fisher_1d();  // rho = 1, critical length pi
  double L = 0.5 * M_PI;
  season::Box box{1, L, 0.0};
  Field f = season::dirichlet_zeros(box, L / 128.0);
  for (int i = 0; i < f.nx(); ++i) f.at(i) = 0.01 * std::sin(M_PI * f.ax.coord(i) / L);
  Field out = f;
  for (int gen = 0; gen < 3; ++gen) out = season::advance_dirichlet(p, out, interior_cfg());
  CHECK(out.max_value() < f.max_value());
}

TEST_CASE("cell Peclet advisory") {
  ModelParams p = fisher_1d(0.01, 2.0);  // |q| h / (2d) = 2 * 0.05 / 0.02 = 5
  season::Box box{1, 4.0, 0.0};
  Field f = season::dirichlet_zeros(box, 0.05);
  std::vector<std::string> advisories;
  season::advance_dirichlet(p, f, interior_cfg(), &advisories);
  REQUIRE(advisories.size() == 1);
  CHECK(advisories[0].find("Peclet") != std::string::npos);
}

TEST_CASE("wrap-around contamination is detected") {
  ModelParams p = fisher_1d();
  GridAxis ax = season::centered_axis(10.0, 0.1);
  Field f = gaussian_blob_1d(ax, ax.coord(2), 0.5, 0.8);  // mass at the left edge
  SeasonConfig cfg;
  cfg.substeps = 8;
  CHECK_THROWS_AS(season::advance_free(p, f, cfg), ModelError);
}

TEST_CASE("free grids are sized to powers of two") {
  ModelParams p = fisher_1d();
  Field f = season::free_zeros(p, 0.05, 30);
  CHECK(fft::is_pow2(f.nx()));
  // Wide enough to cover 30 generations of front motion at speed 2 plus margin.
  CHECK(f.ax.length() >= 2.0 * (1.0 + 1.5 * 2.0 * 30));

  GridAxis ax = season::centered_axis(10.0, 0.1);
  CHECK(ax.count == 256);
  CHECK(ax.origin == doctest::Approx(-12.8));
}
