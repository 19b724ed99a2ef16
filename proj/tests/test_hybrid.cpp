#include <doctest.h>

#include <cmath>
#include <random>

#include "impulse/hybrid.hpp"

using namespace impulse;
using namespace impulse::hybrid;

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

ModelParams stream_params() {
  ModelParams p;
  p.dim = 1;
  p.A = SymMat::scalar(1, 0.5);
  p.q = Vec::of(1.0);
  p.growth = LinearGrowth{-0.1};
  p.map = BevertonHoltMap{std::exp(1.1) - 1.0};
  p.kernel = GaussianKernel{Vec::of(0.5), SymMat::scalar(1, 0.5)};
  return p;
}

RunOptions interior_opts(int substeps = 16) {
  RunOptions opt;
  opt.season.substeps = substeps;
  opt.season.check_boundary = false;
  return opt;
}

const Direction kRight = Direction::along(Vec::of(1.0));
const Direction kLeft = Direction::along(Vec::of(-1.0));

Field constant_field(const GridAxis& ax, double value) {
  Field f = Field::zeros(ax);
  for (double& v : f.values) v = value;
  return f;
}

}  // namespace

TEST_CASE("a generation on constant data matches the nonspatial step") {
  ModelParams p = fisher_1d();
  p.map = LinearMap{0.9};
  GridAxis ax = season::centered_axis(12.0, 0.1);
  Field f = constant_field(ax, 0.4);
  Field out = generation_Q(p, f, interior_opts());
  double expect = analytic::nonspatial_step(p, 0.4);
  for (double v : out.values) CHECK(v == doctest::Approx(expect).epsilon(1e-10));

  // Kernel order: season, dispersal, then the map.
  ModelParams s = stream_params();
  Field fs = constant_field(ax, 0.4);
  Field outs = generation_P(s, fs, interior_opts());
  double expect_s = analytic::nonspatial_step(s, 0.4);
  for (double v : outs.values) CHECK(v == doctest::Approx(expect_s).epsilon(1e-9));
}

TEST_CASE("zero is a fixed state") {
  ModelParams p = fisher_1d();
  Field z = Field::zeros(season::centered_axis(12.0, 0.1));
  Field out = generation_Q(p, z, interior_opts());
  for (double v : out.values) CHECK(v == 0.0);
}

TEST_CASE("the equilibrium is a fixed state of the generation operator") {
  ModelParams p = fisher_1d();
  p.map = LinearMap{0.9};
  double pi1 = analytic::equilibrium_nonspatial(p).pi1;
  GridAxis ax = season::centered_axis(12.0, 0.1);
  Field f = constant_field(ax, pi1);
  Field out = generation_Q(p, f, interior_opts());
  for (double v : out.values) CHECK(std::abs(v - pi1) < 1e-8);
}

TEST_CASE("generation operators preserve order") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 0.35);
  GridAxis ax = season::centered_axis(15.0, 0.1);

  ModelParams q_model = fisher_1d(1.0, 0.2);
  ModelParams p_model = stream_params();

  // 25 ordered pairs through Q plus 25 through P.
  for (int trial = 0; trial < 25; ++trial) {
    Field lo = Field::zeros(ax);
    Field hi = Field::zeros(ax);
    for (int i = 0; i < ax.count; ++i) {
      double envelope = std::exp(-0.03 * std::pow(ax.coord(i), 2));
      double a = u(rng) * envelope;
      lo.at(i) = a;
      hi.at(i) = a + u(rng) * envelope;
    }
    Field lo_q = generation_Q(q_model, lo, interior_opts(8));
    Field hi_q = generation_Q(q_model, hi, interior_opts(8));
    Field lo_p = generation_P(p_model, lo, interior_opts(8));
    Field hi_p = generation_P(p_model, hi, interior_opts(8));
    for (std::size_t i = 0; i < lo.values.size(); ++i) {
      CHECK(lo_q.values[i] <= hi_q.values[i] + 1e-10);
      CHECK(lo_p.values[i] <= hi_p.values[i] + 1e-10);
    }
  }
}

TEST_CASE("point-mass dispersal is the identity convolution") {
  ModelParams p = fisher_1d();
  p.map = BevertonHoltMap{1.0};
  ModelParams pm = p;
  pm.kernel = PointMassKernel{1};

  GridAxis ax = season::centered_axis(15.0, 0.1);
  Field f = Field::zeros(ax);
  for (int i = 0; i < ax.count; ++i) {
    f.at(i) = 0.5 * std::exp(-0.5 * std::pow(ax.coord(i), 2));
  }
  Field with_kernel = generation_P(pm, f, interior_opts());
  // Season first, then the map, with no redistribution in between.
  Field by_hand = season::advance_free(p, f, interior_opts().season);
  for (double& v : by_hand.values) v = eval_map(p.map, v);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    CHECK(with_kernel.values[i] == doctest::Approx(by_hand.values[i]).epsilon(1e-12));
  }
}

TEST_CASE("gaussian dispersal shifts and spreads moments") {
  // Fully linear chain on Gaussian data: the output stays Gaussian with
  // mean shifted by q - mu and covariance grown by 2A + 2B.
  ModelParams p;
  p.dim = 1;
  p.A = SymMat::scalar(1, 0.6);
  p.q = Vec::of(0.8);
  p.growth = LinearGrowth{0.2};
  p.map = LinearMap{1.3};
  p.kernel = GaussianKernel{Vec::of(0.5), SymMat::scalar(1, 0.4)};

  GridAxis ax = season::centered_axis(30.0, 0.05);
  Field f = Field::zeros(ax);
  double var0 = 0.7;
  for (int i = 0; i < ax.count; ++i) {
    double x = ax.coord(i);
    f.at(i) = std::exp(-0.5 * x * x / var0);
  }
  Field out = generation_P(p, f, interior_opts());

  auto moments = [](const Field& g) {
    double m0 = 0.0, m1 = 0.0;
    for (int i = 0; i < g.nx(); ++i) {
      m0 += g.at(i);
      m1 += g.ax.coord(i) * g.at(i);
    }
    double mean = m1 / m0;
    double m2 = 0.0;
    for (int i = 0; i < g.nx(); ++i) {
      m2 += std::pow(g.ax.coord(i) - mean, 2) * g.at(i);
    }
    return std::pair<double, double>{mean, m2 / m0};
  };

  auto [mean_out, var_out] = moments(out);
  CHECK(std::abs(mean_out - (0.8 - 0.5)) < 1e-6);
  CHECK(std::abs(var_out - (var0 + 2.0 * 0.6 + 2.0 * 0.4)) / var_out < 1e-6);

  // Dispersal conserves mass: with no growth and an identity map the mass
  // before and after a generation agrees.
  ModelParams cons = p;
  cons.growth = LinearGrowth{1e-30};
  cons.map = LinearMap{1.0};
  Field kept = generation_P(cons, f, interior_opts());
  CHECK(kept.mass() == doctest::Approx(f.mass()).epsilon(1e-10));
}

TEST_CASE("kernel wider than the grid is rejected") {
  ModelParams p = stream_params();
  p.kernel = GaussianKernel{Vec::of(0.0), SymMat::scalar(1, 400.0)};
  GridAxis ax = season::centered_axis(10.0, 0.1);
  Field f = constant_field(ax, 0.1);
  CHECK_THROWS_AS(generation_P(p, f, interior_opts()), ModelError);
}

TEST_CASE("front position interpolates the outermost crossing") {
  GridAxis ax{0.0, 0.1, 64};
  Field f = Field::zeros(ax);
  // Profile drops linearly from 1 to 0 between x = 3.2 and x = 3.3.
  for (int i = 0; i < ax.count; ++i) {
    double x = ax.coord(i);
    f.at(i) = x <= 3.2 ? 1.0 : (x >= 3.3 ? 0.0 : (3.3 - x) / 0.1);
  }
  CHECK(front_position(f, 0.5, kRight) == doctest::Approx(3.25).epsilon(1e-12));

  Field z = Field::zeros(ax);
  CHECK_THROWS_AS(front_position(z, 0.5, kRight), ModelError);

  // A shift by 1.7 cells moves the interpolated position by exactly 1.7 h.
  // The ramp spans many cells so both crossings sit inside the linear region.
  auto ramp = [&](double x) { return x <= 3.0 ? 1.0 : (x >= 4.0 ? 0.0 : 4.0 - x); };
  double delta = 1.7 * ax.spacing;
  Field wide = Field::zeros(ax);
  Field wide_shifted = Field::zeros(ax);
  for (int i = 0; i < ax.count; ++i) {
    wide.at(i) = ramp(ax.coord(i));
    wide_shifted.at(i) = ramp(ax.coord(i) - delta);
  }
  double base = front_position(wide, 0.5, kRight);
  double moved = front_position(wide_shifted, 0.5, kRight);
  CHECK(moved - base == doctest::Approx(delta).epsilon(1e-9));

  // Leftward direction reports the coordinate along -x.
  Field g = Field::zeros(ax);
  for (int i = 0; i < ax.count; ++i) {
    double x = ax.coord(i);
    g.at(i) = x >= 3.0 ? 1.0 : (x <= 2.9 ? 0.0 : (x - 2.9) / 0.1);
  }
  CHECK(front_position(g, 0.5, kLeft) == doctest::Approx(-2.95).epsilon(1e-12));
}

TEST_CASE("2d front position along a ray") {
  GridAxis ax{-10.0, 0.1, 201};
  Field f = Field::zeros2(ax, ax);
  // Radial plateau of height 1 dropping linearly between r = 3 and r = 4.
  for (int ix = 0; ix < f.nx(); ++ix) {
    for (int iy = 0; iy < f.ny(); ++iy) {
      double r = std::hypot(ax.coord(ix), ax.coord(iy));
      f.at(ix, iy) = r <= 3.0 ? 1.0 : (r >= 4.0 ? 0.0 : 4.0 - r);
    }
  }
  for (double theta : {0.0, M_PI / 4.0, 2.1}) {
    Direction e = Direction::angle(theta);
    CHECK(front_position(f, 0.5, e) == doctest::Approx(3.5).epsilon(2e-3));
  }
  Field z = Field::zeros2(ax, ax);
  CHECK_THROWS_AS(front_position(z, 0.5, Direction::angle(0.3)), ModelError);
}

TEST_CASE("2d generation on constant data matches the nonspatial step") {
  ModelParams p;
  p.dim = 2;
  p.A = SymMat::diag2(1.0, 0.5);
  p.q = Vec::of2(0.2, -0.1);
  p.growth = LogisticGrowth{1.0};
  p.map = BevertonHoltMap{1.5};
  GridAxis ax = season::centered_axis(6.0, 0.2);
  Field f = Field::zeros2(ax, ax);
  for (double& v : f.values) v = 0.3;
  Field out = generation_Q(p, f, interior_opts(8));
  double expect = analytic::nonspatial_step(p, 0.3);
  for (int ix = 0; ix < out.nx(); ix += 16) {
    for (int iy = 0; iy < out.ny(); iy += 16) {
      CHECK(out.at(ix, iy) == doctest::Approx(expect).epsilon(1e-10));
    }
  }
}

TEST_CASE("speed estimation on an exactly translating profile") {
  ModelParams p = fisher_1d();
  GridAxis ax{-40.0, 0.1, 1024};
  Trajectory traj;
  traj.params = p;
  for (int m = 0; m <= 12; ++m) {
    Field f = Field::zeros(ax);
    double edge = -20.0 + 2.0 * m;  // translate by exactly 2.0 per generation
    for (int i = 0; i < ax.count; ++i) {
      double x = ax.coord(i);
      f.at(i) = x <= edge ? 1.0 : (x >= edge + 1.0 ? 0.0 : edge + 1.0 - x);
    }
    traj.generations.push_back(f);
  }
  SpeedReport rep = estimate_speed(traj, kRight, 0.5, 0.4);
  CHECK(rep.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rep.residual < 1e-12);
  CHECK(rep.generations_used >= 5);

  // Too few generations after burn-in.
  Trajectory small;
  small.params = p;
  small.generations.assign(4, traj.generations[0]);
  CHECK_THROWS_AS(estimate_speed(small, kRight, 0.5, 0.4), ModelError);
}

TEST_CASE("run reproduces the nonspatial sequence on constant data") {
  ModelParams p = fisher_1d();
  p.map = BevertonHoltMap{2.0};
  GridAxis ax = season::centered_axis(12.0, 0.1);
  Field f = constant_field(ax, 0.2);
  Trajectory traj = run(p, f, 5, interior_opts());
  REQUIRE(traj.count() == 5);
  auto seq = analytic::nonspatial_iterate(p, 0.2, 5);
  for (int m = 1; m <= 5; ++m) {
    double expect = seq[static_cast<std::size_t>(m - 1)];
    for (int i = 0; i < ax.count; i += 64) {
      CHECK(traj.generations[static_cast<std::size_t>(m)].at(i) ==
            doctest::Approx(expect).epsilon(1e-9));
    }
  }

  // One generation equals one application of the operator.
  Trajectory one = run(p, f, 1, interior_opts());
  Field direct = generation_step(p, f, interior_opts());
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    CHECK(one.generations[1].values[i] == direct.values[i]);
  }
}

TEST_CASE("an extinction-regime run loses its front") {
  ModelParams p = fisher_1d();
  p.growth = LinearGrowth{0.2};
  p.map = LinearMap{0.5};
  Field grid = Field::zeros(season::centered_axis(15.0, 0.1));
  Field seed = seed_ball(p, grid, 0.4);
  Trajectory traj = run(p, seed, 12, interior_opts());
  CHECK_THROWS_AS(estimate_speed(traj, kRight, 0.2, 0.4), ModelError);
}

TEST_CASE("a run aborts cleanly when the front reaches the boundary") {
  ModelParams p = fisher_1d();
  GridAxis ax = season::centered_axis(8.0, 0.1);  // far too small for 40 generations
  Field seed = seed_ball(p, Field::zeros(ax), 0.5);
  RunOptions opt;  // boundary check on
  Trajectory traj = run(p, seed, 40, opt);
  CHECK(traj.aborted.has_value());
  CHECK(traj.count() < 40);
  CHECK(traj.count() >= 1);
}

TEST_CASE("operative equilibrium clamps into the Ricker monotone range") {
  ModelParams p = fisher_1d();
  p.map = RickerMap{2.0};  // monotone bound 0.5
  std::vector<std::string> advisories;
  double pi1 = operative_equilibrium(p, &advisories);
  CHECK(pi1 == doctest::Approx(0.5));
  CHECK_FALSE(advisories.empty());

  // Kernel models drive toward the image of the equilibrium under the map.
  ModelParams s = stream_params();
  double lambda = std::exp(1.1) - 1.0;
  double n_star = ((1.0 + lambda) * std::exp(-0.1) - 1.0) / lambda;
  CHECK(operative_equilibrium(s) == doctest::Approx(eval_map(s.map, n_star)).epsilon(1e-9));
}

TEST_CASE("measured speed does not depend on the front level") {
  // Slopes taken at pi1/2 and pi1/10 agree within the fit residuals.
  ModelParams p = fisher_1d();
  Field grid = season::free_zeros(p, 0.1, 20);
  Field seed = seed_ball(p, grid);
  RunOptions opt;
  opt.season.substeps = 16;
  Trajectory traj = run(p, seed, 20, opt);
  REQUIRE(traj.count() == 20);
  SpeedReport half = estimate_speed(traj, kRight, 0.5, 0.4);
  SpeedReport tenth = estimate_speed(traj, kRight, 0.1, 0.4);
  CHECK(std::abs(half.slope - tenth.slope) <= half.residual + tenth.residual + 1e-6);
}

TEST_CASE("persistence classification against the critical length") {
  ModelParams p = fisher_1d();  // critical length pi
  PersistenceOptions opt;
  opt.generations = 60;
  opt.season.substeps = 16;

  season::Box small{1, 0.5 * M_PI, 0.0};
  CHECK(classify_persistence(p, small, opt) == Persistence::Extinct);

  season::Box large{1, 2.0 * M_PI, 0.0};
  CHECK(classify_persistence(p, large, opt) == Persistence::Persistent);
}

TEST_CASE("bisection brackets the critical length") {
  ModelParams p = fisher_1d();
  PersistenceOptions opt;
  opt.generations = 80;
  double estimate = critical_length_search(p, 0.5 * M_PI, 2.0 * M_PI, opt);
  CHECK(std::abs(estimate - M_PI) / M_PI < 0.05);

  // Both endpoints on the same side invalidate the bracket.
  CHECK_THROWS_AS(critical_length_search(p, 4.0, 8.0, opt), ModelError);
}
