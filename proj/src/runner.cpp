#include "impulse/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <random>
#include <thread>

#include "impulse/oracle.hpp"

namespace impulse::cli {

namespace {

std::vector<Direction> default_directions(int dim) {
  if (dim == 1) return {Direction::along(Vec::of(1.0)), Direction::along(Vec::of(-1.0))};
  return {Direction::axis(2, 0), Direction::axis(2, 1)};
}

std::ofstream open_output(const std::string& dir, const std::string& name) {
  std::filesystem::path p(dir);
  if (!p.empty()) std::filesystem::create_directories(p);
  std::ofstream out(p / name);
  if (!out.is_open()) {
    throw ModelError(ErrorCode::Config, "cannot write output file " + (p / name).string());
  }
  return out;
}

void write_row(std::ofstream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

// Fan work out across at most `jobs` threads; results keep input order.
void run_indexed(int n, int jobs, const std::function<void(int)>& fn) {
  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(jobs));
  for (int t = 0; t < jobs; ++t) {
    pool.emplace_back([&, t]() {
      for (int i = t; i < n; i += jobs) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

double front_threshold(const RunConfig& cfg) {
  double pi1;
  try {
    pi1 = hybrid::operative_equilibrium(cfg.model);
  } catch (const ModelError&) {
    pi1 = 1.0;
  }
  return cfg.numerics.threshold_fraction * pi1;
}

// Oracle settings with the obstacle level pinned at half the equilibrium.
oracle::OracleConfig oracle_config_for(const RunConfig& cfg) {
  oracle::OracleConfig ocfg = cfg.task.oracle_cfg;
  try {
    ocfg.phi_level = 0.5 * hybrid::operative_equilibrium(cfg.model);
  } catch (const ModelError&) {
    // keep the default level; the linear dichotomy is level-free
  }
  return ocfg;
}

void apply_jitter(Field& f, double amplitude) {
  if (amplitude <= 0.0) return;
  unsigned long long seed = 0;
  if (const char* env = std::getenv("IMPULSE_FRONT_SEED")) {
    seed = std::strtoull(env, nullptr, 10);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double& v : f.values) v *= 1.0 + amplitude * u(rng);
}

// ---------------------------------------------------------------------------
// Tasks
// ---------------------------------------------------------------------------

void cmd_speed(const RunConfig& cfg, std::ostream& log) {
  auto dirs = cfg.task.directions.empty() ? default_directions(cfg.model.dim)
                                          : cfg.task.directions;
  double threshold = front_threshold(cfg);

  hybrid::Trajectory traj;
  if (cfg.task.with_simulation) {
    traj = simulate_trajectory(cfg);
    if (traj.aborted) throw ModelError(ErrorCode::BoundaryContamination, *traj.aborted);
  }

  std::ofstream out = open_output(cfg.out_dir, "speed.csv");
  write_row(out, {"e_x", "e_y", "analytic_speed[length/gen]", "oracle_speed[length/gen]",
                  "measured_speed[length/gen]", "fit_residual[length]", "generations_used",
                  "threshold[density]"});
  for (const auto& e : dirs) {
    double analytic = analytic::spreading_speed(cfg.model, e);
    double oracle_speed = std::numeric_limits<double>::quiet_NaN();
    if (cfg.task.with_oracle) {
      oracle_speed = oracle::weinberger_speed(analytic::model_measure(cfg.model), e,
                                              oracle_config_for(cfg));
    }
    double measured = std::numeric_limits<double>::quiet_NaN();
    double residual = std::numeric_limits<double>::quiet_NaN();
    int used = 0;
    if (cfg.task.with_simulation) {
      auto rep = hybrid::estimate_speed(traj, e, threshold, cfg.numerics.burn_in_fraction);
      measured = rep.slope;
      residual = rep.residual;
      used = rep.generations_used;
    }
    write_row(out, {format_number(e.e.x), format_number(cfg.model.dim == 2 ? e.e.y : 0.0),
                    format_number(analytic), format_number(oracle_speed),
                    format_number(measured), format_number(residual), std::to_string(used),
                    format_number(threshold)});
    log << "speed e=(" << format_number(e.e.x) << "," << format_number(e.e.y)
        << ") analytic=" << format_number(analytic);
    if (cfg.task.with_oracle) log << " oracle=" << format_number(oracle_speed);
    if (cfg.task.with_simulation) log << " measured=" << format_number(measured);
    log << "\n";
  }
}

void cmd_critical_domain(const RunConfig& cfg, std::ostream& log) {
  auto rep = analytic::critical_size(cfg.model, cfg.task.shape);
  double simulated = std::numeric_limits<double>::quiet_NaN();
  if (cfg.task.with_simulation) {
    if (cfg.model.dim != 1 || !rep.finite) {
      throw ModelError(ErrorCode::Config,
                       "simulated critical length requires a finite 1D prediction");
    }
    hybrid::PersistenceOptions popt;
    popt.season = cfg.numerics.season;
    popt.spacing = cfg.numerics.box_spacing;
    popt.generations = cfg.numerics.persistence_generations;
    simulated = hybrid::critical_length_search(cfg.model, 0.5 * rep.size, 2.0 * rep.size, popt);
  }
  std::ofstream out = open_output(cfg.out_dir, "critical_domain.csv");
  write_row(out, {"shape", "critical_size[length]", "blowup_advection[length/gen]",
                  "simulated_size[length]"});
  write_row(out, {cfg.task.shape == analytic::DomainShape::Interval ? "interval" : "hypercube",
                  format_number(rep.size), format_number(rep.blowup_advection),
                  format_number(simulated)});
  log << "critical size " << format_number(rep.size);
  if (cfg.task.with_simulation) log << " simulated " << format_number(simulated);
  log << "\n";
}

void cmd_ray(const RunConfig& cfg, std::ostream& log) {
  std::ofstream out = open_output(cfg.out_dir, "ray.csv");
  write_row(out, {"e_x", "e_y", "c_star[length/gen]", "ray_speed[length/gen]"});
  std::vector<Direction> dirs = cfg.task.directions;
  if (dirs.empty()) {
    if (cfg.model.dim == 2) {
      for (int deg = 0; deg <= 90; ++deg) dirs.push_back(Direction::angle(deg * M_PI / 180.0));
    } else {
      dirs = default_directions(1);
    }
  }
  for (const auto& e : dirs) {
    double cstar = analytic::spreading_speed(cfg.model, e);
    double ray = analytic::ray_speed(cfg.model, e);
    write_row(out, {format_number(e.e.x), format_number(cfg.model.dim == 2 ? e.e.y : 0.0),
                    format_number(cstar), format_number(ray)});
  }
  log << "ray table with " << dirs.size() << " directions\n";
}

void cmd_simulate(const RunConfig& cfg, std::ostream& log) {
  auto dirs = cfg.task.directions.empty() ? default_directions(cfg.model.dim)
                                          : cfg.task.directions;
  double threshold = front_threshold(cfg);
  hybrid::Trajectory traj = simulate_trajectory(cfg);

  std::ofstream out = open_output(cfg.out_dir, "simulate.csv");
  std::vector<std::string> header = {"generation", "max_value[density]"};
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    header.push_back("front_" + std::to_string(i) + "[length]");
  }
  write_row(out, header);
  for (std::size_t m = 0; m < traj.generations.size(); ++m) {
    std::vector<std::string> row = {std::to_string(m),
                                    format_number(traj.generations[m].max_value())};
    for (const auto& e : dirs) {
      double pos = std::numeric_limits<double>::quiet_NaN();
      try {
        pos = hybrid::front_position(traj.generations[m], threshold, e);
      } catch (const ModelError&) {
      }
      row.push_back(format_number(pos));
    }
    write_row(out, row);
  }

  // Final profile as plot data (blocks of x u pairs along each axis line).
  std::ofstream prof = open_output(cfg.out_dir, "profile_final.dat");
  const Field& last = traj.generations.back();
  if (last.dim == 1) {
    for (int i = 0; i < last.nx(); ++i) {
      prof << format_number(last.ax.coord(i)) << ' ' << format_number(last.at(i)) << '\n';
    }
  } else {
    int mid_y = last.ny() / 2;
    for (int i = 0; i < last.nx(); ++i) {
      prof << format_number(last.ax.coord(i)) << ' ' << format_number(last.at(i, mid_y)) << '\n';
    }
    prof << '\n';
    int mid_x = last.nx() / 2;
    for (int j = 0; j < last.ny(); ++j) {
      prof << format_number(last.ay.coord(j)) << ' ' << format_number(last.at(mid_x, j)) << '\n';
    }
  }

  log << "simulated " << traj.count() << " generations, final max "
      << format_number(traj.generations.back().max_value()) << "\n";
  if (traj.aborted) throw ModelError(ErrorCode::BoundaryContamination, *traj.aborted);
}

void cmd_oracle(const RunConfig& cfg, std::ostream& log) {
  auto dirs = cfg.task.directions.empty() ? default_directions(cfg.model.dim)
                                          : cfg.task.directions;
  analytic::GaussianMeasure meas = analytic::model_measure(cfg.model);
  oracle::OracleConfig ocfg = oracle_config_for(cfg);
  std::ofstream out = open_output(cfg.out_dir, "oracle.csv");
  write_row(out, {"e_x", "e_y", "oracle_speed[length/gen]", "analytic_speed[length/gen]",
                  "mgf_max_rel_error"});
  for (const auto& e : dirs) {
    double chat = oracle::weinberger_speed(meas, e, ocfg);
    double cstar = analytic::spreading_speed(cfg.model, e);
    double err = oracle::crosscheck_mgf(meas, e, {0.0, 0.5, 1.0, 2.0, 3.0});
    write_row(out, {format_number(e.e.x), format_number(cfg.model.dim == 2 ? e.e.y : 0.0),
                    format_number(chat), format_number(cstar), format_number(err)});
    log << "oracle e=(" << format_number(e.e.x) << "," << format_number(e.e.y)
        << ") speed=" << format_number(chat) << " closed-form=" << format_number(cstar) << "\n";
  }
}

void cmd_scenario(const RunConfig& cfg, std::ostream& log) {
  const auto& sp = cfg.task.scenario;
  if (sp.name == "climate") {
    auto rep = analytic::climate_bounds(sp.climate);
    std::ofstream out = open_output(cfg.out_dir, "scenario_climate.csv");
    write_row(out, {"rho[1/gen]", "c_max[length/gen]", "window_open", "speed_right[length/gen]",
                    "speed_left[length/gen]"});
    write_row(out, {format_number(rep.rho), format_number(rep.c_max),
                    rep.window_open ? "true" : "false", format_number(rep.speed_right),
                    format_number(rep.speed_left)});
    log << "climate c_max=" << format_number(rep.c_max)
        << " window_open=" << (rep.window_open ? "true" : "false")
        << " (positive spread speeds follow inside the window)\n";
    return;
  }
  if (sp.name == "stream") {
    auto rep = analytic::stream_bounds(sp.stream);
    std::ofstream out = open_output(cfg.out_dir, "scenario_stream.csv");
    write_row(out, {"rho[1/gen]", "persists", "spreads_both_ways", "speed_down[length/gen]",
                    "speed_up[length/gen]"});
    write_row(out, {format_number(rep.rho), rep.persists ? "true" : "false",
                    rep.spreads_both_ways ? "true" : "false", format_number(rep.speed_down),
                    format_number(rep.speed_up)});
    if (!rep.persists) {
      log << "stream verdict: extinction ((1+lambda) e^{-r} <= 1)\n";
    } else {
      log << "stream speeds " << format_number(rep.speed_down) << " / "
          << format_number(rep.speed_up)
          << (rep.spreads_both_ways ? " (spreads both ways)" : " (one-way spread)") << "\n";
    }
    return;
  }
  // savannah
  auto rep = analytic::savannah_bounds(sp.savannah);
  ModelParams p = analytic::savannah_params(sp.savannah);
  std::ofstream out = open_output(cfg.out_dir, "scenario_savannah.csv");
  write_row(out, {"rho[1/gen]", "n_star[density]"});
  write_row(out, {format_number(rep.rho), format_number(rep.n_star)});

  std::ofstream dat = open_output(cfg.out_dir, "savannah_speeds.dat");
  auto write_curve = [&](const std::function<double(const Direction&)>& speed) {
    for (int deg = 0; deg <= 90; ++deg) {
      Direction e = Direction::angle(deg * M_PI / 180.0);
      dat << deg << ' ' << format_number(speed(e)) << '\n';
    }
  };
  write_curve([&](const Direction& e) { return analytic::spreading_speed(p, e); });
  dat << '\n';
  write_curve([&](const Direction& e) { return analytic::ray_speed(p, e); });
  log << "savannah N*=" << format_number(rep.n_star) << ", speed curves in savannah_speeds.dat\n";
}

void cmd_sweep(const RunConfig& cfg, int jobs, std::ostream& log) {
  const auto& values = cfg.task.sweep_values;
  int n = static_cast<int>(values.size());
  std::ofstream out = open_output(cfg.out_dir, "sweep.csv");

  if (cfg.task.sweep_parameter == "q") {
    write_row(out, {"q[length/gen]", "c_star_upwind[length/gen]", "lambda_star[length]"});
    std::vector<std::pair<double, double>> rows(static_cast<std::size_t>(n));
    run_indexed(n, jobs, [&](int i) {
      ModelParams p = cfg.model;
      double q = values[static_cast<std::size_t>(i)];
      p.q = p.dim == 1 ? Vec::of(q) : Vec::of2(q, 0.0);
      Direction upwind = p.dim == 1 ? Direction::along(Vec::of(-1.0))
                                    : Direction::axis(2, 0, -1.0);
      double c = analytic::speed_local(p, upwind);
      double lam = analytic::critical_size(p, cfg.task.shape).size;
      rows[static_cast<std::size_t>(i)] = {c, lam};
    });
    for (int i = 0; i < n; ++i) {
      write_row(out, {format_number(values[static_cast<std::size_t>(i)]),
                      format_number(rows[static_cast<std::size_t>(i)].first),
                      format_number(rows[static_cast<std::size_t>(i)].second)});
    }
    log << "swept q over " << n << " values\n";
    return;
  }

  // Habitat-length sweep with simulated persistence verdicts.
  write_row(out, {"L[length]", "verdict"});
  std::vector<hybrid::Persistence> verdicts(static_cast<std::size_t>(n));
  run_indexed(n, jobs, [&](int i) {
    season::Box box;
    box.dim = cfg.model.dim;
    box.L1 = values[static_cast<std::size_t>(i)];
    box.L2 = values[static_cast<std::size_t>(i)];
    hybrid::PersistenceOptions popt;
    popt.season = cfg.numerics.season;
    popt.spacing = cfg.numerics.box_spacing;
    popt.generations = cfg.numerics.persistence_generations;
    verdicts[static_cast<std::size_t>(i)] = hybrid::classify_persistence(cfg.model, box, popt);
  });
  for (int i = 0; i < n; ++i) {
    write_row(out, {format_number(values[static_cast<std::size_t>(i)]),
                    hybrid::persistence_name(verdicts[static_cast<std::size_t>(i)])});
  }
  log << "swept L over " << n << " values\n";
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

hybrid::Trajectory simulate_trajectory(const RunConfig& cfg) {
  const auto& num = cfg.numerics;
  Field grid;
  if (num.half_width > 0.0) {
    GridAxis ax = season::centered_axis(num.half_width, num.spacing);
    grid = cfg.model.dim == 1 ? Field::zeros(ax) : Field::zeros2(ax, ax);
  } else {
    grid = season::free_zeros(cfg.model, num.spacing, num.generations);
  }
  std::vector<std::string> advisories;
  Field seed = hybrid::seed_ball(cfg.model, grid, 0.0, &advisories);
  apply_jitter(seed, num.jitter);
  hybrid::RunOptions opt;
  opt.season = num.season;
  hybrid::Trajectory traj = hybrid::run(cfg.model, seed, num.generations, opt);
  traj.advisories.insert(traj.advisories.end(), advisories.begin(), advisories.end());
  return traj;
}

int run_task(const RunConfig& cfg, int jobs, std::ostream& log) {
  try {
    auto violations = validate(cfg.model);
    if (has_errors(violations)) {
      throw ModelError(ErrorCode::Config, "invalid model: " + describe(violations));
    }
    for (const auto& v : violations) {
      log << "warning: " << v.assumption << ": " << v.detail << "\n";
    }
    switch (cfg.task.type) {
      case TaskType::Speed: cmd_speed(cfg, log); break;
      case TaskType::CriticalDomain: cmd_critical_domain(cfg, log); break;
      case TaskType::Ray: cmd_ray(cfg, log); break;
      case TaskType::Simulate: cmd_simulate(cfg, log); break;
      case TaskType::Oracle: cmd_oracle(cfg, log); break;
      case TaskType::Scenario: cmd_scenario(cfg, log); break;
      case TaskType::Sweep: cmd_sweep(cfg, jobs, log); break;
    }
    return 0;
  } catch (const ModelError& e) {
    log << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace impulse::cli
