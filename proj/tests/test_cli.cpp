#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef IMPULSE_CLI_BIN
#define IMPULSE_CLI_BIN "impulse-front"
#endif

namespace {

namespace fs = std::filesystem;

fs::path scratch_dir() {
  fs::path dir = fs::temp_directory_path() / "impulse_front_cli_tests";
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_cli(const std::string& args, const fs::path& stdout_path) {
  std::string cmd = std::string(IMPULSE_CLI_BIN) + " " + args + " > " +
                    stdout_path.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WEXITSTATUS(status);
}

const char* kFisherTinyConfig = R"({
  "model": {
    "dim": 1,
    "diffusion": 1.0,
    "advection": 0.0,
    "growth": {"type": "logistic", "r": 1.0},
    "map": {"type": "linear", "alpha": 1.0}
  },
  "numerics": {"substeps": 8, "spacing": 0.1, "generations": 12},
  "task": {"type": "speed", "directions": [1.0, -1.0]},
  "output": {"dir": "."}
})";

}  // namespace

TEST_CASE("speed command produces a CSV with units in the header") {
  fs::path dir = scratch_dir();
  write_file(dir / "fisher.json", kFisherTinyConfig);
  int code = run_cli("speed --config " + (dir / "fisher.json").string() + " --out " +
                         (dir / "run1").string(),
                     dir / "stdout1.txt");
  CHECK(code == 0);
  std::string csv = read_file(dir / "run1" / "speed.csv");
  CHECK(csv.find("analytic_speed[length/gen]") != std::string::npos);
  CHECK(csv.find("measured_speed[length/gen]") != std::string::npos);
  // One header plus two direction rows.
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("identical configs produce byte-identical outputs") {
  fs::path dir = scratch_dir();
  write_file(dir / "fisher.json", kFisherTinyConfig);
  int c1 = run_cli("speed --config " + (dir / "fisher.json").string() + " --out " +
                       (dir / "det_a").string(),
                   dir / "stdout_a.txt");
  int c2 = run_cli("speed --config " + (dir / "fisher.json").string() + " --out " +
                       (dir / "det_b").string(),
                   dir / "stdout_b.txt");
  REQUIRE(c1 == 0);
  REQUIRE(c2 == 0);
  CHECK(read_file(dir / "det_a" / "speed.csv") == read_file(dir / "det_b" / "speed.csv"));
  CHECK(read_file(dir / "stdout_a.txt") == read_file(dir / "stdout_b.txt"));
}

TEST_CASE("extinction regime exits with code 3") {
  fs::path dir = scratch_dir();
  write_file(dir / "extinct.json", R"({
    "model": {
      "dim": 1,
      "growth": {"type": "linear", "rate": 0.2},
      "map": {"type": "linear", "alpha": 0.5}
    },
    "numerics": {"generations": 8},
    "task": {"type": "speed"}
  })");
  int code = run_cli("speed --config " + (dir / "extinct.json").string() + " --out " +
                         (dir / "extinct_out").string(),
                     dir / "stdout_ext.txt");
  CHECK(code == 3);
  CHECK(read_file(dir / "stdout_ext.txt").find("extinction regime") != std::string::npos);
}

TEST_CASE("configuration problems exit with code 2") {
  fs::path dir = scratch_dir();
  write_file(dir / "bad.json", R"({"task": {"type": "speed", "oracel": true}})");
  CHECK(run_cli("speed --config " + (dir / "bad.json").string(), dir / "null1.txt") == 2);

  // Subcommand must match the configured task.
  write_file(dir / "ray.json", R"({"model": {"dim": 2}, "task": {"type": "ray"}})");
  CHECK(run_cli("speed --config " + (dir / "ray.json").string(), dir / "null2.txt") == 2);

  CHECK(run_cli("speed --config " + (dir / "missing.json").string(), dir / "null3.txt") == 2);
}

TEST_CASE("advection sweep shows the speed root and size blow-up together") {
  fs::path dir = scratch_dir();
  write_file(dir / "sweep.json", R"({
    "model": {"dim": 1, "diffusion": 1.0,
              "growth": {"type": "logistic", "r": 1.0},
              "map": {"type": "linear", "alpha": 1.0}},
    "task": {"type": "sweep", "parameter": "q",
             "values": {"from": 0.0, "to": 3.0, "count": 13}},
    "output": {"dir": "."}
  })");
  int code = run_cli("sweep --config " + (dir / "sweep.json").string() + " --out " +
                         (dir / "sweep_out").string() + " --jobs 2",
                     dir / "stdout_sweep.txt");
  REQUIRE(code == 0);
  std::string csv = read_file(dir / "sweep_out" / "sweep.csv");

  // Rows are "q,c_star_upwind,lambda_star"; q runs 0, 0.25, ..., 3.
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  int row = 0;
  while (std::getline(lines, line)) {
    std::istringstream cells(line);
    std::string q_s, c_s, lam_s;
    std::getline(cells, q_s, ',');
    std::getline(cells, c_s, ',');
    std::getline(cells, lam_s, ',');
    double q = std::stod(q_s);
    double c = std::stod(c_s);
    if (q < 2.0) {
      CHECK(c > 0.0);
      CHECK(lam_s != "inf");
    } else {
      CHECK(c <= 1e-12);
      CHECK(lam_s == "inf");
    }
    ++row;
  }
  CHECK(row == 13);
}

TEST_CASE("climate scenario reports the envelope speed bound") {
  fs::path dir = scratch_dir();
  std::ostringstream cfg;
  cfg.precision(17);
  cfg << R"({"task": {"type": "scenario", "name": "climate",
             "params": {"d": 1.0, "lambda": )"
      << (std::exp(2.0) - 1.0)
      << R"(, "gamma": 0.5, "L1": )" << (2.0 * M_PI) << R"(, "L2": )" << (2.0 * M_PI)
      << R"(, "c": 1.0}}})";
  write_file(dir / "climate.json", cfg.str());
  int code = run_cli("scenario --config " + (dir / "climate.json").string() + " --out " +
                         (dir / "climate_out").string(),
                     dir / "stdout_climate.txt");
  REQUIRE(code == 0);
  std::string csv = read_file(dir / "climate_out" / "scenario_climate.csv");
  std::istringstream lines(csv);
  std::string header, row;
  REQUIRE(std::getline(lines, header));
  REQUIRE(std::getline(lines, row));
  std::istringstream cells(row);
  std::string rho_s, cmax_s, window_s;
  std::getline(cells, rho_s, ',');
  std::getline(cells, cmax_s, ',');
  std::getline(cells, window_s, ',');
  CHECK(std::stod(rho_s) == doctest::Approx(1.5).epsilon(1e-7));
  CHECK(std::stod(cmax_s) == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(window_s == "true");
}
