#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "impulse/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"impulse-front: spreading speeds, ray speeds, critical domains, and "
               "front simulations for impulsive reaction-advection-diffusion models"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int jobs = 1;

  const std::map<std::string, std::string> commands = {
      {"speed", "analytic, oracle, and measured spreading speeds"},
      {"critical-domain", "critical habitat size (closed form and bisection)"},
      {"ray", "spreading and ray speeds over directions"},
      {"simulate", "multi-generation run with front tracking"},
      {"oracle", "recursion-based speed estimate and MGF crosschecks"},
      {"scenario", "climate / stream / savannah application bundles"},
      {"sweep", "parameter sweep (advection q or habitat length L)"},
  };
  for (const auto& [name, desc] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--jobs", jobs, "parallel workers for sweeps");
    sub->add_option("--out", out_dir, "output directory (overrides config)");
  }

  CLI11_PARSE(app, argc, argv);
  std::string chosen = app.get_subcommands().front()->get_name();

  try {
    impulse::cli::RunConfig cfg = impulse::cli::parse_config_file(config_path);
    if (chosen != impulse::cli::task_name(cfg.task.type)) {
      std::cout << "error: config task '" << impulse::cli::task_name(cfg.task.type)
                << "' does not match subcommand '" << chosen << "'\n";
      return 2;
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    return impulse::cli::run_task(cfg, jobs, std::cout);
  } catch (const impulse::ModelError& e) {
    std::cout << "error: " << e.what() << "\n";
    return impulse::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cout << "error: " << e.what() << "\n";
    return 1;
  }
}
