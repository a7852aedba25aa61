#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "joulewire/config.hpp"
#include "joulewire/runner.hpp"

namespace {

int env_threads_override() {
  const char* env = std::getenv("JOULEWIRE_THREADS");
  if (!env) return -1;
  try {
    return std::max(0, std::stoi(env));
  } catch (const std::exception&) {
    std::cerr << "warning: ignoring non-numeric JOULEWIRE_THREADS\n";
    return -1;
  }
}

int do_validate(const std::string& config_path) {
  joulewire::RunConfig cfg;
  try {
    cfg = joulewire::parse_config_file(config_path);
  } catch (const joulewire::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return joulewire::kExitConfigError;
  }
  const joulewire::ValidationReport rep = joulewire::validate_config(cfg);
  for (const auto& w : rep.warnings) std::cout << "warning: " << w << "\n";
  if (!rep.ok) {
    for (const auto& e : rep.errors) std::cerr << "error: " << e << "\n";
    return joulewire::kExitConfigError;
  }
  std::cout << "config OK: experiment '" << cfg.kind << "'\n";
  std::cout << rep.sweep_points << " sweep point"
            << (rep.sweep_points == 1 ? "" : "s") << ", estimated < "
            << std::max(1.0, std::ceil(2.0 * rep.estimated_seconds)) << " s\n";
  return joulewire::kExitOk;
}

int do_run(const std::string& config_path, const std::string& output_dir,
           int threads) {
  joulewire::RunConfig cfg;
  try {
    cfg = joulewire::parse_config_file(config_path);
  } catch (const joulewire::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return joulewire::kExitConfigError;
  }
  joulewire::RunOptions options;
  options.output_dir_override = output_dir;
  options.threads_override = threads;
  const int env_threads = env_threads_override();
  if (env_threads >= 0) options.threads_override = env_threads;
  return joulewire::run_experiment(cfg, config_path, options, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"joulewire: biased quantum wire with floating thermoelectric "
               "probes; transport and entropy accounting"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  int threads = -1;
  bool seedless = false;

  auto* run = app.add_subcommand("run", "run the configured experiment");
  run->add_option("config", config_path, "configuration file")->required();
  run->add_option("--output-dir", output_dir, "override [output] directory");
  run->add_option("--threads", threads, "worker threads (0 = hardware)");
  run->add_flag("--seedless", seedless,
                "reserved; the tool is fully deterministic");

  auto* validate =
      app.add_subcommand("validate", "parse and check a configuration");
  validate->add_option("config", config_path, "configuration file")->required();

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand(validate)) return do_validate(config_path);
  return do_run(config_path, output_dir, threads);
}
