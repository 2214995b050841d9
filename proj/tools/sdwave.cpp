#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sdwave/commands.hpp"
#include "sdwave/config.hpp"
#include "sdwave/error.hpp"

namespace {

int jobs_from_env() {
  const char* env = std::getenv("SDWAVE_JOBS");
  if (!env || !*env) return 1;
  try {
    const int n = std::stoi(env);
    return n > 0 ? n : 1;
  } catch (const std::exception&) {
    std::cerr << "warning: ignoring malformed SDWAVE_JOBS='" << env << "'\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strongly damped wave equation laboratory on a polar annulus"};
  std::string config_path;
  std::optional<std::string> mode;
  std::optional<std::string> out_path;
  std::optional<int> jobs;
  app.add_option("--config", config_path, "INI configuration file")->required();
  app.add_option("--mode", mode, "simulate | mms | check-weight | check-gn | fit-decay | sweep");
  app.add_option("--out", out_path, "output file, '-' for stdout");
  app.add_option("--jobs", jobs, "parallel jobs for sweep (fallback: SDWAVE_JOBS)")
      ->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : sdwave::kExitInvalidConfig;
  }

  sdwave::SimConfig cfg;
  try {
    cfg = sdwave::load_config(config_path);
    if (mode) cfg.mode = sdwave::parse_mode(*mode);
    if (out_path) cfg.output.path = *out_path;
  } catch (const sdwave::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return sdwave::kExitInvalidConfig;
  }

  const int n_jobs = jobs.value_or(jobs_from_env());
  if (cfg.output.path == "-") return sdwave::dispatch(cfg, std::cout, std::cerr, n_jobs);

  std::ofstream out(cfg.output.path);
  if (!out) {
    std::cerr << "error: cannot open output '" << cfg.output.path << "'\n";
    return sdwave::kExitInvalidConfig;
  }
  return sdwave::dispatch(cfg, out, std::cerr, n_jobs);
}
