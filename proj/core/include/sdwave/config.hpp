#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sdwave/simulation.hpp"

namespace sdwave {

enum class Mode { simulate, mms, check_weight, check_gn, fit_decay, sweep };

Mode parse_mode(std::string_view name);
std::string_view to_string(Mode m);

struct DomainConfig {
  double r_inner = 1.0;
  double r_outer = 8.0;
  int nr = 96;
  int ntheta = 96;
  std::optional<double> B;
  bool operator==(const DomainConfig&) const = default;
};

struct TimeConfig {
  TimeScheme scheme;
  double t_end = 1.0;
  int stride = 1;
  bool operator==(const TimeConfig&) const = default;
};

struct WeightConfig {
  double rho = 2.0;
  std::optional<double> eps;  // filled with the window midpoint when omitted and rho > rho0
  bool operator==(const WeightConfig&) const = default;
};

struct InitConfig {
  double u0_amplitude = 0.0;
  double u0_r1 = 2.0;
  double u0_r2 = 4.0;
  double u1_amplitude = 0.0;
  double u1_r1 = 2.0;
  double u1_r2 = 4.0;
  bool operator==(const InitConfig&) const = default;
};

struct OutputConfig {
  std::string path = "-";  // "-" is stdout
  std::string format = "csv";
  bool operator==(const OutputConfig&) const = default;
};

enum class MmsStudy { combined, space, time };

struct MmsConfig {
  MmsStudy study = MmsStudy::combined;
  int levels = 4;           // number of grids, each refined by 2
  int k = 2;
  double rate = 0.5;
  double dt_factor = 1.0;   // combined study: dt = dt_factor * dr
  double fine_dt = 1e-3;    // space study, capped by the finest dr
  bool operator==(const MmsConfig&) const = default;
};

struct GnConfig {
  std::vector<double> m{4.0, 6.0, 10.0};
  int samples = 100;
  int refinements = 2;      // extra grids, each refined by 2
  std::uint64_t seed = 20240601;
  double sigma = 0.5;
  double t = 0.0;           // time for the weighted ratio
  bool operator==(const GnConfig&) const = default;
};

struct CheckWeightConfig {
  double t_max = 100.0;
  double r_max = 50.0;
  int t_points = 101;
  int r_points = 101;
  bool operator==(const CheckWeightConfig&) const = default;
};

struct FitConfig {
  std::vector<std::string> columns{"E_higher"};
  std::optional<double> t_a;  // default 10% of the horizon
  std::optional<double> t_b;  // default t_end
  std::string input;          // CSV to read; empty runs the configured simulation
  bool operator==(const FitConfig&) const = default;
};

struct SweepConfig {
  std::vector<double> p;
  std::vector<double> q;
  std::vector<double> rho;
  std::vector<double> u0_amplitude;
  bool operator==(const SweepConfig&) const = default;
};

struct SimConfig {
  DomainConfig domain;
  TimeConfig time;
  WeightConfig weight;
  NonlinearityParams nonlinearity;
  InitConfig init;
  double C0 = 1.0;
  OutputConfig output;
  Mode mode = Mode::simulate;
  MmsConfig mms;
  GnConfig gn;
  CheckWeightConfig check_weight;
  FitConfig fit;
  SweepConfig sweep;

  bool operator==(const SimConfig&) const = default;

  /// True when eps is set, which gates the eps-dependent checks.
  bool eps_checks_enabled() const { return weight.eps.has_value(); }
  WeightParams weight_params() const;
};

/// INI text: [section] headers, key = value lines, '#' or ';' comment lines.
/// Required: domain.{r_inner, r_outer, nr, ntheta}, time.{dt, t_end}, weight.rho.
/// Throws ConfigError naming section.key for unknown, missing or out-of-range keys.
SimConfig parse_config(const std::string& text);
SimConfig load_config(const std::string& path);

/// Text that parses back to an equal SimConfig.
std::string emit_config(const SimConfig& cfg);

/// Validates every bound; parse_config calls this after applying defaults.
void validate(const SimConfig& cfg);

GridPtr make_grid(const SimConfig& cfg);

/// (u0, u1) from the init section.
State initial_state(const SimConfig& cfg, const GridPtr& grid);

RunSpec make_run_spec(const SimConfig& cfg, const GridPtr& grid);

}  // namespace sdwave
