#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sdwave/config.hpp"

namespace sdwave {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitBlowUp = 2;
inline constexpr int kExitInvalidConfig = 3;
inline constexpr int kExitSolverFailure = 4;

inline constexpr std::string_view kDiagnosticsHeader =
    "t,E_classical,E_higher,L2_u,Wfirst,Wsecond,W,sup_u,sup_v,outer_ring_amp";

void write_diagnostics_header(std::ostream& os);
void write_diagnostics_row(std::ostream& os, const DiagnosticsRow& row);

/// Parses a CSV with the diagnostics header. Throws ConfigError on a schema mismatch.
std::vector<DiagnosticsRow> read_diagnostics_csv(std::istream& is);

/// Column of a row by its CSV name.
double column_value(const DiagnosticsRow& row, std::string_view column);

/// Each command writes its table to `out` and notes to `err`, and returns an exit code.
int command_simulate(const SimConfig& cfg, std::ostream& out, std::ostream& err);
int command_mms(const SimConfig& cfg, std::ostream& out, std::ostream& err);
int command_check_weight(const SimConfig& cfg, std::ostream& out, std::ostream& err);
int command_check_gn(const SimConfig& cfg, std::ostream& out, std::ostream& err);
int command_fit_decay(const SimConfig& cfg, std::ostream& out, std::ostream& err);
int command_sweep(const SimConfig& cfg, std::ostream& out, std::ostream& err, int jobs);

/// Dispatches on cfg.mode and maps exceptions to exit codes.
int dispatch(const SimConfig& cfg, std::ostream& out, std::ostream& err, int jobs = 1);

struct MmsRow {
  int level = 0;
  int nr = 0;
  int ntheta = 0;
  double h = 0.0;
  double dt = 0.0;
  double error = 0.0;
  double order = 0.0;  // NaN on the first level
};

/// Convergence table for the configured study; used by command_mms.
std::vector<MmsRow> mms_study(const SimConfig& cfg);

struct SweepRow {
  double p = 0.0, q = 0.0, rho = 0.0, u0_amplitude = 0.0;
  RunStatus status = RunStatus::completed;
  double max_W = 0.0;
  double alpha = 0.0;         // NaN when the fit is not possible
  double blowup_time = -1.0;  // -1 unless blown up
};

/// One row per parameter combination in sorted order; runs on `jobs` threads.
std::vector<SweepRow> sweep(const SimConfig& cfg, int jobs);

}  // namespace sdwave
