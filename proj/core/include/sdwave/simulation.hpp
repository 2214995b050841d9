#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sdwave/energetics.hpp"
#include "sdwave/solver.hpp"
#include "sdwave/weight.hpp"

namespace sdwave {

/// Everything needed to advance one trajectory.
struct RunSpec {
  GridPtr grid;
  TimeScheme scheme;
  NonlinearityParams np;
  WeightParams weight{2.0};
  State initial;
  double t_end = 1.0;
  int stride = 1;  // observer is called every `stride` steps and at the last one
  SourceFn source;
  double blowup_threshold = kBlowupThreshold;
};

/// Left-endpoint Riemann sums accumulated at every step.
struct RunningIntegrals {
  double classical = 0.0;       // sum dt (|v|^2 + |grad u|^2)
  double higher = 0.0;          // sum dt (|grad v|^2 + |Lap u|^2)
  double dissipation = 0.0;     // sum dt |grad v|^2
  double weighted_lap_v = 0.0;  // sum dt |e^psi Lap v|^2
  double forcing_sq = 0.0;      // sum dt |e^psi F|^2
  double forcing_vel = 0.0;     // sum dt |e^psi F| |e^psi v|
};

struct TrajectorySample {
  std::size_t step = 0;
  DiagnosticsRow row;
  RunningIntegrals integrals;  // up to row.t
  double M = 0.0;              // sup of W over [0, row.t]
};

enum class RunStatus { completed, blew_up, solver_failed };

std::string_view to_string(RunStatus s);

struct RunOutcome {
  RunStatus status = RunStatus::completed;
  /// t_end when completed, otherwise the time carried by the failure.
  double time = 0.0;
  std::string message;
  std::size_t steps = 0;
  State last_state;  // last valid state
  TrajectorySample last_sample;
};

using RunObserver = std::function<void(const State&, const TrajectorySample&)>;

/// Steps from spec.initial to spec.t_end. Failures are reported through the
/// returned status rather than thrown.
RunOutcome run(const RunSpec& spec, const RunObserver& observer = {});

struct Trajectory {
  std::vector<TrajectorySample> samples;  // one per stride, starting at t = 0
  std::vector<State> snapshots;           // evenly spaced in step count
  RunOutcome outcome;
};

/// Runs and keeps every observed sample plus `n_snapshots` full states.
Trajectory record(const RunSpec& spec, std::size_t n_snapshots = 0);

}  // namespace sdwave
