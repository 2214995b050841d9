#include "sdwave/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "sdwave/error.hpp"

namespace sdwave {

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed:
      return "completed";
    case RunStatus::blew_up:
      return "blew_up";
    case RunStatus::solver_failed:
      return "solver_failed";
  }
  return "unknown";
}

namespace {

std::size_t step_count(const RunSpec& spec) {
  const double n = (spec.t_end - spec.initial.t) / spec.scheme.dt;
  if (!(n >= 0.0) || !std::isfinite(n)) throw ConfigError("time.t_end must not precede the start");
  return static_cast<std::size_t>(std::llround(n));
}

}  // namespace

RunOutcome run(const RunSpec& spec, const RunObserver& observer) {
  if (!spec.grid) throw ConfigError("run: grid missing");
  if (spec.stride < 1) throw ConfigError("time.stride must be at least 1");
  const std::size_t nsteps = step_count(spec);
  const double t0 = spec.initial.t;
  const double dt = spec.scheme.dt;
  const bool forced = !spec.np.is_linear();

  Stepper stepper(spec.grid, spec.scheme, spec.np, spec.source, spec.blowup_threshold);

  RunOutcome out;
  State s = spec.initial;
  Field lap_u = laplacian(s.u);
  Field lap_v(spec.grid);
  Field F(spec.grid);
  if (forced) nonlinearity_into(s.u, s.v, spec.np, F.values());

  TrajectorySample sample;
  auto logf = log_weight_factors(*spec.grid, s.t, spec.weight);
  StateNorms norms;
  try {
    if (!s.u.all_finite() || !s.v.all_finite()) throw BlowUpError("non-finite initial data", s.t);
    norms = state_norms(s, logf, lap_u);
  } catch (const BlowUpError& e) {
    out.status = RunStatus::blew_up;
    out.time = s.t;
    out.message = e.what();
    out.last_state = s;
    return out;
  }
  sample.row = make_row(s, norms);
  sample.M = sample.row.W;
  if (observer) observer(s, sample);

  for (std::size_t k = 1; k <= nsteps; ++k) {
    try {
      RunningIntegrals& I = sample.integrals;
      I.classical += dt * norms.plain.first();
      I.higher += dt * norms.plain.second();
      I.dissipation += dt * norms.plain.grad_v;
      laplacian_into(s.v, lap_v.values());
      I.weighted_lap_v += dt * l2_norm_sq_radial(lap_v, logf);
      if (forced) {
        const double fsq = l2_norm_sq_radial(F, logf);
        I.forcing_sq += dt * fsq;
        I.forcing_vel += dt * std::sqrt(fsq * norms.weighted.v);
      }

      State next = stepper.step(s, lap_u, F);
      next.t = t0 + static_cast<double>(k) * dt;
      s = std::move(next);
      laplacian_into(s.u, lap_u.values());
      if (forced) nonlinearity_into(s.u, s.v, spec.np, F.values());
      logf = log_weight_factors(*spec.grid, s.t, spec.weight);
      norms = state_norms(s, logf, lap_u);
    } catch (const BlowUpError& e) {
      out.status = RunStatus::blew_up;
      out.time = std::isnan(e.time()) ? t0 + static_cast<double>(k) * dt : e.time();
      out.message = e.what();
      break;
    } catch (const SolverDivergenceError& e) {
      out.status = RunStatus::solver_failed;
      out.time = std::isnan(e.time()) ? s.t : e.time();
      out.message = e.what();
      break;
    }
    sample.step = k;
    sample.row = make_row(s, norms);
    sample.M = std::max(sample.M, sample.row.W);
    out.steps = k;
    if (observer && (k % static_cast<std::size_t>(spec.stride) == 0 || k == nsteps)) {
      observer(s, sample);
    }
  }
  if (out.status == RunStatus::completed) out.time = s.t;
  out.last_state = std::move(s);
  out.last_sample = sample;
  return out;
}

Trajectory record(const RunSpec& spec, std::size_t n_snapshots) {
  Trajectory tr;
  const std::size_t nsteps = step_count(spec);
  std::vector<std::size_t> wanted;
  for (std::size_t i = 0; i < n_snapshots; ++i) {
    const std::size_t denom = n_snapshots > 1 ? n_snapshots - 1 : 1;
    wanted.push_back(nsteps * i / denom);
  }
  std::size_t next_snap = 0;

  // Snapshots are taken on any step, independently of the observer stride.
  RunSpec inner = spec;
  const int stride = spec.stride;
  inner.stride = 1;
  tr.outcome = run(inner, [&](const State& s, const TrajectorySample& sm) {
    if (sm.step % static_cast<std::size_t>(stride) == 0 || sm.step == nsteps) {
      tr.samples.push_back(sm);
    }
    while (next_snap < wanted.size() && wanted[next_snap] == sm.step) {
      tr.snapshots.push_back(s);
      ++next_snap;
    }
  });
  return tr;
}

}  // namespace sdwave
