#include "sdwave/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "sdwave/error.hpp"
#include "sdwave/inequality_lab.hpp"

namespace sdwave {

void write_diagnostics_header(std::ostream& os) { os << kDiagnosticsHeader << '\n'; }

void write_diagnostics_row(std::ostream& os, const DiagnosticsRow& r) {
  fmt::print(os, "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}\n",
             r.t, r.E_classical, r.E_higher, r.L2_u, r.Wfirst, r.Wsecond, r.W, r.sup_u, r.sup_v,
             r.outer_ring_amp);
}

std::vector<DiagnosticsRow> read_diagnostics_csv(std::istream& is) {
  std::string line;
  while (std::getline(is, line) && (line.empty() || line[0] == '#')) {
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kDiagnosticsHeader) {
    throw ConfigError("fit.input: unexpected CSV header '" + line + "'");
  }
  std::vector<DiagnosticsRow> rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    double v[10];
    int n = 0;
    while (std::getline(ss, cell, ',')) {
      if (n >= 10) break;
      try {
        std::size_t used = 0;
        v[n] = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw ConfigError(fmt::format("fit.input: bad number on line {}", lineno));
      }
      ++n;
    }
    if (n != 10) throw ConfigError(fmt::format("fit.input: expected 10 columns on line {}", lineno));
    rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9]});
  }
  return rows;
}

double column_value(const DiagnosticsRow& r, std::string_view c) {
  if (c == "t") return r.t;
  if (c == "E_classical") return r.E_classical;
  if (c == "E_higher") return r.E_higher;
  if (c == "L2_u") return r.L2_u;
  if (c == "Wfirst") return r.Wfirst;
  if (c == "Wsecond") return r.Wsecond;
  if (c == "W") return r.W;
  if (c == "sup_u") return r.sup_u;
  if (c == "sup_v") return r.sup_v;
  if (c == "outer_ring_amp") return r.outer_ring_amp;
  throw ConfigError("unknown diagnostics column '" + std::string(c) + "'");
}

namespace {

void describe_weight(const SimConfig& cfg, std::ostream& err) {
  if (cfg.weight.eps) {
    fmt::print(err, "# weight: rho = {:.17g}, eps = {:.17g}\n", cfg.weight.rho, *cfg.weight.eps);
  } else {
    fmt::print(err,
               "# weight: rho = {:.17g} <= rho0 = {:.17g}; eps window empty, est7/est9/prop1 "
               "checks disabled\n",
               cfg.weight.rho, rho0_constant());
  }
}

int status_code(const RunOutcome& o) {
  switch (o.status) {
    case RunStatus::completed:
      return kExitOk;
    case RunStatus::blew_up:
      return kExitBlowUp;
    case RunStatus::solver_failed:
      return kExitSolverFailure;
  }
  return kExitFailure;
}

double fit_window_start(const SimConfig& cfg) { return cfg.fit.t_a.value_or(0.1 * cfg.time.t_end); }
double fit_window_end(const SimConfig& cfg) { return cfg.fit.t_b.value_or(cfg.time.t_end); }

}  // namespace

int command_simulate(const SimConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto grid = make_grid(cfg);
  const RunSpec spec = make_run_spec(cfg, grid);
  const auto data = data_functionals(spec.initial.u, spec.initial.v, spec.weight, cfg.C0);
  describe_weight(cfg, err);
  fmt::print(err, "# C0 = {:.17g}, I0 = {:.17e}, I1 = {:.17e}, I2 = {:.17e}, J = {:.17e}, I_exp = {:.17e}\n",
             data.C0, data.I0, data.I1, data.I2, data.J, data.I_exp);

  write_diagnostics_header(out);
  const auto outcome = run(spec, [&](const State&, const TrajectorySample& s) {
    write_diagnostics_row(out, s.row);
  });
  out.flush();
  fmt::print(err, "# status = {}, t = {:.17g}\n", to_string(outcome.status), outcome.time);
  if (!outcome.message.empty()) fmt::print(err, "# {}\n", outcome.message);
  return status_code(outcome);
}

namespace {

double mms_final_error(const SimConfig& cfg, std::size_t nr, std::size_t nt, double dt,
                       Field* final_u = nullptr, const GridPtr& reuse = nullptr) {
  const auto grid =
      reuse ? reuse
            : PolarGrid::build_annulus(cfg.domain.r_inner, cfg.domain.r_outer, nr, nt, cfg.domain.B);
  ManufacturedSolution ms(grid, cfg.nonlinearity, cfg.mms.k, cfg.mms.rate);
  RunSpec spec;
  spec.grid = grid;
  spec.scheme = cfg.time.scheme;
  spec.scheme.dt = dt;
  spec.np = cfg.nonlinearity;
  spec.weight = cfg.weight_params();
  spec.initial = ms.reference(0.0);
  spec.t_end = cfg.time.t_end;
  spec.stride = std::numeric_limits<int>::max();
  spec.source = ms.source_fn();
  const auto outcome = run(spec);
  if (outcome.status == RunStatus::solver_failed) {
    throw SolverDivergenceError(outcome.message, outcome.time);
  }
  if (outcome.status == RunStatus::blew_up) throw BlowUpError(outcome.message, outcome.time);
  Field diff = outcome.last_state.u;
  diff -= ms.reference(cfg.time.t_end).u;
  if (final_u) *final_u = outcome.last_state.u;
  return l2_norm(diff);
}

// dt <= target that divides the horizon evenly.
double fitted_dt(double t_end, double target) {
  const double n = std::max(1.0, std::ceil(t_end / target - 1e-9));
  return t_end / n;
}

}  // namespace

std::vector<MmsRow> mms_study(const SimConfig& cfg) {
  std::vector<MmsRow> rows;
  const auto base_nr = static_cast<std::size_t>(cfg.domain.nr);
  const auto base_nt = static_cast<std::size_t>(cfg.domain.ntheta);
  const double L = cfg.domain.r_outer - cfg.domain.r_inner;

  if (cfg.mms.study == MmsStudy::time) {
    const auto grid =
        PolarGrid::build_annulus(cfg.domain.r_inner, cfg.domain.r_outer, base_nr, base_nt, cfg.domain.B);
    const double dt0 = fitted_dt(cfg.time.t_end, cfg.time.scheme.dt);
    std::vector<Field> finals;
    std::vector<double> dts;
    for (int l = 0; l <= cfg.mms.levels; ++l) {
      const double dt = dt0 / std::pow(2.0, l);
      Field u;
      mms_final_error(cfg, base_nr, base_nt, dt, &u, grid);
      finals.push_back(std::move(u));
      dts.push_back(dt);
    }
    for (int l = 0; l < cfg.mms.levels; ++l) {
      Field d = finals[l];
      d -= finals[l + 1];
      MmsRow r{l, cfg.domain.nr, cfg.domain.ntheta, grid->dr(), dts[l], l2_norm(d),
               std::numeric_limits<double>::quiet_NaN()};
      if (l > 0) r.order = std::log(rows.back().error / r.error) / std::log(2.0);
      rows.push_back(r);
    }
    return rows;
  }

  const std::size_t finest_nr = base_nr << (cfg.mms.levels - 1);
  const double finest_h = L / static_cast<double>(finest_nr + 1);
  for (int l = 0; l < cfg.mms.levels; ++l) {
    const std::size_t nr = base_nr << l;
    const std::size_t nt = base_nt << l;
    const double h = L / static_cast<double>(nr + 1);
    const double dt = cfg.mms.study == MmsStudy::space
                          ? fitted_dt(cfg.time.t_end, std::min(cfg.mms.fine_dt, finest_h))
                          : fitted_dt(cfg.time.t_end, cfg.mms.dt_factor * h);
    MmsRow r{l, static_cast<int>(nr), static_cast<int>(nt), h, dt,
             mms_final_error(cfg, nr, nt, dt), std::numeric_limits<double>::quiet_NaN()};
    if (l > 0) r.order = std::log(rows.back().error / r.error) / std::log(rows.back().h / h);
    rows.push_back(r);
  }
  return rows;
}

int command_mms(const SimConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto rows = mms_study(cfg);
  fmt::print(out, "level,nr,ntheta,h,dt,error,order\n");
  for (const auto& r : rows) {
    fmt::print(out, "{},{},{},{:.17e},{:.17e},{:.17e},{:.17e}\n", r.level, r.nr, r.ntheta, r.h, r.dt,
               r.error, r.order);
  }
  if (rows.size() >= 2) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < rows.size(); ++i) worst = std::min(worst, rows[i].order);
    fmt::print(err, "# minimum observed order = {:.6f}\n", worst);
  }
  return kExitOk;
}

int command_check_weight(const SimConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto w = cfg.weight_params();
  const auto& cw = cfg.check_weight;
  if (!cfg.weight.eps) {
    fmt::print(out, "# rho = {:.17g} <= rho0: eps window empty, est7 check disabled\n", w.rho());
  } else {
    fmt::print(out, "# rho = {:.17g}, eps = {:.17g}\n", w.rho(), *w.eps());
  }
  fmt::print(out,
             "t,r,est15_lhs,est7_lhs,est13_lhs,ratio_lhs,est15_ok,est7_ok,est13_ok,ratio_ok\n");
  std::size_t failures = 0;
  std::size_t total = 0;
  for (int i = 0; i < cw.t_points; ++i) {
    const double t = cw.t_max * i / (cw.t_points - 1);
    for (int j = 0; j < cw.r_points; ++j) {
      const double r = cw.r_max * j / (cw.r_points - 1);
      const auto rep = check_pointwise(t, r, w);
      const bool ok = rep.est15_ok && rep.est13_ok && rep.ratio_bound_ok &&
                      (rep.est7_gate_failed || rep.est7_ok);
      failures += ok ? 0 : 1;
      ++total;
      fmt::print(out, "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{},{},{},{}\n", t, r,
                 rep.est15_lhs, rep.est7_gate_failed ? std::nan("") : rep.est7_lhs, rep.est13_lhs,
                 rep.ratio_lhs, int(rep.est15_ok), rep.est7_gate_failed ? -1 : int(rep.est7_ok),
                 int(rep.est13_ok), int(rep.ratio_bound_ok));
    }
  }
  fmt::print(err, "# {} of {} lattice points violate a check\n", failures, total);
  return kExitOk;
}

int command_check_gn(const SimConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto w = cfg.weight_params();
  std::vector<GridPtr> grids;
  for (int l = 0; l <= cfg.gn.refinements; ++l) {
    grids.push_back(PolarGrid::build_annulus(
        cfg.domain.r_inner, cfg.domain.r_outer, static_cast<std::size_t>(cfg.domain.nr) << l,
        static_cast<std::size_t>(cfg.domain.ntheta) << l, cfg.domain.B));
  }
  fmt::print(out, "m,sample,level,nr,ntheta,gn_ratio,weighted_gn_ratio\n");
  for (double m : cfg.gn.m) {
    std::vector<double> max_ratio(grids.size(), 0.0);
    for (int s = 0; s < cfg.gn.samples; ++s) {
      std::mt19937_64 rng(cfg.gn.seed + static_cast<std::uint64_t>(s));
      const auto modes = random_modes(rng, cfg.domain.r_inner, cfg.domain.r_outer);
      for (std::size_t l = 0; l < grids.size(); ++l) {
        const Field v = sample_modes(grids[l], modes);
        const double r = gn_ratio(v, m);
        const double rw = weighted_gn_ratio(v, cfg.gn.t, m, cfg.gn.sigma, w);
        max_ratio[l] = std::max(max_ratio[l], r);
        fmt::print(out, "{:.17g},{},{},{},{},{:.17e},{:.17e}\n", m, s, l, grids[l]->nr(),
                   grids[l]->ntheta(), r, rw);
      }
    }
    for (std::size_t l = 0; l < grids.size(); ++l) {
      fmt::print(err, "# m = {:g}, level {}: max ratio {:.6e}\n", m, l, max_ratio[l]);
    }
  }
  return kExitOk;
}

int command_fit_decay(const SimConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<DiagnosticsRow> rows;
  if (!cfg.fit.input.empty()) {
    std::ifstream in(cfg.fit.input);
    if (!in) throw ConfigError("fit.input: cannot open '" + cfg.fit.input + "'");
    rows = read_diagnostics_csv(in);
  } else {
    const auto grid = make_grid(cfg);
    const auto outcome = run(make_run_spec(cfg, grid), [&](const State&, const TrajectorySample& s) {
      rows.push_back(s.row);
    });
    if (outcome.status != RunStatus::completed) {
      fmt::print(err, "# run ended early: {} at t = {:.6g}\n", to_string(outcome.status),
                 outcome.time);
    }
  }
  const double ta = fit_window_start(cfg);
  const double tb = fit_window_end(cfg);
  std::vector<double> t;
  for (const auto& r : rows) t.push_back(r.t);
  fmt::print(out, "column,alpha,c,samples,t_a,t_b\n");
  for (const auto& col : cfg.fit.columns) {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(column_value(r, col));
    const auto f = fit_decay_exponent(t, v, ta, tb);
    fmt::print(out, "{},{:.17e},{:.17e},{},{:.17e},{:.17e}\n", col, f.alpha, f.c, f.samples, ta, tb);
  }
  return kExitOk;
}

std::vector<SweepRow> sweep(const SimConfig& cfg, int jobs) {
  auto sorted_or = [](std::vector<double> xs, double fallback) {
    if (xs.empty()) return std::vector<double>{fallback};
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
  };
  const auto ps = sorted_or(cfg.sweep.p, cfg.nonlinearity.p);
  const auto qs = sorted_or(cfg.sweep.q, cfg.nonlinearity.q);
  const auto rhos = sorted_or(cfg.sweep.rho, cfg.weight.rho);
  const auto amps = sorted_or(cfg.sweep.u0_amplitude, cfg.init.u0_amplitude);

  std::vector<SweepRow> rows;
  for (double p : ps)
    for (double q : qs)
      for (double rho : rhos)
        for (double a : amps) rows.push_back({p, q, rho, a});

  const auto grid = make_grid(cfg);
  const double ta = fit_window_start(cfg);
  const double tb = fit_window_end(cfg);

  auto work = [&](SweepRow& row) {
    SimConfig c = cfg;
    c.nonlinearity.p = row.p;
    c.nonlinearity.q = row.q;
    if (row.rho != cfg.weight.rho) {
      c.weight.rho = row.rho;
      const auto win = epsilon_window(row.rho);
      c.weight.eps = win ? std::optional<double>(win->midpoint()) : std::nullopt;
    }
    c.init.u0_amplitude = row.u0_amplitude;
    std::vector<double> t, eh;
    const auto outcome = run(make_run_spec(c, grid), [&](const State&, const TrajectorySample& s) {
      t.push_back(s.row.t);
      eh.push_back(s.row.E_higher);
    });
    row.status = outcome.status;
    row.max_W = outcome.last_sample.M;
    row.blowup_time = outcome.status == RunStatus::blew_up ? outcome.time : -1.0;
    row.alpha = std::numeric_limits<double>::quiet_NaN();
    if (outcome.status == RunStatus::completed) {
      try {
        row.alpha = fit_decay_exponent(t, eh, ta, tb).alpha;
      } catch (const DomainError&) {
      }
    }
  };

  const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(rows.size())));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      try {
        work(rows[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int k = 1; k < n_threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

int command_sweep(const SimConfig& cfg, std::ostream& out, std::ostream& err, int jobs) {
  describe_weight(cfg, err);
  const auto rows = sweep(cfg, jobs);
  fmt::print(out, "p,q,rho,u0_amplitude,status,max_W,alpha,blowup_time\n");
  for (const auto& r : rows) {
    fmt::print(out, "{:.17g},{:.17g},{:.17g},{:.17g},{},{:.17e},{:.17e},{:.17e}\n", r.p, r.q, r.rho,
               r.u0_amplitude, to_string(r.status), r.max_W, r.alpha, r.blowup_time);
  }
  return kExitOk;
}

int dispatch(const SimConfig& cfg, std::ostream& out, std::ostream& err, int jobs) {
  try {
    switch (cfg.mode) {
      case Mode::simulate:
        return command_simulate(cfg, out, err);
      case Mode::mms:
        return command_mms(cfg, out, err);
      case Mode::check_weight:
        return command_check_weight(cfg, out, err);
      case Mode::check_gn:
        return command_check_gn(cfg, out, err);
      case Mode::fit_decay:
        return command_fit_decay(cfg, out, err);
      case Mode::sweep:
        return command_sweep(cfg, out, err, jobs);
    }
  } catch (const ConfigError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitInvalidConfig;
  } catch (const SolverDivergenceError& e) {
    fmt::print(err, "error: {} (t = {:.6g})\n", e.what(), e.time());
    return kExitSolverFailure;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace sdwave
