#include "sdwave/energetics.hpp"

#include <cmath>
#include <string>

#include "sdwave/error.hpp"

namespace sdwave {

namespace {

double sum_weighted(const Field& f) {
  const auto& g = *f.grid();
  const std::size_t nt = g.ntheta();
  double s = 0.0;
  for (std::size_t i = 0; i < g.nr(); ++i) {
    double ring = 0.0;
    for (std::size_t j = 0; j < nt; ++j) ring += f[i * nt + j];
    s += g.ring_weight(i) * ring;
  }
  return s;
}

double sq(double x) { return x * x; }

}  // namespace

double weighted_density_integral(const Field& density, std::span<const double> log_factor) {
  const auto& g = *density.grid();
  const std::size_t nt = g.ntheta();
  double s = 0.0;
  for (std::size_t i = 0; i < g.nr(); ++i) {
    double ring = 0.0;
    if (log_factor[i] < 600.0) {
      for (std::size_t j = 0; j < nt; ++j) ring += density[i * nt + j];
      ring *= std::exp(log_factor[i]);
    } else {
      for (std::size_t j = 0; j < nt; ++j) {
        const double d = density[i * nt + j];
        if (d > 0.0) ring += std::exp(log_factor[i] + std::log(d));
      }
    }
    s += g.ring_weight(i) * ring;
  }
  if (!std::isfinite(s)) throw BlowUpError("non-finite weighted integral", std::nan(""));
  return s;
}

std::vector<double> log_weight_factors(const PolarGrid& grid, double t, const WeightParams& w) {
  std::vector<double> out(grid.nr());
  for (std::size_t i = 0; i < grid.nr(); ++i) out[i] = 2.0 * psi(t, grid.radius(i), w);
  return out;
}

StateNorms state_norms(const State& s, const WeightParams& w, const Field* lap_u) {
  const auto logf = log_weight_factors(*s.u.grid(), s.t, w);
  if (lap_u) return state_norms(s, logf, *lap_u);
  return state_norms(s, logf, laplacian(s.u));
}

StateNorms state_norms(const State& s, std::span<const double> logf, const Field& lap_u) {
  const Field gu = gradient_sq(s.u);
  const Field gv = gradient_sq(s.v);

  StateNorms n;
  n.plain.u = sq(l2_norm(s.u));
  n.plain.v = sq(l2_norm(s.v));
  n.plain.grad_u = sum_weighted(gu);
  n.plain.grad_v = sum_weighted(gv);
  n.plain.lap_u = sq(l2_norm(lap_u));
  if (!std::isfinite(n.plain.grad_u) || !std::isfinite(n.plain.grad_v)) {
    throw BlowUpError("non-finite gradient energy", s.t);
  }

  n.weighted.u = l2_norm_sq_radial(s.u, logf);
  n.weighted.v = l2_norm_sq_radial(s.v, logf);
  n.weighted.grad_u = weighted_density_integral(gu, logf);
  n.weighted.grad_v = weighted_density_integral(gv, logf);
  n.weighted.lap_u = l2_norm_sq_radial(lap_u, logf);
  return n;
}

Energies energies(const State& s) {
  const Field gu = gradient_sq(s.u);
  const Field gv = gradient_sq(s.v);
  const double v2 = sq(l2_norm(s.v));
  const double gu2 = sum_weighted(gu);
  const double gv2 = sum_weighted(gv);
  const double lu2 = sq(l2_norm(laplacian(s.u)));
  Energies e;
  e.E_classical = 0.5 * (v2 + gu2);
  e.E_higher = e.E_classical + 0.5 * (gv2 + lu2);
  e.L2_u = sq(l2_norm(s.u));
  return e;
}

WeightedEnergies weighted_energies(const State& s, const WeightParams& w) {
  const auto n = state_norms(s, w);
  return {n.weighted.first(), n.weighted.second()};
}

double w_functional(const StateNorms& n, double t) {
  return n.weighted.first() + n.weighted.second() +
         (1.0 + t) * (n.plain.first() + n.plain.second()) + n.plain.u;
}

double w_functional(const State& s, const WeightParams& w) {
  return w_functional(state_norms(s, w), s.t);
}

DiagnosticsRow make_row(const State& s, const StateNorms& n) {
  DiagnosticsRow row;
  row.t = s.t;
  row.E_classical = 0.5 * n.plain.first();
  row.E_higher = row.E_classical + 0.5 * n.plain.second();
  row.L2_u = n.plain.u;
  row.Wfirst = n.weighted.first();
  row.Wsecond = n.weighted.second();
  row.W = w_functional(n, s.t);
  row.sup_u = s.u.sup_norm();
  row.sup_v = s.v.sup_norm();
  row.outer_ring_amp = s.u.outer_ring_max();
  return row;
}

DiagnosticsRow diagnostics(const State& s, const WeightParams& w) {
  return make_row(s, state_norms(s, w));
}

DataFunctionals data_functionals(const Field& u0, const Field& u1, const WeightParams& w,
                                 double C0) {
  if (!(C0 > 0.0)) throw DomainError("data_functionals: C0 must be positive");
  const auto& g = *u0.grid();
  const Field lap0 = laplacian(u0);
  const double u0_2 = sq(l2_norm(u0));
  const double u1_2 = sq(l2_norm(u1));
  const double gu0 = sum_weighted(gradient_sq(u0));
  const double gu1 = sum_weighted(gradient_sq(u1));
  const double lap0_2 = sq(l2_norm(lap0));

  std::vector<double> log_d2(g.nr());
  for (std::size_t i = 0; i < g.nr(); ++i) log_d2[i] = 2.0 * std::log(d_function(g.radius(i), g));
  Field mix = u1;
  mix -= lap0;
  const double d_mix = l2_norm_sq_radial(mix, log_d2);
  const double d_lap0 = l2_norm_sq_radial(lap0, log_d2);
  const double d_u1 = l2_norm_sq_radial(u1, log_d2);

  const auto logf = log_weight_factors(g, 0.0, w);
  const double iexp = weighted_density_integral(gradient_sq(u1), logf) +
                      l2_norm_sq_radial(lap0, logf) + l2_norm_sq_radial(u1, logf) +
                      weighted_density_integral(gradient_sq(u0), logf);

  DataFunctionals f;
  f.C0 = C0;
  f.I0 = 2.0 * u0_2 + u1_2 + 0.5 * gu0 + 3.0 * C0 * d_mix;
  f.I1 = lap0_2 + gu1 + 1.5 * gu0 + u1_2;
  f.I2 = 0.5 * (f.I0 + f.I1 + u1_2 + gu0 + gu1 + lap0_2);
  f.I_exp = iexp;
  f.J = (u0_2 + gu0) + (u1_2 + gu1) + lap0_2 + d_lap0 + d_u1 + iexp;
  return f;
}

DecayFit fit_decay_exponent(std::span<const double> t, std::span<const double> value, double t_a,
                            double t_b) {
  if (t.size() != value.size()) throw DomainError("fit_decay_exponent: length mismatch");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < t_a || t[k] > t_b) continue;
    if (!(value[k] > 0.0)) {
      throw DomainError("fit_decay_exponent: non-positive value at t = " + std::to_string(t[k]) +
                        " (zero solution or blow-up?)");
    }
    const double x = std::log1p(t[k]);
    const double y = std::log(value[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 10) {
    throw DomainError("fit_decay_exponent: need at least 10 samples in the window, got " +
                      std::to_string(n));
  }
  const double nn = static_cast<double>(n);
  const double denom = nn * sxx - sx * sx;
  if (!(denom > 0.0)) throw DomainError("fit_decay_exponent: degenerate time window");
  const double slope = (nn * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / nn;
  return {-slope, std::exp(intercept), n};
}

}  // namespace sdwave
