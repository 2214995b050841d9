#include "sdwave/inequality_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "sdwave/error.hpp"

namespace sdwave {

double theta_exponent(double m) {
  if (!(m >= 2.0)) throw DomainError("theta_exponent: m must be at least 2");
  if (std::isinf(m)) return 1.0;
  return 1.0 - 2.0 / m;
}

ExponentThresholds exponent_thresholds(double rho) {
  return {4.0 + rho, 5.0 + rho, 6.0 + 2.0 * rho, 6.0 + 2.0 * rho0_constant()};
}

ExponentReport exponent_report(double p, double q, double rho, double eta, double eps1,
                               double delta) {
  if (!(p > 1.0) || !(q > 1.0)) throw DomainError("exponent_report: p and q must exceed 1");
  if (!(rho > 0.0)) throw DomainError("exponent_report: rho must be positive");
  if (!(eta > 0.0) || !(eps1 > 0.0) || !(delta > 0.0)) {
    throw DomainError("exponent_report: eta, eps1 and delta must be positive");
  }
  ExponentReport r;
  r.p = p;
  r.q = q;
  r.rho = rho;
  r.eta = eta;
  r.eps1 = eps1;
  r.delta = delta;
  const double tp = theta_exponent(2.0 * p);
  const double tq = theta_exponent(2.0 * q);
  r.beta1 = (2.0 + rho) * (1.0 - tp) + (1.0 + eta) / p - (1.0 - 1.0 / p);
  r.beta2 = (2.0 + rho) * (1.0 - tq) + (1.0 + eta) / q - (1.0 - 1.0 / q);
  r.beta3 = (2.0 + rho) * (1.0 - tp) / 2.0 + (1.0 + eta) / p - 0.5 * (1.0 - 1.0 / p);
  r.beta4 = (2.0 + rho) * (1.0 - tq) / 2.0 + (1.0 + eta) / q - 0.5 * (1.0 - 1.0 / q);
  r.beta5 = (2.0 + rho) * (1.0 + eps1) / (2.0 * q) + (1.0 + eta) / q;
  r.beta6 = r.beta5 + (2.0 + rho) * (1.0 - tq) / 2.0 - (1.0 - delta) / 2.0;

  const auto th = exponent_thresholds(rho);
  r.gates.lemma1_ok = p > th.lemma1 && q > th.lemma1;
  r.gates.lemma2_ok = p > th.lemma2 && q > th.lemma2;
  r.gates.dtwo_ok = q > th.dtwo;
  r.gates.theorem_ok = p > th.theorem && q > th.theorem;
  return r;
}

double admissible_eta(double p, double q, double rho) {
  const double th = 4.0 + rho;
  if (!(p > th && q > th)) {
    throw DomainError(fmt::format("admissible_eta: requires p, q > 4 + rho = {}", th));
  }
  return 0.5 * std::min(p - th, q - th);
}

namespace {

// log of sum_k w_k exp(log_terms_k), skipping -inf terms.
double log_sum_exp(const std::vector<double>& logs) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double x : logs) mx = std::max(mx, x);
  if (std::isinf(mx)) return mx;
  double s = 0.0;
  for (double x : logs) s += std::exp(x - mx);
  return mx + std::log(s);
}

// log |f|_{L^m}^m with an extra per-ring log factor (may be empty).
double log_lm_power(const Field& f, double m, std::span<const double> log_ring) {
  const auto& g = *f.grid();
  const std::size_t nt = g.ntheta();
  std::vector<double> logs;
  logs.reserve(f.size());
  for (std::size_t i = 0; i < g.nr(); ++i) {
    const double lw = std::log(g.ring_weight(i)) + (log_ring.empty() ? 0.0 : log_ring[i]);
    for (std::size_t j = 0; j < nt; ++j) {
      const double a = std::abs(f[i * nt + j]);
      if (!std::isfinite(a)) throw BlowUpError("non-finite field in L^m norm", std::nan(""));
      if (a > 0.0) logs.push_back(lw + m * std::log(a));
    }
  }
  return log_sum_exp(logs);
}

double grad_l2_sq(const Field& v, std::span<const double> log_ring) {
  if (log_ring.empty()) {
    const std::vector<double> zero(v.grid()->nr(), 0.0);
    return weighted_density_integral(gradient_sq(v), zero);
  }
  return weighted_density_integral(gradient_sq(v), log_ring);
}

}  // namespace

double lm_norm(const Field& f, double m) {
  if (!(m >= 1.0) || !std::isfinite(m)) throw DomainError("lm_norm: m must lie in [1, inf)");
  const double l = log_lm_power(f, m, {});
  return std::isinf(l) ? 0.0 : std::exp(l / m);
}

double gn_ratio(const Field& v, double m) {
  if (!(m >= 2.0) || !std::isfinite(m)) throw DomainError("gn_ratio: m must lie in [2, inf)");
  const double th = theta_exponent(m);
  const double l2 = l2_norm(v);
  const double g2 = std::sqrt(grad_l2_sq(v, {}));
  if (!(l2 > 0.0) || !(g2 > 0.0)) throw DomainError("gn_ratio: undefined for a vanishing field");
  const double num = lm_norm(v, m);
  // log form keeps large m away from overflow
  return std::exp(std::log(num) - (1.0 - th) * std::log(l2) - th * std::log(g2));
}

double weighted_gn_ratio(const Field& v, double t, double m, double sigma, const WeightParams& w) {
  if (!(m >= 2.0) || !std::isfinite(m)) {
    throw DomainError("weighted_gn_ratio: m must lie in [2, inf)");
  }
  if (!(sigma > 0.0 && sigma <= 1.0)) throw DomainError("weighted_gn_ratio: sigma must lie in (0, 1]");
  const auto& g = *v.grid();
  const double th = theta_exponent(m);
  const auto log2psi = log_weight_factors(g, t, w);  // 2 psi per ring
  std::vector<double> log_num(g.nr());
  for (std::size_t i = 0; i < g.nr(); ++i) log_num[i] = m * sigma * 0.5 * log2psi[i];
  const double lnum = log_lm_power(v, m, log_num) / m;
  const double g_plain = grad_l2_sq(v, {});
  const double g_weighted = grad_l2_sq(v, log2psi);
  if (!(g_plain > 0.0) || std::isinf(lnum)) {
    throw DomainError("weighted_gn_ratio: undefined for a vanishing field");
  }
  const double lden = (2.0 + w.rho()) * (1.0 - th) / 2.0 * std::log1p(t) +
                      (1.0 - sigma) * 0.5 * std::log(g_plain) + sigma * 0.5 * std::log(g_weighted);
  return std::exp(lnum - lden);
}

std::vector<SmoothMode> random_modes(std::mt19937_64& rng, double r_inner, double r_outer,
                                     std::size_t count) {
  const double L = r_outer - r_inner;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> kdist(0, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<SmoothMode> modes(count);
  for (auto& md : modes) {
    md.coef = normal(rng);
    md.k = kdist(rng);
    md.phase = 2.0 * std::numbers::pi * unit(rng);
    const double half = L * (0.15 + 0.2 * unit(rng));
    const double lo = r_inner + 0.05 * L + half;
    const double hi = r_outer - 0.05 * L - half;
    const double c = lo + (hi - lo) * unit(rng);
    md.r1 = c - half;
    md.r2 = c + half;
  }
  return modes;
}

Field sample_modes(const GridPtr& grid, const std::vector<SmoothMode>& modes) {
  return Field::sample(grid, [&](double r, double th) {
    double s = 0.0;
    for (const auto& md : modes) {
      s += bump_profile(r, md.coef, md.r1, md.r2) * std::cos(md.k * th + md.phase);
    }
    return s;
  });
}

Est9Result est9_residual(const State& s, const NonlinearityParams& np, const WeightParams& w) {
  const auto C = weight_constants(w);  // validates the window
  const double eps = *w.eps();
  const auto& g = *s.u.grid();
  const Field lap_u = laplacian(s.u);
  const Field lap_v = laplacian(s.v);
  const Field F = nonlinearity(s.u, s.v, np);
  if (!lap_u.all_finite() || !lap_v.all_finite() || !F.all_finite()) {
    throw BlowUpError("est9_residual: non-finite state", s.t);
  }
  const std::size_t nt = g.ntheta();
  Est9Result res;
  res.min_slack = std::numeric_limits<double>::infinity();
  res.min_relative_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.nr(); ++i) {
    const auto d = psi_derivatives(s.t, g.radius(i), w);
    const double mpt = -d.psi_t;
    const double X = d.grad_psi_mag * d.grad_psi_mag / mpt;
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t k = i * nt + j;
      const double utt = lap_u[k] + lap_v[k] + F[k];
      const double lhs = X * utt * utt;
      const double rhs =
          mpt * lap_u[k] * lap_u[k] + eps * lap_v[k] * lap_v[k] + C.c_eps_rho * F[k] * F[k];
      const double slack = rhs - lhs;
      const double scale = lhs + rhs;
      const double rel = scale > 0.0 ? slack / scale : 0.0;
      res.min_slack = std::min(res.min_slack, slack);
      if (rel < res.min_relative_slack) {
        res.min_relative_slack = rel;
        res.worst_node = k;
      }
    }
  }
  return res;
}

PropMonitor prop_budget_monitor(const std::vector<TrajectorySample>& samples,
                                const WeightParams& w, Proposition which) {
  PropMonitor m;
  if (samples.empty()) return m;
  const auto& first = samples.front();
  double c_tilde = 0.0;
  double eps = 0.0;
  if (which == Proposition::prop1) {
    c_tilde = weight_constants(w).c_tilde;
    eps = *w.eps();
  }
  m.max_violation = -std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    double lhs = 0.0;
    double rhs = 0.0;
    if (which == Proposition::prop1) {
      lhs = s.row.Wsecond + (1.0 - eps) * s.integrals.weighted_lap_v;
      rhs = first.row.Wsecond + c_tilde * s.integrals.forcing_sq;
    } else {
      lhs = s.row.Wfirst;
      rhs = first.row.Wfirst + 2.0 * s.integrals.forcing_vel;
    }
    m.t.push_back(s.row.t);
    m.lhs.push_back(lhs);
    m.rhs.push_back(rhs);
    m.max_violation = std::max(m.max_violation, (lhs - rhs) / std::max(rhs, 1e-14));
  }
  return m;
}

std::vector<NonlinearIntegralRow> nonlinear_integral_monitor(
    const std::vector<TrajectorySample>& samples, const NonlinearityParams& np,
    const WeightParams& w) {
  const auto rep = exponent_report(np.p, np.q, w.rho(), 1.0, 1.0, 1.0);
  const auto th = exponent_thresholds(w.rho());
  if (!rep.gates.lemma1_ok) {
    throw DomainError(fmt::format("nonlinear_integral_monitor: requires p, q > 4 + rho = {}",
                                  th.lemma1));
  }
  if (!rep.gates.lemma2_ok) {
    throw DomainError(fmt::format("nonlinear_integral_monitor: requires p, q > 5 + rho = {}",
                                  th.lemma2));
  }
  std::vector<NonlinearIntegralRow> rows;
  rows.reserve(samples.size());
  for (const auto& s : samples) {
    NonlinearIntegralRow r;
    r.t = s.row.t;
    r.A_lhs = s.integrals.forcing_sq;
    r.B_lhs = s.integrals.forcing_vel;
    r.M = s.M;
    r.A_rhs = std::pow(r.M, np.p) + std::pow(r.M, np.q);
    r.B_rhs = std::pow(r.M, 0.5 * (np.p + 1.0)) + std::pow(r.M, 0.5 * (np.q + 1.0));
    r.A_ratio = r.A_rhs > 0.0 ? r.A_lhs / r.A_rhs : 0.0;
    r.B_ratio = r.B_rhs > 0.0 ? r.B_lhs / r.B_rhs : 0.0;
    rows.push_back(r);
  }
  return rows;
}

double convolution_integral(double a, double b, double t) {
  if (!(a > 0.0 && a <= 1.0)) throw DomainError("convolution_decay: a must lie in (0, 1]");
  if (!(b > 1.0)) throw DomainError("convolution_decay: b must exceed 1");
  if (!(t >= 0.0)) throw DomainError("convolution_decay: t must be non-negative");
  if (t == 0.0) return 0.0;
  const auto f = [a, b, t](double s) { return std::pow(1.0 + t - s, -a) * std::pow(1.0 + s, -b); };
  // The mass sits near s = 0 and near s = t, so split geometrically toward the middle.
  std::vector<double> cuts{0.0};
  for (double h = 1.0; h < 0.5 * t; h *= 2.0) cuts.push_back(h);
  const std::size_t left = cuts.size();
  cuts.push_back(0.5 * t);
  for (std::size_t k = left; k-- > 1;) cuts.push_back(t - cuts[k]);
  cuts.push_back(t);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, cuts[k], cuts[k + 1],
                                                                            15, 1e-13);
  }
  return total;
}

std::vector<ConvolutionRow> convolution_decay(double a, double b, double T, std::size_t samples) {
  if (!(T >= 1.0)) throw DomainError("convolution_decay: T must be at least 1");
  if (samples < 2) throw DomainError("convolution_decay: need at least 2 samples");
  std::vector<ConvolutionRow> rows;
  rows.push_back({0.0, convolution_integral(a, b, 0.0), 0.0});
  const double lT = std::log(T);
  for (std::size_t k = 0; k + 1 < samples; ++k) {
    const double frac = samples > 2 ? static_cast<double>(k) / static_cast<double>(samples - 2) : 1.0;
    const double t = std::exp(frac * lT);
    const double I = convolution_integral(a, b, t);
    rows.push_back({t, I, std::pow(1.0 + t, a) * I});
  }
  return rows;
}

void write_report_csv(std::ostream& os, const std::vector<ReportRow>& rows,
                      const std::string& header_comment) {
  if (!header_comment.empty()) fmt::print(os, "# {}\n", header_comment);
  fmt::print(os, "check_id,params,lhs,rhs,slack,pass\n");
  for (const auto& r : rows) {
    fmt::print(os, "{},\"{}\",{:.17e},{:.17e},{:.17e},{}\n", r.check_id, r.params, r.lhs, r.rhs,
               r.slack, r.pass ? 1 : 0);
  }
}

}  // namespace sdwave
