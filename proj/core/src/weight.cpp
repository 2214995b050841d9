#include "sdwave/weight.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sdwave/error.hpp"

namespace sdwave {

double rho0_constant() { return (-3.0 + std::sqrt(73.0)) / 4.0; }

double epsilon_window_lower(double rho) {
  return (4.0 * rho + 14.0) / ((2.0 + rho) * (2.0 * rho + 3.0));
}

std::optional<EpsWindow> epsilon_window(double rho) {
  if (!(rho > 0.0)) {
    throw DomainError("epsilon_window: rho must be positive, got " + std::to_string(rho));
  }
  // lo < 1 is algebraically 2 rho^2 + 3 rho - 8 > 0; compare against rho0
  // directly so the boundary case is decided without rounding noise.
  if (!(rho > rho0_constant())) return std::nullopt;
  const double lo = epsilon_window_lower(rho);
  if (!(lo < 1.0)) return std::nullopt;
  return EpsWindow{lo};
}

WeightParams::WeightParams(double rho, std::optional<double> eps, bool enforce_window)
    : rho_(rho), eps_(eps) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw DomainError("weight: rho must be positive and finite");
  }
  if (eps && !(*eps > 0.0 && *eps < 1.0)) {
    throw DomainError("weight: eps must lie in (0, 1)");
  }
  if (enforce_window && eps) {
    const auto window = epsilon_window(rho);
    if (!window) {
      throw DomainError("weight: eps given but the eps window is empty for rho <= rho0");
    }
    if (!window->contains(*eps)) {
      throw DomainError("weight: eps outside [" + std::to_string(window->lo) + ", 1)");
    }
  }
}

bool WeightParams::theorem_grade() const { return rho_ > rho0_constant(); }

bool WeightParams::eps_admissible() const {
  if (!eps_) return false;
  const auto window = epsilon_window(rho_);
  return window && window->contains(*eps_);
}

double psi(double t, double r, const WeightParams& w) {
  const double rho = w.rho();
  const double s = 1.0 + t;
  return 1.0 / (rho * std::pow(s, rho)) + r * r / (2.0 * std::pow(s, 2.0 + rho));
}

PsiDerivatives psi_derivatives(double t, double r, const WeightParams& w) {
  const double rho = w.rho();
  const double s = 1.0 + t;
  const double s2r = std::pow(s, 2.0 + rho);
  PsiDerivatives d{};
  d.psi_t = -1.0 / std::pow(s, 1.0 + rho) - (2.0 + rho) * r * r / (2.0 * s2r * s);
  d.grad_psi_mag = r / s2r;
  d.laplacian_psi = 2.0 / s2r;
  return d;
}

namespace {

struct Check {
  double lhs;
  double scale;
  bool ok() const { return lhs <= kPointwiseTolerance * scale; }
  double margin() const { return -lhs / scale; }
};

}  // namespace

PointwiseReport check_pointwise(double t, double r, const WeightParams& w) {
  const double rho = w.rho();
  const auto d = psi_derivatives(t, r, w);
  const double g2 = d.grad_psi_mag * d.grad_psi_mag;
  const double pt = d.psi_t;
  const double pt2 = pt * pt;

  PointwiseReport rep;

  const Check est15{g2 - pt * g2 - pt2, 1.0 + g2 + std::abs(pt) * g2 + pt2};
  const double ratio13 = g2 / (-pt);
  const Check est13{ratio13 - 2.0 / (2.0 + rho), 1.0 + ratio13 + 2.0 / (2.0 + rho)};
  const double ratio_iv = (-pt) * (1.0 + t) / psi(t, r, w);
  const Check ratio{ratio_iv - c_rho(w), 1.0 + ratio_iv + c_rho(w)};

  rep.est15_lhs = est15.lhs;
  rep.est15_ok = est15.ok();
  rep.est13_lhs = est13.lhs;
  rep.est13_ok = est13.ok();
  rep.ratio_lhs = ratio.lhs;
  rep.ratio_bound_ok = ratio.ok();
  rep.worst_margin = std::min({est15.margin(), est13.margin(), ratio.margin()});

  if (w.theorem_grade() && w.eps_admissible()) {
    const double e2 = *w.eps() * (2.0 + rho);
    const double k = (e2 + 6.0) / (e2 - 2.0);
    const Check est7{k * g2 - pt2, 1.0 + k * g2 + pt2};
    rep.est7_lhs = est7.lhs;
    rep.est7_ok = est7.ok();
    rep.worst_margin = std::min(rep.worst_margin, est7.margin());
  } else {
    rep.est7_gate_failed = true;
  }
  return rep;
}

WeightConstants weight_constants(const WeightParams& w) {
  if (!w.eps_admissible()) {
    throw DomainError("weight_constants: eps must be present and inside the eps window");
  }
  const double rho = w.rho();
  const double eps = *w.eps();
  const double e = eps * (2.0 + rho) - 2.0;
  WeightConstants c{};
  c.c_eps_rho = (2.0 / (2.0 + rho)) * (1.0 + e / 4.0 + 4.0 / e);
  c.c_tilde = c.c_eps_rho + 1.0 / (2.0 * (1.0 - eps));
  return c;
}

}  // namespace sdwave
