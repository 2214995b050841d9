#include "sdwave/solver.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sdwave/error.hpp"

namespace sdwave {

void NonlinearityParams::validate() const {
  if (!(a >= 0.0)) throw ConfigError("nonlinearity.a must be non-negative");
  if (!(b >= 0.0)) throw ConfigError("nonlinearity.b must be non-negative");
  if (!(p > 1.0)) throw ConfigError("nonlinearity.p must exceed 1");
  if (!(q > 1.0)) throw ConfigError("nonlinearity.q must exceed 1");
}

void TimeScheme::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("time.dt must be positive");
  if (!(theta >= 0.5 && theta <= 1.0)) throw ConfigError("time.theta must lie in [0.5, 1]");
  if (!(linear_solve_tol > 0.0 && linear_solve_tol <= 1e-10)) {
    throw ConfigError("time.linear_solve_tol must lie in (0, 1e-10]");
  }
  if (max_linear_iters < 1) throw ConfigError("time.max_linear_iters must be at least 1");
}

void nonlinearity_into(const Field& u, const Field& v, const NonlinearityParams& np,
                       std::span<double> out) {
  const auto uv = u.values();
  const auto vv = v.values();
  const bool use_a = np.a != 0.0;
  const bool use_b = np.b != 0.0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    double f = 0.0;
    if (use_a) f += np.a * std::pow(std::abs(uv[k]), np.p);
    if (use_b) f += np.b * std::pow(std::abs(vv[k]), np.q);
    out[k] = f;
  }
}

Field nonlinearity(const Field& u, const Field& v, const NonlinearityParams& np) {
  Field out(u.grid());
  nonlinearity_into(u, v, np, out.values());
  return out;
}

Stepper::Stepper(GridPtr grid, TimeScheme scheme, NonlinearityParams np, SourceFn source,
                 double blowup_threshold)
    : grid_(grid),
      scheme_(scheme),
      np_(np),
      source_(std::move(source)),
      blowup_threshold_(blowup_threshold),
      solver_(grid, scheme.theta * scheme.dt * (1.0 + scheme.theta * scheme.dt),
              scheme.preconditioner, scheme.linear_solve_tol, scheme.max_linear_iters) {
  scheme_.validate();
  np_.validate();
}

State Stepper::step(const State& s) {
  return step(s, laplacian(s.u), nonlinearity(s.u, s.v, np_));
}

State Stepper::step(const State& s, const Field& lap_u, const Field& forcing) {
  const double dt = scheme_.dt;
  const double th = scheme_.theta;

  Field rhs = s.v;
  rhs.axpy(dt, lap_u);
  if (th < 1.0) rhs.axpy((1.0 - th) * (dt + th * dt * dt), laplacian(s.v));
  rhs.axpy(dt, forcing);
  if (source_) rhs.axpy(dt, source_(s.t + th * dt));
  if (!rhs.all_finite()) {
    throw BlowUpError("non-finite right-hand side at t = " + std::to_string(s.t), s.t);
  }

  State next;
  next.t = s.t + dt;
  next.v = s.v;
  try {
    last_ = solver_.solve(rhs, next.v);
  } catch (const SolverDivergenceError& e) {
    throw SolverDivergenceError(e.what(), s.t);
  }
  next.u = s.u;
  next.u.axpy(dt * th, next.v);
  if (th < 1.0) next.u.axpy(dt * (1.0 - th), s.v);

  const double su = next.u.sup_norm();
  const double sv = next.v.sup_norm();
  if (!(su <= blowup_threshold_) || !(sv <= blowup_threshold_)) {
    throw BlowUpError("blow-up detected at t = " + std::to_string(next.t), next.t);
  }
  return next;
}

State step(const State& s, const TimeScheme& scheme, const NonlinearityParams& np,
           const SourceFn& source) {
  Stepper stepper(s.u.grid(), scheme, np, source);
  return stepper.step(s);
}

double bump_profile(double r, double amplitude, double r1, double r2) {
  const double s = (2.0 * r - (r1 + r2)) / (r2 - r1);
  if (!(std::abs(s) < 1.0)) return 0.0;
  return amplitude * std::exp(-1.0 / (1.0 - s * s));
}

Field initial_bump(const GridPtr& grid, double amplitude, double r1, double r2) {
  if (!(grid->r_inner() < r1 && r1 < r2 && r2 < grid->r_outer())) {
    throw ConfigError("init support must satisfy r_inner < r1 < r2 < r_outer");
  }
  return Field::sample(grid, [&](double r, double) { return bump_profile(r, amplitude, r1, r2); });
}

ManufacturedSolution::ManufacturedSolution(GridPtr grid, NonlinearityParams np, int k,
                                           double rate)
    : grid_(std::move(grid)), np_(np), k_(k), rate_(rate) {}

double ManufacturedSolution::u(double t, double r, double th) const {
  const double L = grid_->r_outer() - grid_->r_inner();
  const double S = std::sin(std::numbers::pi * (r - grid_->r_inner()) / L);
  return std::exp(-rate_ * t) * S * std::cos(k_ * th);
}

double ManufacturedSolution::laplacian_u(double t, double r, double th) const {
  const double L = grid_->r_outer() - grid_->r_inner();
  const double w = std::numbers::pi / L;
  const double x = w * (r - grid_->r_inner());
  const double S = std::sin(x);
  const double dS = w * std::cos(x);
  const double d2S = -w * w * S;
  const double kk = static_cast<double>(k_ * k_);
  return std::exp(-rate_ * t) * std::cos(k_ * th) * (d2S + dS / r - kk * S / (r * r));
}

State ManufacturedSolution::reference(double t) const {
  State s;
  s.t = t;
  s.u = Field::sample(grid_, [&](double r, double th) { return u(t, r, th); });
  s.v = s.u;
  s.v *= -rate_;
  return s;
}

Field ManufacturedSolution::source(double t) const {
  const double lam = rate_;
  return Field::sample(grid_, [&](double r, double th) {
    const double uu = u(t, r, th);
    const double lap = laplacian_u(t, r, th);
    // u_t = -lam u, u_tt = lam^2 u, Lap u_t = -lam Lap u
    double g = lam * lam * uu - (1.0 - lam) * lap;
    if (np_.a != 0.0) g -= np_.a * std::pow(std::abs(uu), np_.p);
    if (np_.b != 0.0) g -= np_.b * std::pow(std::abs(lam * uu), np_.q);
    return g;
  });
}

SourceFn ManufacturedSolution::source_fn() const {
  return [self = *this](double t) { return self.source(t); };
}

}  // namespace sdwave
