#pragma once

#include <functional>
#include <optional>

#include "sdwave/grid.hpp"
#include "sdwave/linear_solver.hpp"

namespace sdwave {

/// Displacement u and velocity v = u_t at time t.
struct State {
  Field u;
  Field v;
  double t = 0.0;
};

/// Forcing a|u|^p + b|u_t|^q.
struct NonlinearityParams {
  double a = 0.0;
  double b = 0.0;
  double p = 2.0;
  double q = 2.0;

  /// Throws ConfigError unless a, b >= 0 and p, q > 1.
  void validate() const;
  bool is_linear() const { return a == 0.0 && b == 0.0; }
  bool operator==(const NonlinearityParams&) const = default;
};

struct TimeScheme {
  double dt = 0.01;
  double theta = 0.5;  // 1/2 trapezoidal, 1 backward Euler
  double linear_solve_tol = 1e-10;
  int max_linear_iters = 200;
  PreconditionerKind preconditioner = PreconditionerKind::spectral;

  void validate() const;
  bool operator==(const TimeScheme&) const = default;
};

/// Default divergence threshold on sup|u| and sup|v|.
inline constexpr double kBlowupThreshold = 1e6;

/// Nodewise a|u|^p + b|v|^q.
Field nonlinearity(const Field& u, const Field& v, const NonlinearityParams& np);
void nonlinearity_into(const Field& u, const Field& v, const NonlinearityParams& np,
                       std::span<double> out);

/// External source g(t, x) sampled on the grid.
using SourceFn = std::function<Field(double t)>;

/// One-parameter theta scheme for u_tt - Lap u - Lap u_t = F(u, u_t) + g.
///
///   (v+ - v)/dt = Lap(th u+ + (1-th) u) + Lap(th v+ + (1-th) v) + F(u, v) + g(t + th dt)
///   (u+ - u)/dt = th v+ + (1-th) v
///
/// F is lagged at the old state. Eliminating u+ leaves
///   (I - (th dt + th^2 dt^2) Lap) v+ = v + dt Lap u + (1-th)(dt + th dt^2) Lap v + dt (F + g)
/// which is solved by PCG.
class Stepper {
 public:
  Stepper(GridPtr grid, TimeScheme scheme, NonlinearityParams np, SourceFn source = {},
          double blowup_threshold = kBlowupThreshold);

  /// Advances one step. Throws BlowUpError (time of the new level) when the new
  /// state is non-finite or exceeds the threshold, SolverDivergenceError
  /// (time of the old level) when the linear solve fails.
  State step(const State& s);

  /// Same as step(), reusing precomputed Lap u and F(u, v) of the old state.
  State step(const State& s, const Field& lap_u, const Field& forcing);

  const TimeScheme& scheme() const { return scheme_; }
  const NonlinearityParams& nonlinearity_params() const { return np_; }
  const LinearSolveStats& last_solve() const { return last_; }

 private:
  GridPtr grid_;
  TimeScheme scheme_;
  NonlinearityParams np_;
  SourceFn source_;
  double blowup_threshold_;
  ShiftedLaplacianSolver solver_;
  LinearSolveStats last_;
};

/// Single step without keeping a Stepper around.
State step(const State& s, const TimeScheme& scheme, const NonlinearityParams& np,
           const SourceFn& source = {});

/// Smooth radial bump A exp(-1 / (1 - s^2)), s = (2r - (r1 + r2)) / (r2 - r1),
/// zero outside (r1, r2). Throws ConfigError unless r_inner < r1 < r2 < r_outer.
Field initial_bump(const GridPtr& grid, double amplitude, double r1, double r2);

/// Scalar profile of initial_bump at radius r.
double bump_profile(double r, double amplitude, double r1, double r2);

/// Manufactured solution u = exp(-rate t) sin(pi (r - r_in) / (r_out - r_in)) cos(k theta).
///
/// The default rate is 1/2: with rate 1, u + u_t vanishes identically, the
/// operator Lap u + Lap u_t annihilates the spatial profile and the spatial
/// discretization error cannot be observed.
class ManufacturedSolution {
 public:
  ManufacturedSolution(GridPtr grid, NonlinearityParams np, int k = 2, double rate = 0.5);

  double u(double t, double r, double th) const;
  /// Analytic Laplacian of u.
  double laplacian_u(double t, double r, double th) const;

  /// (u_exact, v_exact) on the grid.
  State reference(double t) const;
  /// g = u_tt - Lap u - Lap u_t - a|u|^p - b|u_t|^q with the Laplacian in closed form.
  Field source(double t) const;
  SourceFn source_fn() const;

  int k() const { return k_; }
  double rate() const { return rate_; }

 private:
  GridPtr grid_;
  NonlinearityParams np_;
  int k_;
  double rate_;
};

}  // namespace sdwave
