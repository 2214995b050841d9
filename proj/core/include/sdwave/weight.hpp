#pragma once

#include <optional>

namespace sdwave {

/// Positive root of 2r^2 + 3r - 8 = 0, i.e. (-3 + sqrt(73)) / 4.
double rho0_constant();

/// Admissible half-open interval [lo, 1) for the auxiliary constant eps.
struct EpsWindow {
  double lo;
  double hi = 1.0;
  bool contains(double eps) const { return eps >= lo && eps < hi; }
  double midpoint() const { return 0.5 * (lo + hi); }
};

/// Lower window bound (4 rho + 14) / ((2 + rho)(2 rho + 3)); no emptiness check.
double epsilon_window_lower(double rho);

/// Window for eps, or nullopt when it is empty (exactly when rho <= rho0).
/// Throws DomainError for rho <= 0.
std::optional<EpsWindow> epsilon_window(double rho);

/// Parameters of the exponential weight psi(t, r).
///
/// `rho` must be positive. `eps` is optional; when present and the window is
/// enforced it must lie in epsilon_window(rho).
class WeightParams {
 public:
  WeightParams() = default;
  explicit WeightParams(double rho, std::optional<double> eps = std::nullopt,
                        bool enforce_window = false);

  double rho() const { return rho_; }
  std::optional<double> eps() const { return eps_; }

  /// rho > rho0.
  bool theorem_grade() const;
  /// theorem_grade() and eps present and inside the window.
  bool eps_admissible() const;

  bool operator==(const WeightParams&) const = default;

 private:
  double rho_ = 2.0;
  std::optional<double> eps_;
};

/// psi(t, r) = 1 / (rho (1+t)^rho) + r^2 / (2 (1+t)^(2+rho)).
double psi(double t, double r, const WeightParams& w);

struct PsiDerivatives {
  double psi_t;          // < 0
  double grad_psi_mag;   // r / (1+t)^(2+rho)
  double laplacian_psi;  // 2 / (1+t)^(2+rho), independent of r
};

PsiDerivatives psi_derivatives(double t, double r, const WeightParams& w);

/// Outcome of the four pointwise weight inequalities at one (t, r).
///
/// The `*_lhs` members hold each inequality written as `lhs <= 0`; a flag is
/// set when lhs <= 1e-12 * (1 + |terms|). `worst_margin` is the smallest
/// normalized slack -lhs / (1 + |terms|) over the checks that ran (negative
/// means violated).
struct PointwiseReport {
  bool est15_ok = false;
  bool est7_ok = false;
  bool est13_ok = false;
  bool ratio_bound_ok = false;
  /// est7 is skipped (and est7_ok stays false) when eps is not admissible.
  bool est7_gate_failed = false;
  double worst_margin = 0.0;

  double est15_lhs = 0.0;
  double est7_lhs = 0.0;
  double est13_lhs = 0.0;
  double ratio_lhs = 0.0;
};

/// Relative tolerance for the pointwise inequality checks.
inline constexpr double kPointwiseTolerance = 1e-12;

PointwiseReport check_pointwise(double t, double r, const WeightParams& w);

struct WeightConstants {
  double c_eps_rho;  // coefficient in the pointwise u_tt estimate
  double c_tilde;    // c_eps_rho + 1 / (2 (1 - eps))
};

/// Throws DomainError unless eps is present and inside the window.
WeightConstants weight_constants(const WeightParams& w);

/// Admissible constant in -psi_t <= C / (1+t) psi; the supremum 2 + rho.
inline double c_rho(const WeightParams& w) { return 2.0 + w.rho(); }

}  // namespace sdwave
