#pragma once

#include <memory>
#include <string_view>

#include "sdwave/grid.hpp"

namespace sdwave {

enum class PreconditionerKind {
  jacobi,    // diagonal of I - c*Laplacian
  spectral,  // exact inverse via FFT in theta and tridiagonal solves in r
};

PreconditionerKind parse_preconditioner(std::string_view name);
std::string_view to_string(PreconditionerKind kind);

struct LinearSolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Solves (I - c*Laplacian) x = b by preconditioned conjugate gradients.
///
/// The operator is self-adjoint and positive definite in the quadrature inner
/// product sum w_ij x_ij y_ij, so CG runs in that inner product. Convergence is
/// declared when ||r||_w <= tol * ||b||_w. The object owns FFT plans and
/// scratch buffers and must not be shared between threads; separate instances
/// are independent.
class ShiftedLaplacianSolver {
 public:
  ShiftedLaplacianSolver(GridPtr grid, double shift, PreconditionerKind kind, double tol,
                         int max_iters);
  ~ShiftedLaplacianSolver();
  ShiftedLaplacianSolver(ShiftedLaplacianSolver&&) noexcept;
  ShiftedLaplacianSolver& operator=(ShiftedLaplacianSolver&&) noexcept;
  ShiftedLaplacianSolver(const ShiftedLaplacianSolver&) = delete;
  ShiftedLaplacianSolver& operator=(const ShiftedLaplacianSolver&) = delete;

  /// x holds the initial guess on entry. Throws SolverDivergenceError (time
  /// NaN; the stepper fills in the time) when max_iters is exceeded.
  LinearSolveStats solve(const Field& b, Field& x);

  /// out = (I - c*Laplacian) x
  void apply(const Field& x, Field& out) const;
  /// Applies the preconditioner only (exact inverse for `spectral`).
  void precondition(const Field& r, Field& z);

  double shift() const { return shift_; }
  PreconditionerKind kind() const { return kind_; }

 private:
  struct Spectral;

  GridPtr grid_;
  double shift_;
  PreconditionerKind kind_;
  double tol_;
  int max_iters_;
  std::vector<double> jacobi_inv_;  // per ring
  std::unique_ptr<Spectral> spectral_;
};

}  // namespace sdwave
