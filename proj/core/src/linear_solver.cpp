#include "sdwave/linear_solver.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "sdwave/error.hpp"

namespace sdwave {

PreconditionerKind parse_preconditioner(std::string_view name) {
  if (name == "jacobi") return PreconditionerKind::jacobi;
  if (name == "spectral") return PreconditionerKind::spectral;
  throw ConfigError("time.preconditioner must be 'jacobi' or 'spectral', got '" +
                    std::string(name) + "'");
}

std::string_view to_string(PreconditionerKind kind) {
  return kind == PreconditionerKind::jacobi ? "jacobi" : "spectral";
}

namespace {

// The FFTW planner is not re-entrant.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct ShiftedLaplacianSolver::Spectral {
  std::size_t nr = 0;
  std::size_t nt = 0;
  std::size_t nk = 0;  // nt / 2 + 1
  double* real_buf = nullptr;
  fftw_complex* spec_buf = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::vector<double> lower;      // per ring, coupling to ring i-1
  std::vector<double> upper;      // per ring, coupling to ring i+1
  std::vector<double> cprime;     // per (ring, mode)
  std::vector<double> inv_denom;  // per (ring, mode)

  Spectral(const PolarGrid& g, double c) : nr(g.nr()), nt(g.ntheta()), nk(g.ntheta() / 2 + 1) {
    real_buf = fftw_alloc_real(nr * nt);
    spec_buf = fftw_alloc_complex(nr * nk);
    const int n[] = {static_cast<int>(nt)};
    {
      std::lock_guard lock(fftw_planner_mutex());
      forward = fftw_plan_many_dft_r2c(1, n, static_cast<int>(nr), real_buf, nullptr, 1,
                                       static_cast<int>(nt), spec_buf, nullptr, 1,
                                       static_cast<int>(nk), FFTW_ESTIMATE);
      backward = fftw_plan_many_dft_c2r(1, n, static_cast<int>(nr), spec_buf, nullptr, 1,
                                        static_cast<int>(nk), real_buf, nullptr, 1,
                                        static_cast<int>(nt), FFTW_ESTIMATE);
    }

    const double dr = g.dr();
    const double inv_dr2 = 1.0 / (dr * dr);
    const double inv_dth2 = 1.0 / (g.dtheta() * g.dtheta());
    lower.resize(nr);
    upper.resize(nr);
    std::vector<double> center(nr);
    for (std::size_t i = 0; i < nr; ++i) {
      const double r = g.radius(i);
      const double co = (r + 0.5 * dr) / r * inv_dr2;
      const double ci = (r - 0.5 * dr) / r * inv_dr2;
      lower[i] = i > 0 ? -c * ci : 0.0;
      upper[i] = i + 1 < nr ? -c * co : 0.0;
      center[i] = 1.0 + c * (co + ci);
    }
    cprime.resize(nr * nk);
    inv_denom.resize(nr * nk);
    for (std::size_t k = 0; k < nk; ++k) {
      // Eigenvalue of the periodic second difference for Fourier mode k.
      const double mu =
          (2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) /
                                static_cast<double>(nt))) *
          inv_dth2;
      double prev_c = 0.0;
      for (std::size_t i = 0; i < nr; ++i) {
        const double r = g.radius(i);
        const double diag = center[i] + c * mu / (r * r);
        const double denom = diag - lower[i] * prev_c;
        inv_denom[i * nk + k] = 1.0 / denom;
        prev_c = upper[i] / denom;
        cprime[i * nk + k] = prev_c;
      }
    }
  }

  ~Spectral() {
    std::lock_guard lock(fftw_planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    fftw_free(real_buf);
    fftw_free(spec_buf);
  }

  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  void solve(std::span<const double> rhs, std::span<double> out) {
    std::copy(rhs.begin(), rhs.end(), real_buf);
    fftw_execute(forward);
    auto* z = reinterpret_cast<std::complex<double>*>(spec_buf);
    // Thomas algorithm per mode; real and imaginary parts share coefficients.
    for (std::size_t k = 0; k < nk; ++k) z[k] *= inv_denom[k];
    for (std::size_t i = 1; i < nr; ++i) {
      const double a = lower[i];
      for (std::size_t k = 0; k < nk; ++k) {
        z[i * nk + k] = (z[i * nk + k] - a * z[(i - 1) * nk + k]) * inv_denom[i * nk + k];
      }
    }
    for (std::size_t i = nr - 1; i-- > 0;) {
      for (std::size_t k = 0; k < nk; ++k) {
        z[i * nk + k] -= cprime[i * nk + k] * z[(i + 1) * nk + k];
      }
    }
    fftw_execute(backward);
    const double scale = 1.0 / static_cast<double>(nt);
    for (std::size_t m = 0; m < nr * nt; ++m) out[m] = real_buf[m] * scale;
  }
};

ShiftedLaplacianSolver::ShiftedLaplacianSolver(GridPtr grid, double shift,
                                               PreconditionerKind kind, double tol,
                                               int max_iters)
    : grid_(std::move(grid)), shift_(shift), kind_(kind), tol_(tol), max_iters_(max_iters) {
  if (!(shift >= 0.0)) throw DomainError("shifted Laplacian: shift must be non-negative");
  if (!(tol > 0.0)) throw ConfigError("time.linear_solve_tol must be positive");
  if (max_iters < 1) throw ConfigError("time.max_linear_iters must be at least 1");
  const auto& g = *grid_;
  jacobi_inv_.resize(g.nr());
  for (std::size_t i = 0; i < g.nr(); ++i) {
    const double r = g.radius(i);
    const double d =
        1.0 + shift * (2.0 / (g.dr() * g.dr()) + 2.0 / (r * r * g.dtheta() * g.dtheta()));
    jacobi_inv_[i] = 1.0 / d;
  }
  if (kind_ == PreconditionerKind::spectral) spectral_ = std::make_unique<Spectral>(g, shift);
}

ShiftedLaplacianSolver::~ShiftedLaplacianSolver() = default;
ShiftedLaplacianSolver::ShiftedLaplacianSolver(ShiftedLaplacianSolver&&) noexcept = default;
ShiftedLaplacianSolver& ShiftedLaplacianSolver::operator=(ShiftedLaplacianSolver&&) noexcept =
    default;

void ShiftedLaplacianSolver::apply(const Field& x, Field& out) const {
  laplacian_into(x, out.values());
  auto o = out.values();
  const auto xv = x.values();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] = xv[k] - shift_ * o[k];
}

void ShiftedLaplacianSolver::precondition(const Field& r, Field& z) {
  if (spectral_) {
    spectral_->solve(r.values(), z.values());
    return;
  }
  const std::size_t nt = grid_->ntheta();
  for (std::size_t i = 0; i < grid_->nr(); ++i) {
    for (std::size_t j = 0; j < nt; ++j) z[i * nt + j] = jacobi_inv_[i] * r[i * nt + j];
  }
}

LinearSolveStats ShiftedLaplacianSolver::solve(const Field& b, Field& x) {
  const double bnorm = std::sqrt(inner(b, b));
  LinearSolveStats stats;
  if (bnorm == 0.0) {
    x *= 0.0;
    return stats;
  }
  Field r(grid_);
  Field q(grid_);
  apply(x, q);
  r = b;
  r -= q;
  double rel = std::sqrt(inner(r, r)) / bnorm;
  stats.relative_residual = rel;
  if (rel <= tol_) return stats;

  Field z(grid_);
  precondition(r, z);
  Field p = z;
  double rz = inner(r, z);
  for (int it = 1; it <= max_iters_; ++it) {
    apply(p, q);
    const double alpha = rz / inner(p, q);
    x.axpy(alpha, p);
    r.axpy(-alpha, q);
    rel = std::sqrt(inner(r, r)) / bnorm;
    stats.iterations = it;
    stats.relative_residual = rel;
    if (!std::isfinite(rel)) break;
    if (rel <= tol_) return stats;
    precondition(r, z);
    const double rz_new = inner(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = z[k] + beta * p[k];
  }
  throw SolverDivergenceError("linear solve did not reach tolerance " + std::to_string(tol_) +
                                  " within " + std::to_string(max_iters_) +
                                  " iterations (residual " + std::to_string(rel) + ")",
                              std::numeric_limits<double>::quiet_NaN());
}

}  // namespace sdwave
