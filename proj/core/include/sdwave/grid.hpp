#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace sdwave {

/// Annulus r_inner < r < r_outer discretized on a tensor polar mesh.
///
/// Unknowns live on nr interior rings r_i = r_inner + i*dr, i = 1..nr, with
/// dr = (r_outer - r_inner) / (nr + 1); both boundary circles carry homogeneous
/// Dirichlet data and are not stored. Angles are periodic, theta_j = j*dtheta.
/// Storage is ring-major: index = (i - 1) * ntheta + j.
class PolarGrid {
 public:
  /// Throws ConfigError naming the offending field on invalid input.
  static std::shared_ptr<const PolarGrid> build_annulus(double r_inner, double r_outer,
                                                        std::size_t nr, std::size_t ntheta,
                                                        std::optional<double> B = std::nullopt);

  double r_inner() const { return r_inner_; }
  double r_outer() const { return r_outer_; }
  std::size_t nr() const { return nr_; }
  std::size_t ntheta() const { return ntheta_; }
  std::size_t size() const { return nr_ * ntheta_; }
  double dr() const { return dr_; }
  double dtheta() const { return dtheta_; }
  double B() const { return B_; }

  /// Radius of interior ring `ring` (0-based, ring 0 is closest to the obstacle).
  double radius(std::size_t ring) const { return radii_[ring]; }
  double theta(std::size_t j) const { return static_cast<double>(j) * dtheta_; }
  std::span<const double> radii() const { return radii_; }

  /// Midpoint quadrature weight r_i * dr * dtheta of any node on ring `ring`.
  double ring_weight(std::size_t ring) const { return radii_[ring] * dr_ * dtheta_; }
  double total_weight() const;

  std::size_t index(std::size_t ring, std::size_t j) const { return ring * ntheta_ + j; }

 private:
  PolarGrid() = default;

  double r_inner_ = 0.0;
  double r_outer_ = 0.0;
  std::size_t nr_ = 0;
  std::size_t ntheta_ = 0;
  double dr_ = 0.0;
  double dtheta_ = 0.0;
  double B_ = 0.0;
  std::vector<double> radii_;
};

using GridPtr = std::shared_ptr<const PolarGrid>;

/// Grid function on the interior nodes of a PolarGrid.
class Field {
 public:
  Field() = default;
  explicit Field(GridPtr grid, double value = 0.0);
  Field(GridPtr grid, std::vector<double> values);

  /// Samples f(r, theta) at every interior node.
  template <class F>
  static Field sample(const GridPtr& grid, F&& f) {
    Field out(grid);
    for (std::size_t i = 0; i < grid->nr(); ++i) {
      const double r = grid->radius(i);
      for (std::size_t j = 0; j < grid->ntheta(); ++j) {
        out.values_[grid->index(i, j)] = f(r, grid->theta(j));
      }
    }
    return out;
  }

  const GridPtr& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }
  double& at(std::size_t ring, std::size_t j) { return values_[grid_->index(ring, j)]; }
  double at(std::size_t ring, std::size_t j) const { return values_[grid_->index(ring, j)]; }

  bool all_finite() const;
  double sup_norm() const;
  /// max |f| over the outermost interior ring.
  double outer_ring_max() const;

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(double c);
  /// this += c * o
  Field& axpy(double c, const Field& o);

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double c, Field a) { return a *= c; }

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

/// sqrt(sum w_ij * weight_ij * f_ij^2); `weight` defaults to 1.
/// Throws BlowUpError (time NaN) on non-finite entries.
double l2_norm(const Field& f, const Field* weight = nullptr);

/// Squared norm with a radial weight factor: sum w_ij * ring_factor_i * f_ij^2.
/// Zero entries are skipped so huge factors never meet zero fields; products
/// are formed in log space when the factor alone would overflow.
double l2_norm_sq_radial(const Field& f, std::span<const double> log_ring_factor);

/// Quadrature inner product sum w_ij f_ij g_ij.
double inner(const Field& f, const Field& g);

/// Five-point polar Laplacian f_rr + f_r / r + f_thth / r^2 with zero Dirichlet
/// data on both circles. Written in flux form, hence symmetric in the
/// quadrature inner product.
Field laplacian(const Field& f);
void laplacian_into(const Field& f, std::span<double> out);

/// Nodewise |grad f|^2 = f_r^2 + f_th^2 / r^2 from edge differences.
///
/// Each node averages the squared differences across its two radial and two
/// angular edges, with the flux-form radius factors. On the first and last
/// ring the boundary edge uses ghost value 0 and takes the full edge weight,
/// so sum w * gradient_sq(f) = <-laplacian(f), f> exactly.
Field gradient_sq(const Field& f);
void gradient_sq_into(const Field& f, std::span<double> out);

/// d(r) = r log(B r); throws DomainError for r < r_inner.
double d_function(double r, const PolarGrid& grid);

/// CSV dump with columns i,j,r,theta,value (i is the 1-based ring index).
void write_field_csv(std::ostream& os, const Field& f);

}  // namespace sdwave
