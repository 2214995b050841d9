#include "sdwave/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include <fmt/format.h>

#include "sdwave/error.hpp"

namespace sdwave {

std::shared_ptr<const PolarGrid> PolarGrid::build_annulus(double r_inner, double r_outer,
                                                          std::size_t nr, std::size_t ntheta,
                                                          std::optional<double> B) {
  if (!(r_inner > 0.0) || !std::isfinite(r_inner)) {
    throw ConfigError("domain.r_inner must be positive");
  }
  if (!(r_outer > r_inner) || !std::isfinite(r_outer)) {
    throw ConfigError("domain.r_outer must exceed domain.r_inner");
  }
  if (nr < 4) throw ConfigError("domain.nr must be at least 4");
  if (ntheta < 8 || ntheta % 2 != 0) {
    throw ConfigError("domain.ntheta must be even and at least 8");
  }
  const double b = B.value_or(2.0 / r_inner);
  // B r >= 2 on the whole domain keeps log(B r) >= log 2.
  if (!(b * r_inner >= 2.0 * (1.0 - 1e-14))) {
    throw ConfigError("domain.B must satisfy B * r_inner >= 2");
  }

  auto g = std::shared_ptr<PolarGrid>(new PolarGrid());
  g->r_inner_ = r_inner;
  g->r_outer_ = r_outer;
  g->nr_ = nr;
  g->ntheta_ = ntheta;
  g->dr_ = (r_outer - r_inner) / static_cast<double>(nr + 1);
  g->dtheta_ = 2.0 * std::numbers::pi / static_cast<double>(ntheta);
  g->B_ = b;
  g->radii_.resize(nr);
  for (std::size_t i = 0; i < nr; ++i) {
    g->radii_[i] = r_inner + static_cast<double>(i + 1) * g->dr_;
  }
  return g;
}

double PolarGrid::total_weight() const {
  double s = 0.0;
  for (std::size_t i = 0; i < nr_; ++i) s += ring_weight(i);
  return s * static_cast<double>(ntheta_);
}

Field::Field(GridPtr grid, double value) : grid_(std::move(grid)) {
  values_.assign(grid_->size(), value);
}

Field::Field(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->size()) {
    throw std::invalid_argument("Field: value count does not match grid size");
  }
}

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

double Field::sup_norm() const {
  double m = 0.0;
  for (double x : values_) {
    if (!std::isfinite(x)) return std::numeric_limits<double>::infinity();
    m = std::max(m, std::abs(x));
  }
  return m;
}

double Field::outer_ring_max() const {
  const std::size_t nt = grid_->ntheta();
  const std::size_t off = (grid_->nr() - 1) * nt;
  double m = 0.0;
  for (std::size_t j = 0; j < nt; ++j) m = std::max(m, std::abs(values_[off + j]));
  return m;
}

Field& Field::operator+=(const Field& o) {
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
  return *this;
}

Field& Field::operator-=(const Field& o) {
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
  return *this;
}

Field& Field::operator*=(double c) {
  for (double& x : values_) x *= c;
  return *this;
}

Field& Field::axpy(double c, const Field& o) {
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += c * o.values_[k];
  return *this;
}

namespace {

void require_finite(double s) {
  if (!std::isfinite(s)) {
    throw BlowUpError("non-finite value in field norm", std::numeric_limits<double>::quiet_NaN());
  }
}

}  // namespace

double l2_norm(const Field& f, const Field* weight) {
  const auto& g = *f.grid();
  const std::size_t nt = g.ntheta();
  double s = 0.0;
  for (std::size_t i = 0; i < g.nr(); ++i) {
    double ring = 0.0;
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t k = i * nt + j;
      const double v = f[k];
      ring += weight ? (*weight)[k] * v * v : v * v;
    }
    s += g.ring_weight(i) * ring;
  }
  require_finite(s);
  return std::sqrt(s);
}

double l2_norm_sq_radial(const Field& f, std::span<const double> log_ring_factor) {
  const auto& g = *f.grid();
  const std::size_t nt = g.ntheta();
  // Above this exponent the factor is applied per node in log space.
  constexpr double kDirectLimit = 600.0;
  double s = 0.0;
  for (std::size_t i = 0; i < g.nr(); ++i) {
    const double lf = log_ring_factor[i];
    double ring = 0.0;
    if (lf < kDirectLimit) {
      for (std::size_t j = 0; j < nt; ++j) {
        const double v = f[i * nt + j];
        ring += v * v;
      }
      ring *= std::exp(lf);
    } else {
      for (std::size_t j = 0; j < nt; ++j) {
        const double v = f[i * nt + j];
        if (v == 0.0) continue;
        ring += std::exp(lf + 2.0 * std::log(std::abs(v)));
      }
    }
    s += g.ring_weight(i) * ring;
  }
  require_finite(s);
  return s;
}

double inner(const Field& f, const Field& g_) {
  const auto& g = *f.grid();
  const std::size_t nt = g.ntheta();
  double s = 0.0;
  for (std::size_t i = 0; i < g.nr(); ++i) {
    double ring = 0.0;
    for (std::size_t j = 0; j < nt; ++j) ring += f[i * nt + j] * g_[i * nt + j];
    s += g.ring_weight(i) * ring;
  }
  return s;
}

void laplacian_into(const Field& f, std::span<double> out) {
  const auto& g = *f.grid();
  const std::size_t nr = g.nr();
  const std::size_t nt = g.ntheta();
  const double dr = g.dr();
  const double inv_dr2 = 1.0 / (dr * dr);
  const double inv_dth2 = 1.0 / (g.dtheta() * g.dtheta());
  const auto v = f.values();

  for (std::size_t i = 0; i < nr; ++i) {
    const double r = g.radius(i);
    const double c_out = (r + 0.5 * dr) / r * inv_dr2;
    const double c_in = (r - 0.5 * dr) / r * inv_dr2;
    const double c_th = inv_dth2 / (r * r);
    const double* cur = v.data() + i * nt;
    const double* inn = i > 0 ? v.data() + (i - 1) * nt : nullptr;
    const double* outr = i + 1 < nr ? v.data() + (i + 1) * nt : nullptr;
    double* o = out.data() + i * nt;
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t jp = j + 1 == nt ? 0 : j + 1;
      const std::size_t jm = j == 0 ? nt - 1 : j - 1;
      const double fi = inn ? inn[j] : 0.0;
      const double fo = outr ? outr[j] : 0.0;
      const double c = cur[j];
      o[j] = c_out * (fo - c) - c_in * (c - fi) + c_th * (cur[jp] - 2.0 * c + cur[jm]);
    }
  }
}

Field laplacian(const Field& f) {
  Field out(f.grid());
  laplacian_into(f, out.values());
  return out;
}

void gradient_sq_into(const Field& f, std::span<double> out) {
  const auto& g = *f.grid();
  const std::size_t nr = g.nr();
  const std::size_t nt = g.ntheta();
  const double dr = g.dr();
  const double inv_dr2 = 1.0 / (dr * dr);
  const double inv_dth2 = 1.0 / (g.dtheta() * g.dtheta());
  const auto v = f.values();

  for (std::size_t i = 0; i < nr; ++i) {
    const double r = g.radius(i);
    const double w_out = (i + 1 == nr ? 1.0 : 0.5) * (r + 0.5 * dr) / r * inv_dr2;
    const double w_in = (i == 0 ? 1.0 : 0.5) * (r - 0.5 * dr) / r * inv_dr2;
    const double w_th = 0.5 * inv_dth2 / (r * r);
    const double* cur = v.data() + i * nt;
    const double* inn = i > 0 ? v.data() + (i - 1) * nt : nullptr;
    const double* outr = i + 1 < nr ? v.data() + (i + 1) * nt : nullptr;
    double* o = out.data() + i * nt;
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t jp = j + 1 == nt ? 0 : j + 1;
      const std::size_t jm = j == 0 ? nt - 1 : j - 1;
      const double c = cur[j];
      const double dout = (outr ? outr[j] : 0.0) - c;
      const double din = c - (inn ? inn[j] : 0.0);
      const double dp = cur[jp] - c;
      const double dm = c - cur[jm];
      o[j] = w_out * dout * dout + w_in * din * din + w_th * (dp * dp + dm * dm);
    }
  }
}

Field gradient_sq(const Field& f) {
  Field out(f.grid());
  gradient_sq_into(f, out.values());
  return out;
}

double d_function(double r, const PolarGrid& grid) {
  if (r < grid.r_inner()) {
    throw DomainError("d_function: r = " + std::to_string(r) + " lies inside the obstacle");
  }
  return r * std::log(grid.B() * r);
}

void write_field_csv(std::ostream& os, const Field& f) {
  const auto& g = *f.grid();
  os << "i,j,r,theta,value\n";
  for (std::size_t i = 0; i < g.nr(); ++i) {
    for (std::size_t j = 0; j < g.ntheta(); ++j) {
      os << fmt::format("{},{},{:.17e},{:.17e},{:.17e}\n", i + 1, j, g.radius(i), g.theta(j),
                        f.at(i, j));
    }
  }
}

}  // namespace sdwave
