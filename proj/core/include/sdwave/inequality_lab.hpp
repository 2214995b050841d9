#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "sdwave/simulation.hpp"

namespace sdwave {

/// theta(m) = 1 - 2/m, the interpolation exponent in the L^m bound.
double theta_exponent(double m);

struct ExponentGates {
  bool lemma1_ok = false;   // p, q > 4 + rho
  bool lemma2_ok = false;   // p, q > 5 + rho
  bool dtwo_ok = false;     // q > 6 + 2 rho
  bool theorem_ok = false;  // p, q > 6 + 2 rho0
};

struct ExponentThresholds {
  double lemma1 = 0.0;
  double lemma2 = 0.0;
  double dtwo = 0.0;
  double theorem = 0.0;
};

ExponentThresholds exponent_thresholds(double rho);

struct ExponentReport {
  double p = 0.0, q = 0.0, rho = 0.0, eta = 0.0, eps1 = 0.0, delta = 0.0;
  double beta1 = 0.0, beta2 = 0.0, beta3 = 0.0, beta4 = 0.0, beta5 = 0.0, beta6 = 0.0;
  ExponentGates gates;
};

/// beta1, beta2: (2+rho)(1-theta(2m)) + (1+eta)/m - (1 - 1/m)            m = p, q
/// beta3, beta4: (2+rho)(1-theta(2m))/2 + (1+eta)/m - (1 - 1/m)/2       m = p, q
/// beta5:        (2+rho)(1+eps1)/(2q) + (1+eta)/q
/// beta6:        beta5 + (2+rho)(1-theta(2q))/2 - (1-delta)/2
/// Throws DomainError unless p, q > 1, rho > 0 and eta, eps1, delta > 0.
ExponentReport exponent_report(double p, double q, double rho, double eta, double eps1,
                               double delta);

/// eta = min(p - 4 - rho, q - 4 - rho) / 2, which makes beta1 and beta2 negative.
/// Throws DomainError when p, q > 4 + rho fails.
double admissible_eta(double p, double q, double rho);

/// |v|_{L^m} / (|v|_2^{1-theta(m)} |grad v|_2^{theta(m)}).
/// Throws DomainError for m outside [2, inf) or a vanishing denominator.
double gn_ratio(const Field& v, double m);

/// |e^{sigma psi} v|_{L^m} / ((1+t)^{(2+rho)(1-theta(m))/2} |grad v|_2^{1-sigma} |e^psi grad v|_2^sigma).
double weighted_gn_ratio(const Field& v, double t, double m, double sigma, const WeightParams& w);

/// Discrete |f|_{L^m} with the grid quadrature.
double lm_norm(const Field& f, double m);

/// c cos(k theta + phase) times a C-infinity bump supported in (r1, r2).
struct SmoothMode {
  double coef = 0.0;
  int k = 0;
  double phase = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
};

/// Five modes with N(0,1) coefficients, k in [0, 4], random phases and supports
/// inside (r_inner, r_outer). Independent of the grid resolution.
std::vector<SmoothMode> random_modes(std::mt19937_64& rng, double r_inner, double r_outer,
                                     std::size_t count = 5);

Field sample_modes(const GridPtr& grid, const std::vector<SmoothMode>& modes);

struct Est9Result {
  double min_slack = 0.0;           // min over nodes of rhs - lhs
  double min_relative_slack = 0.0;  // min over nodes of (rhs - lhs) / (lhs + rhs)
  std::size_t worst_node = 0;
};

/// Nodewise check of
///   (|grad psi|^2/(-psi_t)) |u_tt|^2 <= (-psi_t) |Lap u|^2 + eps |Lap v|^2 + C_{eps,rho} |F|^2
/// with u_tt = Lap u + Lap v + F. The common factor e^{2 psi} is positive and cancels.
/// Throws DomainError unless eps lies in the admissible window.
Est9Result est9_residual(const State& s, const NonlinearityParams& np, const WeightParams& w);

enum class Proposition { prop1, prop2 };

struct PropMonitor {
  std::vector<double> t;
  std::vector<double> lhs;
  std::vector<double> rhs;
  double max_violation = 0.0;  // max of (lhs - rhs) / max(rhs, 1e-14)
};

/// prop1: Wsecond(t) + (1-eps) int |e^psi Lap v|^2  vs  Wsecond(0) + C~ int |e^psi F|^2
/// prop2: Wfirst(t)                                  vs  Wfirst(0) + 2 int |e^psi F| |e^psi v|
/// The first sample must be the initial one.
PropMonitor prop_budget_monitor(const std::vector<TrajectorySample>& samples,
                                const WeightParams& w, Proposition which);

struct NonlinearIntegralRow {
  double t = 0.0;
  double A_lhs = 0.0;  // int |e^psi F|^2
  double B_lhs = 0.0;  // int |e^psi F| |e^psi v|
  double M = 0.0;
  double A_rhs = 0.0;  // M^p + M^q
  double B_rhs = 0.0;  // M^{(p+1)/2} + M^{(q+1)/2}
  double A_ratio = 0.0;
  double B_ratio = 0.0;
};

/// Refuses (DomainError naming the threshold) unless p, q > 5 + rho.
std::vector<NonlinearIntegralRow> nonlinear_integral_monitor(
    const std::vector<TrajectorySample>& samples, const NonlinearityParams& np,
    const WeightParams& w);

/// I(t) = int_0^t (1+t-s)^{-a} (1+s)^{-b} ds by adaptive Gauss-Kronrod.
/// Throws DomainError unless 0 < a <= 1 < b.
double convolution_integral(double a, double b, double t);

struct ConvolutionRow {
  double t = 0.0;
  double I = 0.0;
  double normalized = 0.0;  // (1+t)^a I(t)
};

/// t = 0 followed by `samples - 1` points log-spaced on [1, T].
std::vector<ConvolutionRow> convolution_decay(double a, double b, double T, std::size_t samples);

/// One row of a check report.
struct ReportRow {
  std::string check_id;
  std::string params;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool pass = false;
};

void write_report_csv(std::ostream& os, const std::vector<ReportRow>& rows,
                      const std::string& header_comment = {});

}  // namespace sdwave
