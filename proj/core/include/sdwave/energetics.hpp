#pragma once

#include <span>
#include <vector>

#include "sdwave/solver.hpp"
#include "sdwave/weight.hpp"

namespace sdwave {

/// One time sample of every monitored energy.
///
/// E_classical = 1/2 (|u_t|^2 + |grad u|^2)
/// E_higher    = E_classical + 1/2 (|grad u_t|^2 + |Lap u|^2)
/// Wfirst      = |e^psi u_t|^2 + |e^psi grad u|^2
/// Wsecond     = |e^psi grad u_t|^2 + |e^psi Lap u|^2
/// W           = Wfirst + Wsecond + (1+t)(|u_t|^2 + |grad u|^2 + |grad u_t|^2 + |Lap u|^2) + |u|^2
struct DiagnosticsRow {
  double t = 0.0;
  double E_classical = 0.0;
  double E_higher = 0.0;
  double L2_u = 0.0;
  double Wfirst = 0.0;
  double Wsecond = 0.0;
  double W = 0.0;
  double sup_u = 0.0;
  double sup_v = 0.0;
  double outer_ring_amp = 0.0;
};

/// Squared L2 norms of u and the four components of (d_t, grad, grad d_t, Lap) u.
struct ComponentNorms {
  double u = 0.0;
  double v = 0.0;
  double grad_u = 0.0;
  double grad_v = 0.0;
  double lap_u = 0.0;

  double first() const { return v + grad_u; }
  double second() const { return grad_v + lap_u; }
};

struct StateNorms {
  ComponentNorms plain;
  ComponentNorms weighted;  // with factor e^{2 psi(t, .)}
};

/// log of the ring factor e^{2 psi(t, r_i)} for every ring.
std::vector<double> log_weight_factors(const PolarGrid& grid, double t, const WeightParams& w);

/// All plain and weighted component norms; `lap_u` may be passed to avoid
/// recomputing it.
StateNorms state_norms(const State& s, const WeightParams& w, const Field* lap_u = nullptr);
StateNorms state_norms(const State& s, std::span<const double> log_factor, const Field& lap_u);

/// Integral of a non-negative nodal density times exp(log_factor[ring]).
double weighted_density_integral(const Field& density, std::span<const double> log_factor);

struct Energies {
  double E_classical = 0.0;
  double E_higher = 0.0;
  double L2_u = 0.0;
};

Energies energies(const State& s);

struct WeightedEnergies {
  double Wfirst = 0.0;
  double Wsecond = 0.0;
};

WeightedEnergies weighted_energies(const State& s, const WeightParams& w);

double w_functional(const State& s, const WeightParams& w);
double w_functional(const StateNorms& n, double t);

DiagnosticsRow make_row(const State& s, const StateNorms& n);
DiagnosticsRow diagnostics(const State& s, const WeightParams& w);

/// Initial-data functionals built from (u0, u1).
///
/// I0 = 2|u0|^2 + |u1|^2 + 1/2 |grad u0|^2 + 3 C0 |d (u1 - Lap u0)|^2
/// I1 = |Lap u0|^2 + |grad u1|^2 + 3/2 |grad u0|^2 + |u1|^2
/// I2 = 1/2 (I0 + I1 + |u1|^2 + |grad u0|^2 + |grad u1|^2 + |Lap u0|^2)
/// I_exp = int e^{2 psi(0,x)} (|grad u1|^2 + |Lap u0|^2 + |u1|^2 + |grad u0|^2)
/// J = sum_j (|u_j|^2 + |grad u_j|^2) + |Lap u0|^2 + |d Lap u0|^2 + |d u1|^2 + I_exp
/// C0 is the Hardy constant, echoed back unchanged.
struct DataFunctionals {
  double I0 = 0.0;
  double I1 = 0.0;
  double I2 = 0.0;
  double J = 0.0;
  double I_exp = 0.0;
  double C0 = 1.0;
};

DataFunctionals data_functionals(const Field& u0, const Field& u1, const WeightParams& w,
                                 double C0);

struct DecayFit {
  double alpha = 0.0;  // value ~ c (1+t)^(-alpha)
  double c = 0.0;
  std::size_t samples = 0;
};

/// Least-squares fit of log(value) against log(1+t) over t in [t_a, t_b].
/// Throws DomainError with fewer than 10 samples or a non-positive value.
DecayFit fit_decay_exponent(std::span<const double> t, std::span<const double> value, double t_a,
                            double t_b);

}  // namespace sdwave
