#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracle.hpp"
#include "sdwave/energetics.hpp"
#include "sdwave/error.hpp"
#include "sdwave/simulation.hpp"

using namespace sdwave;
using std::numbers::pi;

namespace {

constexpr int kOracleNr = 4000;

State bump_state(const GridPtr& g, double au, double av) {
  return {initial_bump(g, au, 2.0, 3.5), initial_bump(g, av, 1.8, 3.0), 0.0};
}

}  // namespace

TEST(Energies, ZeroState) {
  const auto g = PolarGrid::build_annulus(1.0, 4.0, 8, 8);
  const auto e = energies({Field(g), Field(g), 0.0});
  EXPECT_EQ(e.E_classical, 0.0);
  EXPECT_EQ(e.E_higher, 0.0);
  EXPECT_EQ(e.L2_u, 0.0);
  const auto we = weighted_energies({Field(g), Field(g), 0.0}, WeightParams(2.0));
  EXPECT_EQ(we.Wfirst, 0.0);
  EXPECT_EQ(we.Wsecond, 0.0);
  EXPECT_EQ(w_functional({Field(g), Field(g), 0.0}, WeightParams(2.0)), 0.0);
}

TEST(Energies, SineModeAgainstOracle) {
  const auto g = PolarGrid::build_annulus(1.0, 2.0, 256, 16);
  const State s{Field::sample(g, [](double r, double) { return std::sin(pi * (r - 1.0)); }),
                Field(g), 0.0};
  const double ref = 0.5 * oracle::annulus_integral(1.0, 2.0, kOracleNr, 4, [](double r, double) {
                       const double c = pi * std::cos(pi * (r - 1.0));
                       return c * c;
                     });
  const auto e = energies(s);
  EXPECT_NEAR(e.E_classical, ref, 0.01 * ref);
  const double lap_ref =
      oracle::annulus_integral(1.0, 2.0, kOracleNr, 4, [](double r, double) {
        const double l = -pi * pi * std::sin(pi * (r - 1.0)) + pi * std::cos(pi * (r - 1.0)) / r;
        return l * l;
      });
  EXPECT_NEAR(e.E_higher - e.E_classical, 0.5 * lap_ref, 0.01 * 0.5 * lap_ref);
}

TEST(Energies, HigherMinusClassicalIsHalfSecondOrderNorms) {
  const auto g = PolarGrid::build_annulus(1.0, 5.0, 48, 32);
  const State s = bump_state(g, 1.0, 0.4);
  const auto e = energies(s);
  const auto n = state_norms(s, WeightParams(2.0));
  EXPECT_NEAR(e.E_higher - e.E_classical, 0.5 * (n.plain.grad_v + n.plain.lap_u),
              1e-12 * e.E_higher);
  EXPECT_GE(e.E_higher, e.E_classical);
}

TEST(WeightedEnergies, BumpAgainstOracle) {
  const WeightParams w(2.0);
  const auto g = PolarGrid::build_annulus(1.0, 4.0, 512, 16);
  const oracle::Bump b{1.0, 2.0, 3.5};
  const oracle::Bump c{0.4, 1.8, 3.0};
  const State s = bump_state(g, 1.0, 0.4);
  auto wt = [&](double r) { return std::exp(2.0 * static_cast<double>(oracle::psi(0.0, r, 2.0))); };
  const double first = oracle::annulus_integral(1.0, 4.0, kOracleNr, 4, [&](double r, double) {
    return wt(r) * (c(r) * c(r) + b.d1(r) * b.d1(r));
  });
  const double second = oracle::annulus_integral(1.0, 4.0, kOracleNr, 4, [&](double r, double) {
    return wt(r) * (c.d1(r) * c.d1(r) + b.laplacian(r) * b.laplacian(r));
  });
  const auto we = weighted_energies(s, w);
  EXPECT_NEAR(we.Wfirst, first, 0.01 * first);
  EXPECT_NEAR(we.Wsecond, second, 0.01 * second);
}

TEST(WeightedEnergies, ApproachUnweightedForLargeTime) {
  const auto g = PolarGrid::build_annulus(1.0, 5.0, 48, 32);
  State s = bump_state(g, 1.0, 0.4);
  s.t = 1e9;
  const auto n = state_norms(s, WeightParams(2.0));
  EXPECT_NEAR(n.weighted.first(), n.plain.first(), 1e-12 * n.plain.first());
  EXPECT_NEAR(n.weighted.second(), n.plain.second(), 1e-12 * n.plain.second());
}

TEST(WeightedEnergies, HugeFactorOnEmptyRingsIsHarmless) {
  // e^{2 psi(0, 40)} overflows a double; nodes there carry zeros.
  const auto g = PolarGrid::build_annulus(1.0, 40.0, 160, 16);
  const State s{initial_bump(g, 1.0, 2.0, 4.0), Field(g), 0.0};
  const auto we = weighted_energies(s, WeightParams(2.0));
  EXPECT_TRUE(std::isfinite(we.Wfirst));
  EXPECT_TRUE(std::isfinite(we.Wsecond));
  EXPECT_GT(we.Wfirst, 0.0);
}

TEST(WFunctional, ManufacturedStateAgainstOracle) {
  const auto g = PolarGrid::build_annulus(1.0, 2.0, 256, 256);
  const ManufacturedSolution ms(g, {});
  const double t = 0.5, rate = ms.rate(), k = pi;
  const WeightParams w(2.0);
  State s = ms.reference(t);
  const double a = std::exp(-rate * t);
  // u = a sin(k (r-1)) cos(2 th), v = -rate u.
  auto ur = [&](double r, double th) { return a * k * std::cos(k * (r - 1)) * std::cos(2 * th); };
  auto uth = [&](double r, double th) { return -2.0 * a * std::sin(k * (r - 1)) * std::sin(2 * th) / r; };
  auto u = [&](double r, double th) { return a * std::sin(k * (r - 1)) * std::cos(2 * th); };
  auto lap = [&](double r, double th) {
    const double S = std::sin(k * (r - 1)), C = std::cos(k * (r - 1));
    return a * (-k * k * S + k * C / r - 4.0 * S / (r * r)) * std::cos(2 * th);
  };
  auto ew = [&](double r) { return std::exp(2.0 * static_cast<double>(oracle::psi(t, r, 2.0))); };
  const double r2 = rate * rate;
  const double W = oracle::annulus_integral(1.0, 2.0, 1024, 256, [&](double r, double th) {
    const double g2 = ur(r, th) * ur(r, th) + uth(r, th) * uth(r, th);
    const double v2 = r2 * u(r, th) * u(r, th);
    const double l2 = lap(r, th) * lap(r, th);
    const double all = v2 + g2 + r2 * g2 + l2;
    return ew(r) * all + (1.0 + t) * all + u(r, th) * u(r, th);
  });
  EXPECT_NEAR(w_functional(s, w), W, 0.01 * W);
}

TEST(WFunctional, QuadraticUnderScaling) {
  const auto g = PolarGrid::build_annulus(1.0, 5.0, 48, 32);
  State s = bump_state(g, 1.0, 0.4);
  s.t = 2.0;
  const WeightParams w(1.5);
  const double base = w_functional(s, w);
  for (double c : {-3.0, 0.1, 7.0}) {
    State sc{c * s.u, c * s.v, s.t};
    EXPECT_NEAR(w_functional(sc, w), c * c * base, 1e-12 * c * c * base);
  }
}

TEST(Diagnostics, RowInvariants) {
  const auto g = PolarGrid::build_annulus(1.0, 5.0, 48, 32);
  State s = bump_state(g, 1.0, 0.4);
  s.t = 3.0;
  const auto row = diagnostics(s, WeightParams(2.0));
  EXPECT_DOUBLE_EQ(row.t, 3.0);
  EXPECT_LE(row.E_classical, row.E_higher);
  EXPECT_GE(row.W, row.L2_u);
  EXPECT_DOUBLE_EQ(row.sup_u, s.u.sup_norm());
  EXPECT_DOUBLE_EQ(row.outer_ring_amp, s.u.outer_ring_max());
  for (double x : {row.E_classical, row.E_higher, row.L2_u, row.Wfirst, row.Wsecond, row.W,
                   row.sup_u, row.sup_v, row.outer_ring_amp})
    EXPECT_GE(x, 0.0);
}

TEST(DataFunctionals, ZeroData) {
  const auto g = PolarGrid::build_annulus(1.0, 5.0, 16, 16);
  const auto f = data_functionals(Field(g), Field(g), WeightParams(2.0), 1.0);
  EXPECT_EQ(f.I0, 0.0);
  EXPECT_EQ(f.I1, 0.0);
  EXPECT_EQ(f.I2, 0.0);
  EXPECT_EQ(f.J, 0.0);
  EXPECT_EQ(f.I_exp, 0.0);
  EXPECT_THROW(data_functionals(Field(g), Field(g), WeightParams(2.0), 0.0), DomainError);
}

TEST(DataFunctionals, VelocityOnlyAgainstOracle) {
  const auto g = PolarGrid::build_annulus(1.0, 4.0, 512, 16);
  const oracle::Bump c{0.8, 1.8, 3.0};
  const double C0 = 2.5;
  const auto f = data_functionals(Field(g), initial_bump(g, 0.8, 1.8, 3.0), WeightParams(2.0), C0);
  const double u1 = oracle::annulus_integral(1.0, 4.0, kOracleNr, 4, [&](double r, double) { return c(r) * c(r); });
  const double du1 = oracle::annulus_integral(1.0, 4.0, kOracleNr, 4, [&](double r, double) {
    const double d = r * std::log(2.0 * r);
    return d * d * c(r) * c(r);
  });
  const double I0 = u1 + 3.0 * C0 * du1;
  EXPECT_NEAR(f.I0, I0, 0.01 * I0);
  EXPECT_EQ(f.C0, C0);
}

TEST(DataFunctionals, Relations) {
  const auto g = PolarGrid::build_annulus(1.0, 5.0, 48, 32);
  const State s = bump_state(g, 1.0, 0.4);
  const auto f = data_functionals(s.u, s.v, WeightParams(2.0), 1.0);
  const auto n = state_norms(s, WeightParams(2.0));
  const double expect_I2 = 0.5 * (f.I0 + f.I1 + n.plain.v + n.plain.grad_u + n.plain.grad_v + n.plain.lap_u);
  EXPECT_NEAR(f.I2, expect_I2, 1e-12 * f.I2);
  EXPECT_GE(f.J, f.I_exp);
  // I_exp collects the four weighted norms at t = 0.
  EXPECT_NEAR(f.I_exp, n.weighted.first() + n.weighted.second(), 1e-12 * f.I_exp);
}

TEST(DataFunctionals, QuadraticInAmplitude) {
  const auto g = PolarGrid::build_annulus(1.0, 5.0, 48, 32);
  const State s = bump_state(g, 1.0, 0.4);
  const auto f1 = data_functionals(s.u, s.v, WeightParams(1.5), 1.0);
  const auto f2 = data_functionals(3.0 * s.u, 3.0 * s.v, WeightParams(1.5), 1.0);
  EXPECT_NEAR(f2.J, 9.0 * f1.J, 1e-12 * f2.J);
  EXPECT_NEAR(f2.I2, 9.0 * f1.I2, 1e-12 * f2.I2);
}

TEST(FitDecay, ExactPowerLaws) {
  std::vector<double> t, v1, v2, v3;
  for (int k = 0; k <= 99; ++k) {
    const double tk = 1.0 + k;
    t.push_back(tk);
    v1.push_back(5.0 / (1.0 + tk));
    v2.push_back(3.0 * std::pow(1.0 + tk, -1.5));
    v3.push_back(2.0);
  }
  const auto f1 = fit_decay_exponent(t, v1, 1.0, 100.0);
  EXPECT_NEAR(f1.alpha, 1.0, 1e-10);
  EXPECT_NEAR(f1.c, 5.0, 1e-10);
  EXPECT_EQ(f1.samples, 100u);
  EXPECT_NEAR(fit_decay_exponent(t, v2, 1.0, 100.0).alpha, 1.5, 1e-10);
  EXPECT_NEAR(fit_decay_exponent(t, v3, 1.0, 100.0).alpha, 0.0, 1e-12);
}

TEST(FitDecay, Errors) {
  std::vector<double> t{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  std::vector<double> v(t.size(), 1.0);
  EXPECT_THROW(fit_decay_exponent(t, v, 1.0, 5.0), DomainError);
  v[3] = 0.0;
  EXPECT_THROW(fit_decay_exponent(t, v, 0.0, 20.0), DomainError);
  std::vector<double> shorter(5, 1.0);
  EXPECT_THROW(fit_decay_exponent(t, shorter, 0.0, 20.0), DomainError);
}

TEST(LinearRun, EnergiesScaleQuadratically) {
  const auto g = PolarGrid::build_annulus(1.0, 5.0, 32, 32);
  auto final_row = [&](double amp) {
    RunSpec rs;
    rs.grid = g;
    rs.scheme.theta = 1.0;
    rs.scheme.dt = 0.05;
    rs.initial = bump_state(g, amp, 0.3 * amp);
    rs.t_end = 2.0;
    return run(rs).last_sample.row;
  };
  const auto a = final_row(1.0), b = final_row(4.0);
  EXPECT_NEAR(b.E_higher, 16.0 * a.E_higher, 1e-9 * b.E_higher);
  EXPECT_NEAR(b.W, 16.0 * a.W, 1e-9 * b.W);
}

TEST(LinearRun, SpaceTimeIntegralsConverge) {
  const auto g = PolarGrid::build_annulus(1.0, 5.0, 32, 32);
  RunSpec rs;
  rs.grid = g;
  rs.scheme.theta = 1.0;
  rs.scheme.dt = 0.05;
  rs.initial = bump_state(g, 1.0, 0.0);
  rs.t_end = 40.0;
  rs.stride = 10;
  const auto tr = record(rs);
  ASSERT_EQ(tr.outcome.status, RunStatus::completed);
  const auto& last = tr.samples.back().integrals;
  const auto& q3 = tr.samples[tr.samples.size() * 3 / 4].integrals;
  EXPECT_LT(last.classical - q3.classical, 0.1 * last.classical);
  EXPECT_LT(last.higher - q3.higher, 0.1 * last.higher);
  // |u|^2 stays within 1.1x of its initial ratio to I2.
  const auto f = data_functionals(rs.initial.u, rs.initial.v, rs.weight, 1.0);
  const double c0 = tr.samples.front().row.L2_u / f.I2;
  for (const auto& smp : tr.samples) ASSERT_LE(smp.row.L2_u, 1.1 * c0 * f.I2);
}
