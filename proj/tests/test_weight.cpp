#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "sdwave/error.hpp"
#include "sdwave/weight.hpp"

using namespace sdwave;

TEST(Rho0, ValueAndDefiningQuadratic) {
  const double r = rho0_constant();
  EXPECT_NEAR(r, 1.386, 5e-4);
  EXPECT_LT(std::abs(2.0 * r * r + 3.0 * r - 8.0), 1e-12);
  EXPECT_NEAR(6.0 + 2.0 * r, 8.772, 5e-4);
  EXPECT_NEAR(r, static_cast<double>(oracle::rho0()), 1e-15);
}

TEST(EpsWindow, RhoTwo) {
  const auto w = epsilon_window(2.0);
  ASSERT_TRUE(w.has_value());
  EXPECT_NEAR(w->lo, 11.0 / 14.0, 1e-15);
  EXPECT_NEAR(w->lo, 0.785714, 1e-6);
  EXPECT_EQ(w->hi, 1.0);
  EXPECT_TRUE(w->contains(11.0 / 14.0));
  EXPECT_FALSE(w->contains(1.0));
}

TEST(EpsWindow, RhoOneIsEmpty) {
  EXPECT_NEAR(epsilon_window_lower(1.0), 1.2, 1e-15);
  EXPECT_FALSE(epsilon_window(1.0).has_value());
}

TEST(EpsWindow, EmptyAtRho0) {
  EXPECT_NEAR(epsilon_window_lower(rho0_constant()), 1.0, 1e-14);
  EXPECT_FALSE(epsilon_window(rho0_constant()).has_value());
}

TEST(EpsWindow, RejectsNonPositiveRho) {
  EXPECT_THROW(epsilon_window(0.0), DomainError);
  EXPECT_THROW(epsilon_window(-1.0), DomainError);
}

TEST(EpsWindow, NonEmptyExactlyAboveRho0) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(1e-6, 10.0);
  const double r0 = rho0_constant();
  for (int k = 0; k < 10000; ++k) {
    const double rho = U(rng);
    const bool quadratic = 2.0 * rho * rho + 3.0 * rho - 8.0 > 0.0;
    ASSERT_EQ(epsilon_window(rho).has_value(), rho > r0) << rho;
    ASSERT_EQ(quadratic, rho > r0) << rho;
  }
}

TEST(EpsWindow, LowerBoundExceedsTwoOverTwoPlusRho) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(1e-6, 10.0);
  for (int k = 0; k < 10000; ++k) {
    const double rho = U(rng);
    ASSERT_GT(epsilon_window_lower(rho), 2.0 / (2.0 + rho));
  }
}

TEST(WeightParams, Gates) {
  EXPECT_THROW(WeightParams(0.0), DomainError);
  EXPECT_TRUE(WeightParams(2.0).theorem_grade());
  EXPECT_FALSE(WeightParams(1.0).theorem_grade());
  EXPECT_TRUE(WeightParams(2.0, 0.9, true).eps_admissible());
  EXPECT_THROW(WeightParams(2.0, 0.5, true), DomainError);
  EXPECT_THROW(WeightParams(1.0, 0.9, true), DomainError);
  EXPECT_FALSE(WeightParams(2.0, 0.5, false).eps_admissible());
}

TEST(Psi, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(psi(0.0, 0.0, WeightParams(1.0)), 1.0);
  EXPECT_DOUBLE_EQ(psi(1.0, 2.0, WeightParams(2.0)), 0.25);
  const WeightParams w(1.5);
  double prev = psi(0.0, 3.0, w);
  for (double t = 0.5; t < 1e4; t *= 1.7) {
    const double v = psi(t, 3.0, w);
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, prev);
    prev = v;
  }
  EXPECT_LT(psi(1e8, 3.0, w), 1e-10);
}

TEST(Psi, MatchesOracle) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> T(0.0, 100.0), R(0.0, 50.0), P(0.1, 10.0);
  for (int k = 0; k < 2000; ++k) {
    const double t = T(rng), r = R(rng), rho = P(rng);
    const WeightParams w(rho);
    const double ref = static_cast<double>(oracle::psi(t, r, rho));
    ASSERT_NEAR(psi(t, r, w), ref, 1e-13 * ref);
    const auto d = psi_derivatives(t, r, w);
    const double pt = static_cast<double>(oracle::psi_t(t, r, rho));
    ASSERT_NEAR(d.psi_t, pt, 1e-13 * std::abs(pt));
    const double gp = static_cast<double>(oracle::grad_psi(t, r, rho));
    ASSERT_NEAR(d.grad_psi_mag, gp, 1e-13 * gp + 1e-300);
  }
}

TEST(PsiDerivatives, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(psi_derivatives(0.0, 0.0, WeightParams(1.0)).psi_t, -1.0);
  EXPECT_DOUBLE_EQ(psi_derivatives(1.0, 3.0, WeightParams(2.0)).laplacian_psi, 0.125);
  EXPECT_DOUBLE_EQ(psi_derivatives(1.0, 0.0, WeightParams(2.0)).laplacian_psi, 0.125);
  EXPECT_DOUBLE_EQ(psi_derivatives(0.0, 1.0, WeightParams(1.0)).grad_psi_mag, 1.0);
}

TEST(PsiDerivatives, MatchCentredDifferences) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> T(0.0, 50.0), R(0.5, 20.0), P(0.2, 6.0);
  const double h = 1e-4;
  for (int k = 0; k < 500; ++k) {
    const double t = T(rng) + h, r = R(rng), rho = P(rng);
    const WeightParams w(rho);
    const auto d = psi_derivatives(t, r, w);
    const double ft = (psi(t + h, r, w) - psi(t - h, r, w)) / (2 * h);
    const double fr = (psi(t, r + h, w) - psi(t, r - h, w)) / (2 * h);
    const double frr = (psi(t, r + h, w) - 2 * psi(t, r, w) + psi(t, r - h, w)) / (h * h);
    ASSERT_LE(std::abs(ft - d.psi_t), 1e-6 * std::abs(d.psi_t));
    ASSERT_LE(std::abs(fr - d.grad_psi_mag), 1e-6 * std::abs(d.grad_psi_mag));
    // radial Laplacian psi_rr + psi_r / r of the radial function
    const double lap = frr + fr / r;
    ASSERT_LE(std::abs(lap - d.laplacian_psi), 1e-4 * d.laplacian_psi + 1e-9);
    ASSERT_LT(d.psi_t, 0.0);
  }
}

TEST(CheckPointwise, AllHoldAtReferencePoint) {
  const auto rep = check_pointwise(1.0, 2.0, WeightParams(2.0, 0.9));
  EXPECT_TRUE(rep.est15_ok);
  EXPECT_TRUE(rep.est7_ok);
  EXPECT_TRUE(rep.est13_ok);
  EXPECT_TRUE(rep.ratio_bound_ok);
  EXPECT_FALSE(rep.est7_gate_failed);
  EXPECT_GE(rep.worst_margin, 0.0);
}

TEST(CheckPointwise, OriginSlack) {
  const WeightParams w(0.7);
  const auto rep = check_pointwise(0.0, 0.0, w);
  const double pt = psi_derivatives(0.0, 0.0, w).psi_t;
  EXPECT_TRUE(rep.est15_ok);
  EXPECT_DOUBLE_EQ(rep.est15_lhs, -pt * pt);
}

TEST(CheckPointwise, EpsGateReportedNotThrown) {
  const auto rep = check_pointwise(1.0, 2.0, WeightParams(1.0));
  EXPECT_TRUE(rep.est7_gate_failed);
  EXPECT_FALSE(rep.est7_ok);
  EXPECT_TRUE(rep.est15_ok);
  EXPECT_TRUE(rep.est13_ok);
  EXPECT_TRUE(rep.ratio_bound_ok);
}

TEST(CheckPointwise, DenseLatticeBelowRho0) {
  const WeightParams w(1.0);
  for (int i = 0; i <= 200; ++i) {
    for (int j = 0; j <= 200; ++j) {
      const auto rep = check_pointwise(0.5 * i, 0.25 * j, w);
      ASSERT_TRUE(rep.est15_ok && rep.est13_ok) << i << "," << j;
    }
  }
}

TEST(CheckPointwise, RandomTheoremGradeSamples) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> T(0.0, 1000.0), R(0.0, 100.0), U(0.0, 1.0);
  const double r0 = rho0_constant();
  for (int k = 0; k < 20000; ++k) {
    const double rho = r0 + (10.0 - r0) * U(rng) + 1e-9;
    const auto win = *epsilon_window(rho);
    const double eps = win.lo + (win.hi - win.lo) * U(rng) * 0.999999;
    const auto rep = check_pointwise(T(rng), R(rng), WeightParams(rho, eps));
    ASSERT_TRUE(rep.est15_ok && rep.est7_ok && rep.est13_ok && rep.ratio_bound_ok);
  }
}

TEST(CheckPointwise, HoldsAtWindowLowerEdge) {
  // eps = lo is the tightest admissible choice.
  for (double rho : {1.5, 2.0, 3.0, 7.0}) {
    const double eps = epsilon_window(rho)->lo;
    for (double r : {0.0, 1.0, 10.0, 40.0}) {
      for (double t : {0.0, 1.0, 9.0}) {
        ASSERT_TRUE(check_pointwise(t, r, WeightParams(rho, eps)).est7_ok);
      }
    }
  }
}

TEST(CheckPointwise, RatioSupremumApproachesTwoPlusRho) {
  const WeightParams w(2.0);
  const auto rep = check_pointwise(0.0, 1e4, w);
  EXPECT_TRUE(rep.ratio_bound_ok);
  // ratio_lhs = ratio - (2 + rho) tends to 0 from below
  EXPECT_GT(rep.ratio_lhs, -1e-6);
}

TEST(WeightConstants, ReferenceValues) {
  const auto c = weight_constants(WeightParams(2.0, 0.9));
  EXPECT_NEAR(c.c_eps_rho, 1.95, 1e-14);
  EXPECT_NEAR(c.c_tilde, 6.95, 1e-13);
  EXPECT_NEAR(c.c_eps_rho, static_cast<double>(oracle::c_eps_rho(2.0L, 0.9L)), 1e-15);
  EXPECT_DOUBLE_EQ(c_rho(WeightParams(2.0)), 4.0);
}

TEST(WeightConstants, PositiveOverWindowAndRejectOutside) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double rho = 1.4 + 8.0 * U(rng);
    const auto win = *epsilon_window(rho);
    const double eps = win.lo + (1.0 - win.lo) * U(rng) * 0.999;
    const auto c = weight_constants(WeightParams(rho, eps));
    ASSERT_GT(c.c_eps_rho, 0.0);
    ASSERT_GT(c.c_tilde, c.c_eps_rho);
  }
  EXPECT_THROW(weight_constants(WeightParams(2.0, 0.5)), DomainError);
  EXPECT_THROW(weight_constants(WeightParams(2.0)), DomainError);
  EXPECT_THROW(weight_constants(WeightParams(1.0, 0.9)), DomainError);
}
