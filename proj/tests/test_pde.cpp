#include <gtest/gtest.h>

#include <cmath>

#include "airy/pde.hpp"

using namespace airy;

TEST(Step, ConstantStateIsSteady) {
  Grid1D g(-1, 1, 50);
  std::fill(g.eta.begin(), g.eta.end(), 1.0);
  const Grid1D out = step(g, stable_dt(g));
  for (int i = 0; i < g.cells(); ++i) {
    EXPECT_NEAR(out.eta[i], 1.0, 1e-15);
    EXPECT_NEAR(out.m[i], 0.0, 1e-15);
  }
}

TEST(Step, CflViolationRaisedBeforeStepping) {
  Grid1D g(-1, 1, 50);
  std::fill(g.eta.begin(), g.eta.end(), 1.0);
  EXPECT_THROW(step(g, 1.01 * stable_dt(g)), CflViolation);
  EXPECT_THROW(step(g, 0.0), CflViolation);
  EXPECT_NO_THROW(step(g, stable_dt(g)));
}

TEST(Step, MassAndMomentumConservedWhileInterior) {
  const State5 s0{0, -1, 1, 0, 0.3};
  const auto [a, b] = comparison_domain(s0);
  Grid1D g = grid_from_state(s0, a, b, 2000);
  const double m0 = g.mass(), p0 = g.momentum();
  for (int k = 0; k < 1000; ++k) {
    ASSERT_FALSE(touches_boundary(g)) << k;
    g = step(g, stable_dt(g));
    for (double e : g.eta) ASSERT_GE(e, 0.0);
  }
  EXPECT_LE(std::abs(g.mass() - m0), 1e-10 * m0);
  EXPECT_LE(std::abs(g.momentum() - p0), 1e-10 * std::max(1.0, std::abs(p0)));
}

TEST(Step, DamBreakDevelopsRitterFan) {
  // eta = h0 for x < 0, dry for x > 0. Exact fan: eta = (2 sqrt(h0) - x/t)^2 / 9.
  const double h0 = 1.0, t_end = 0.5;
  Grid1D g(-2, 2, 1600);
  for (int i = 0; i < g.cells(); ++i) g.eta[i] = g.x(i) < 0 ? h0 : 0.0;
  double t = 0.0;
  while (t < t_end) {
    const double dt = std::min(stable_dt(g), t_end - t);
    g = step(g, dt);
    t += dt;
  }
  double err = 0.0;
  int count = 0;
  for (int i = 0; i < g.cells(); ++i) {
    const double xi = g.x(i) / t_end;
    if (xi < -0.8 || xi > 1.6) continue;  // stay off the fan edges
    const double exact = std::pow(2 * std::sqrt(h0) - xi, 2) / 9.0;
    err = std::max(err, std::abs(g.eta[i] - exact));
    ++count;
  }
  EXPECT_GT(count, 100);
  EXPECT_LT(err, 0.03);
  for (double e : g.eta) EXPECT_GE(e, 0.0);
}

TEST(GridFromState, CellAveragesAreExact) {
  const State5 s{0, -1, 1, 0, 0};
  const Grid1D g = grid_from_state(s, -3, 3, 600);
  EXPECT_NEAR(g.mass(), 4.0 / 3.0, 1e-13);
  EXPECT_NEAR(g.momentum(), 0.0, 1e-15);
}

TEST(CompareReduction, FirstOrderConvergence) {
  const ComparisonReport rep = compare_reduction({0, -1, 1, 0, 0}, 0.2);
  ASSERT_FALSE(rep.truncated) << rep.reason;
  ASSERT_EQ(rep.errors.size(), 3u);
  EXPECT_TRUE(rep.monotone());
  for (double p : rep.observed_orders) {
    EXPECT_GE(p, 0.7);
    EXPECT_LE(p, 1.3);
  }
}

TEST(CompareReduction, ShortHorizonErrorIsInitializationLevel) {
  const ComparisonReport rep = compare_reduction({0, -1, 1, 0, 0}, 1e-6, {400});
  ASSERT_EQ(rep.errors.size(), 1u);
  EXPECT_LE(rep.errors[0].linf(), rep.errors[0].dx);
}

TEST(CompareReduction, SpreadingPastTheDomainIsTruncated) {
  const ComparisonReport rep = compare_reduction({0, -1, 1, 0, 0}, 20.0, {100});
  EXPECT_TRUE(rep.truncated);
  EXPECT_TRUE(rep.errors.empty());
  EXPECT_FALSE(rep.reason.empty());
}

TEST(CompareReduction, ReportSerializes) {
  const ComparisonReport rep = compare_reduction({0, -1, 1, 0, 0}, 0.05, {100, 200});
  const nlohmann::json j = rep;
  EXPECT_EQ(j.at("errors").size(), 2u);
  EXPECT_EQ(j.at("observed_orders").size(), 1u);
  EXPECT_EQ(j.at("initial").at("gamma"), -1.0);
}

TEST(VertexDrift, MovesUniformly) {
  const VertexDrift d = vertex_drift({0, -1, 1, 0, 0.5}, 0.2, 800);
  EXPECT_NEAR(d.xi_exact, 0.1, 1e-15);
  EXPECT_TRUE(d.within(2.0)) << d.error() << " dx " << d.dx;
}

TEST(Rarefaction, ExactFan) {
  for (auto [x, t] : {std::pair{1.0, 1.0}, {3.0, 2.0}, {-0.7, 0.3}}) {
    const PdeResidual r = rarefaction_residual(x, t);
    EXPECT_LE(std::abs(r.eta), 1e-14 * std::max(1.0, std::abs(x / t)));
    EXPECT_LE(std::abs(r.u), 1e-14 * std::max(1.0, std::abs(x / t)));
  }
  EXPECT_EQ(rarefaction_residual(1.0, 1.0).eta, 0.0);
}

TEST(Rarefaction, PerturbedProfileFails) {
  const PdeResidual r = rarefaction_residual(1.0, 1.0, 1.0 / 8.0);
  EXPECT_GT(std::abs(r.eta) + std::abs(r.u), 1e-3);
}

TEST(Rarefaction, TimeZeroRejected) { EXPECT_THROW(rarefaction_residual(1.0, 0.0), DomainError); }

TEST(Symmetry, ZeroFlowIsIdentity) {
  const SymmetryCheck r = symmetry_solution_check({0.1, -1, 1, 0.2, 0.3}, 0.0, 0.5);
  EXPECT_EQ(r.commutation, 0.0);
  EXPECT_EQ(r.coefficient_map, 0.0);
}

TEST(Symmetry, TransformedSolutionSolvesThePde) {
  const SymmetryCheck r = symmetry_solution_check({0.1, -1, 1, 0.2, 0.3}, 0.5, 0.5);
  EXPECT_EQ(r.coefficient_map, 0.0);
  EXPECT_LE(r.commutation, 1e-12);
  EXPECT_LE(r.residual, 1e-8);
}

TEST(Symmetry, PolynomialResidualDetectsWrongRates) {
  const State5 s{0.1, -1, 1, 0.2, 0.3};
  const State5 good = State5::from_vec(vf_X(s));
  const State5 bad{good.alpha, good.gamma, good.zeta + 0.1, good.omega, good.beta};
  EXPECT_LE(std::abs(polynomial_residual(s, good, 0.4).eta), 1e-14);
  EXPECT_GT(std::abs(polynomial_residual(s, bad, 0.4).eta), 0.05);
}
