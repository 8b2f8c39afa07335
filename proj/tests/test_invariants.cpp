#include <gtest/gtest.h>

#include <cmath>

#include "airy/closed_form.hpp"
#include "airy/integrator.hpp"
#include "airy/invariants.hpp"
#include "airy/random.hpp"
#include "airy/vector_fields.hpp"
#include "airy/verify.hpp"

using namespace airy;

namespace {

// Direct polynomial integration with plain monomial coefficients, independent of airy::Polynomial.
double integrate_monomials(const std::vector<double>& c, double a, double b) {
  double sum = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k)
    sum += c[k] * (std::pow(b, k + 1) - std::pow(a, k + 1)) / double(k + 1);
  return sum;
}

std::vector<double> mul(const std::vector<double>& p, const std::vector<double>& q) {
  std::vector<double> r(p.size() + q.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  return r;
}

std::vector<double> add(std::vector<double> p, const std::vector<double>& q, double k = 1.0) {
  if (p.size() < q.size()) p.resize(q.size(), 0.0);
  for (std::size_t i = 0; i < q.size(); ++i) p[i] += k * q[i];
  return p;
}

}  // namespace

TEST(KValues, Examples) {
  ConservedSet k = K_values({0, 1, 1, 0, 0});
  EXPECT_DOUBLE_EQ(k.K0, -4.0);
  EXPECT_DOUBLE_EQ(k.K1, 0.0);
  EXPECT_DOUBLE_EQ(k.K2, -4.0);
  k = K_values({2, 1, 0, 0, 0});
  EXPECT_DOUBLE_EQ(k.K2, 0.0);
}

TEST(KValues, GammaZeroIsDomainError) { EXPECT_THROW(K_values({1, 0, 1, 1, 1}), DomainError); }

TEST(KValues, ConservedAlongX) {
  const State5 s0{0.1, -1, 1, 0.2, 0.3};
  const auto tr = integrate_X(s0, 0.3);
  ASSERT_EQ(tr.reason, Termination::reached_end);
  const ConservedSet a = K_values(s0);
  const ConservedSet b = K_values(State5::from_vec(tr.final_state()));
  EXPECT_NEAR(a.K0, b.K0, 1e-9);
  EXPECT_NEAR(a.K1, b.K1, 1e-9);
  EXPECT_NEAR(a.K2, b.K2, 1e-9);
}

TEST(HValues, Examples) {
  EXPECT_DOUBLE_EQ(H_values(State5{0, -1, 1, 0, 0}, 1), 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(H_values(State5{5, -1, 1, 0, -3}, 1), 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(H_values(State5{0, -1, 1, 0, 2}, 2), 8.0 / 3.0);
  EXPECT_DOUBLE_EQ(H_by_integration(State5{0, -1, 1, 0, 0}, 1), 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(H_by_integration(State5{0, -1, 1, 0, 0}, 2), 0.0);
}

TEST(HValues, NonphysicalBranchRejected) {
  EXPECT_THROW(H_values(State5{0, 1, 1, 0, 0}, 1), DomainError);
  EXPECT_THROW(H_values(State5{0, -1, 1, 0, 0}, 0), std::invalid_argument);
  EXPECT_THROW(H_values(State5{0, -1, 1, 0, 0}, 6), std::invalid_argument);
  EXPECT_FALSE(conserved_set({0, 1, 1, 0, 0}).H.has_value());
  EXPECT_TRUE(conserved_set({0, -1, 1, 0, 0}).H.has_value());
}

TEST(HValues, FunctionalDependence) {
  SplitMix64 rng(21);
  for (int i = 0; i < 1000; ++i) {
    const ConservedSet k = K_values(sample_physical_state(rng));
    EXPECT_NEAR(H_from_K(k.K0, k.K1, k.K2, 2), H_from_K(k.K0, k.K1, k.K2, 1) * k.K1,
                1e-12 * std::max(1.0, std::abs(H_from_K(k.K0, k.K1, k.K2, 2))));
  }
}

TEST(HValues, IntegralMatchesKRepresentationAtTenThousandStates) {
  SplitMix64 rng(22);
  std::vector<State5> states;
  for (int i = 0; i < 10000; ++i) states.push_back(sample_physical_state(rng));
  const Report rep = h_equivalence_check(states);
  for (const auto& e : rep.entries) EXPECT_TRUE(e.passed()) << e.identity << " " << e.max_residual;
}

TEST(HByIntegration, MatchesIndependentMonomialIntegration) {
  SplitMix64 rng(23);
  for (int i = 0; i < 200; ++i) {
    const State5 s{rng.uniform(-1, 1), -rng.uniform(0.5, 2), rng.uniform(0.5, 2),
                   rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const SupportInterval I = support_interval(s);
    const std::vector<double> eta{s.zeta, s.omega, s.gamma}, u{s.beta, s.alpha};
    const auto e2 = mul(eta, eta), u2 = mul(u, u);
    const std::vector<std::vector<double>> h{
        eta,
        mul(eta, u),
        add(e2, mul(eta, u2)),
        add(mul(e2, u), mul(eta, mul(u2, u)), 1.0 / 3.0),
        add(add(mul(e2, eta), mul(e2, u2), 3.0), mul(eta, mul(u2, u2)), 0.5),
    };
    const double scales[] = {1.0, 1.0, 1.0, 3.0, 2.0};
    for (int n = 1; n <= 5; ++n) {
      const double want = scales[n - 1] * integrate_monomials(h[n - 1], I.x_minus, I.x_plus);
      EXPECT_NEAR(H_by_integration(s, n), want, 1e-10 * std::max(1.0, std::abs(want))) << n;
    }
  }
}

TEST(GradK, SigmaChartExamples) {
  const auto dK = grad_K(SigmaState{3, 1, 0.4, -2, 0.6});
  EXPECT_EQ(dK[0], Vec5(0, 0, 1, 0, 0));
  EXPECT_EQ(dK[1], Vec5(0, 0, 0, 0, 1));
  EXPECT_EQ(dK[2], Vec5(6, -22, 0, 0, 0));
  EXPECT_THROW(grad_K(SigmaState{1, 0, 0, 0, 0}), DomainError);
}

TEST(GradK, MatchesFiniteDifferences) {
  SplitMix64 rng(24);
  auto kvec = [](const Vec5& v) {
    const ConservedSet k = K_values(State5::from_vec(v));
    return Eigen::Vector3d(k.K0, k.K1, k.K2);
  };
  auto kvec_sigma = [](const Vec5& v) {
    return Eigen::Vector3d(v[2], v[4], v[0] * v[0] / (v[1] * v[1]) - 4 * v[1]);
  };
  for (int i = 0; i < 1000; ++i) {
    State5 s{rng.uniform(-3, 3), rng.uniform(0.2, 3), rng.uniform(-3, 3), rng.uniform(-3, 3),
             rng.uniform(-3, 3)};
    if (i % 2) s.gamma = -s.gamma;
    const SigmaState g = to_sigma(s);
    const auto dK = grad_K(s);
    const auto dKs = grad_K(g);
    for (int l = 0; l < 5; ++l) {
      const double h = 1e-6 * std::max(1.0, std::abs(s.vec()[l]));
      Vec5 p = s.vec(), m = s.vec();
      p[l] += h;
      m[l] -= h;
      const Eigen::Vector3d fd = (kvec(p) - kvec(m)) / (2 * h);
      const double hs = 1e-6 * std::max(1.0, std::abs(g.vec()[l]));
      Vec5 ps = g.vec(), ms = g.vec();
      ps[l] += hs;
      ms[l] -= hs;
      const Eigen::Vector3d fds = (kvec_sigma(ps) - kvec_sigma(ms)) / (2 * hs);
      for (int k = 0; k < 3; ++k) {
        EXPECT_NEAR(dK[k][l], fd[k], 1e-6 * std::max(1.0, std::abs(fd[k])));
        EXPECT_NEAR(dKs[k][l], fds[k], 1e-6 * std::max(1.0, std::abs(fds[k])));
      }
    }
  }
}

TEST(GradH, MatchesFiniteDifferences) {
  SplitMix64 rng(25);
  for (int i = 0; i < 200; ++i) {
    const State5 s = sample_physical_state(rng);
    for (int n = 1; n <= 5; ++n) {
      const Vec5 g = grad_H(s, n);
      for (int l = 0; l < 5; ++l) {
        const double h = 1e-6 * std::max(1.0, std::abs(s.vec()[l]));
        Vec5 p = s.vec(), m = s.vec();
        p[l] += h;
        m[l] -= h;
        const double fd = (H_values(State5::from_vec(p), n) - H_values(State5::from_vec(m), n)) /
                          (2 * h);
        EXPECT_NEAR(g[l], fd, 1e-6 * std::max(1.0, std::abs(fd)));
      }
      EXPECT_NEAR(H_values(to_sigma(s), n), H_values(s, n), 1e-10 * std::max(1.0, std::abs(H_values(s, n))));
    }
  }
}

TEST(GradH, AnnihilatesXAndY) {
  SplitMix64 rng(26);
  for (int i = 0; i < 1000; ++i) {
    const State5 s = sample_physical_state(rng);
    for (int n = 1; n <= 5; ++n) {
      const Vec5 g = grad_H(s, n);
      const Vec5 X = vf_X(s), Y = vf_Y(s);
      const double sx = (g.cwiseAbs().array() * X.cwiseAbs().array()).sum() + 1e-300;
      const double sy = (g.cwiseAbs().array() * Y.cwiseAbs().array()).sum() + 1e-300;
      EXPECT_LE(std::abs(g.dot(X)) / sx, 1e-10);
      EXPECT_LE(std::abs(g.dot(Y)) / sy, 1e-10);
    }
  }
}

TEST(LinearInvariants, Examples) {
  EXPECT_DOUBLE_EQ(linear_invariants(LinearState{2, 0, 4, 0}, 0.0).H1, 1.0);
  EXPECT_DOUBLE_EQ(linear_invariants(LinearState{1, 0, 1, 0}, 0.0).H3, 0.0);
  const LinearInvariants h = linear_invariants(LinearState{2, 3, 4, 5}, 3.0);
  EXPECT_DOUBLE_EQ(h.H2, 2.0 * 3.0 / 4.0 - 5.0 + 4.0 / 2.0);
  EXPECT_THROW(linear_invariants(LinearState{0, 1, 1, 1}), DomainError);
  EXPECT_THROW(linear_invariants(LinearState{1, 1, 0, 1}), DomainError);
}

TEST(LinearInvariants, ConservedAlongX4) {
  const LinearState s0{0.7, 0.4, 1.3, -0.2};
  IntegratorOptions opts;
  opts.dt = 1e-3;
  const auto tr = integrate<4>([](const Vec<4>& v) { return vf_X4(LinearState::from_vec(v)); },
                               s0.vec(), 3.0, opts);
  ASSERT_EQ(tr.reason, Termination::reached_end);
  const LinearInvariants h0 = linear_invariants(s0);
  for (const auto& v : tr.states) {
    const LinearInvariants h = linear_invariants(LinearState::from_vec(v));
    EXPECT_NEAR(h.H1, h0.H1, 1e-9);
    EXPECT_NEAR(h.H2, h0.H2, 1e-9);
    EXPECT_NEAR(h.H3, h0.H3, 1e-9);
  }
}

TEST(LinearInvariants, H1AnnihilatedByY4) {
  SplitMix64 rng(27);
  for (int i = 0; i < 100; ++i) {
    const LinearState s{rng.uniform(0.1, 3), rng.uniform(-3, 3), rng.uniform(0.1, 3),
                        rng.uniform(-3, 3)};
    // d(alpha^2/omega) = (2 alpha/omega, 0, -alpha^2/omega^2, 0)
    const Vec<4> dH1(2 * s.alpha / s.omega, 0, -s.alpha * s.alpha / (s.omega * s.omega), 0);
    EXPECT_EQ(dH1.dot(vf_Y4(s)), 0.0);
  }
}
