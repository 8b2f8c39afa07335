#include <gtest/gtest.h>

#include <cmath>

#include "airy/invariants.hpp"
#include "airy/poisson.hpp"
#include "airy/random.hpp"

using namespace airy;

namespace {

std::vector<SigmaState> points(std::uint64_t seed, std::size_t n, SamplingOptions opt = {}) {
  SplitMix64 rng(seed);
  return sample_sigma_points(rng, n, opt);
}

// Q with the g entries left unscaled (upper triangle, 1-based): Q14 = g(2s^3+a^2)/(a s), Q24 = g.
Mat5 unscaled_Q(const SigmaState& s) {
  const auto [a, sg, k, w, d] = s;
  const double s3 = sg * sg * sg;
  const double g = g_of(s);
  Mat5 Q = Mat5::Zero();
  Q(0, 3) = g * (2 * s3 + a * a) / (a * sg);
  Q(0, 4) = -2 * s3 - a * a;
  Q(1, 3) = g;
  Q(1, 4) = -a * sg;
  Q(2, 3) = -2 * s3;
  Q(3, 4) = -2 * d * s3 - 3 * a * w;
  return Q - Q.transpose();
}

}  // namespace

TEST(FEval, ProportionalToDelta) {
  for (auto [a, s] : {std::pair{3.0, 1.0}, {0.5, 1.0}, {-1.0, -2.0}, {1.0, 0.3}}) {
    EXPECT_EQ(f_eval(a, s, 0.0), 0.0);
    EXPECT_NEAR(f_eval(a, s, 2.0), 2.0 * f_eval(a, s, 1.0), 1e-14 * std::abs(f_eval(a, s, 2.0)));
  }
}

TEST(FEval, SmallSigmaLimit) {
  // Leading behaviour sigma^2 delta / (2 alpha^3); the next terms are O(sigma^5 log|sigma|).
  for (double a : {1.5, -0.8}) {
    for (double s : {1e-2, -1e-2, 1e-3}) {
      const double delta = 0.7;
      const double lead = s * s * delta / (2 * a * a * a);
      const double next = std::pow(std::abs(s), 5) * (1 + std::abs(std::log(std::abs(s))));
      EXPECT_NEAR(f_eval(a, s, delta), lead, 50 * next / std::pow(std::abs(a), 5))
          << a << " " << s;
    }
    EXPECT_NEAR(f_eval(a, 0.0, 0.7), 0.0, 0.0);
  }
}

TEST(GEval, SigmaZeroLimit) {
  for (double a : {2.0, -0.5, 7.0}) {
    EXPECT_DOUBLE_EQ(g_eval(a, 0.0), -1.0 / a);
    // alpha^2 g_alpha = 1 at sigma = 0
    const double h = 1e-6 * std::abs(a);
    const double ga = (g_eval(a + h, 0.0) - g_eval(a - h, 0.0)) / (2 * h);
    EXPECT_NEAR(a * a * ga, 1.0, 1e-8);
  }
}

TEST(FAndG, SingularLocusRejected) {
  EXPECT_THROW(f_eval(0.0, 1.0, 1.0), SingularLocusError);
  EXPECT_THROW(f_eval(2.0, 1.0, 1.0), SingularLocusError);  // alpha^2 = 4 sigma^3
  EXPECT_THROW(g_eval(2.0, 1.0), SingularLocusError);
  EXPECT_THROW(P_f_matrix(SigmaState{1, 0, 0, 0, 0}, 0.0), SingularLocusError);
  EXPECT_THROW(P_f_matrix(SigmaState{0, 1, 0, 0, 0}, 0.0), SingularLocusError);
  EXPECT_THROW(Q_g_matrix(SigmaState{0, 1, 0, 0, 0}), SingularLocusError);
}

TEST(FAndG, CharacteristicEquationsOnBothBranches) {
  const auto pts = points(31, 1000);
  const Report rep = aux_pde_check(pts);
  for (const auto& e : rep.entries) {
    EXPECT_TRUE(e.passed()) << e.identity << " " << e.max_residual;
    EXPECT_GE(e.points, 400u) << e.identity;
  }
}

TEST(FAndG, IndependentOfOmegaAndKappa) {
  const SigmaState a{1.3, 0.7, 0.1, -2.0, 0.4}, b{1.3, 0.7, 2.5, 1.5, 0.4};
  EXPECT_DOUBLE_EQ(f_of(a), f_of(b));
  EXPECT_DOUBLE_EQ(g_of(a), g_of(b));
}

TEST(PfMatrix, Example) {
  const Mat5 P = P_f_matrix(SigmaState{3, 1, 0, 0, 0});
  Mat5 want = Mat5::Zero();
  want(0, 1) = 0.5;
  want(1, 0) = -0.5;
  want(3, 4) = 2.0;
  want(4, 3) = -2.0;
  EXPECT_EQ(P, want);
  const Vec5 dK2(6, -22, 0, 0, 0);
  EXPECT_EQ(P * dK2, Vec5(-11, -3, 0, 0, 0));
  EXPECT_EQ(vf_X_sigma(SigmaState{3, 1, 0, 0, 0}), Vec5(-11, -3, 0, 0, 0));
}

TEST(PfMatrix, AntisymmetricWithZeroKappaRowAndColumn) {
  for (const auto& s : points(32, 500)) {
    const Mat5 P = P_f_matrix(s), Q = Q_g_matrix(s);
    EXPECT_LE((P + P.transpose()).norm(), 1e-14 * P.norm());
    EXPECT_LE((Q + Q.transpose()).norm(), 1e-14 * Q.norm());
    EXPECT_EQ(P.row(2).norm(), 0.0);
    EXPECT_EQ(P.col(2).norm(), 0.0);
  }
}

TEST(QgMatrix, GeneratesYAndXFromK0AndK1) {
  for (const auto& s : points(33, 200)) {
    const Mat5 Q = Q_g_matrix(s);
    const auto dK = grad_K(s);
    EXPECT_EQ(Q * dK[0], vf_Y_sigma(s));
    EXPECT_LE((Q * dK[1] - vf_X_sigma(s)).lpNorm<Eigen::Infinity>(), 0.0);
    const double scale = (Q.cwiseAbs() * dK[2].cwiseAbs()).lpNorm<Eigen::Infinity>();
    EXPECT_LE((Q * dK[2]).lpNorm<Eigen::Infinity>(), 1e-12 * scale);
  }
}

TEST(LenardMagri, AtReferencePoint) {
  const Report rep = lenard_magri_check({SigmaState{3, 1, 0.5, 0.2, 0.7}});
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.entries.size(), 6u);
}

TEST(LenardMagri, AtThousandPoints) {
  const Report rep = lenard_magri_check(points(34, 1000));
  for (const auto& e : rep.entries) EXPECT_TRUE(e.passed()) << e.identity << " " << e.max_residual;
}

TEST(LenardMagri, HoldsForArbitraryConstantFAndG) {
  const auto pts = points(35, 200);
  for (auto [f, g] : {std::pair{0.7, -1.3}, {-50.0, 3.0}, {0.0, 0.0}}) {
    const Report rep = lenard_magri_check(pts, P_f_field([f](const SigmaState&) { return f; }),
                                          Q_g_field([g](const SigmaState&) { return g; }));
    EXPECT_TRUE(rep.passed()) << f << " " << g;
  }
}

TEST(LenardMagri, FailInjectionFlagsOnlyAffectedIdentities) {
  // Perturbing P(alpha, sigma) changes P dK2 (dK2 has alpha and sigma components) only.
  const Bivector5 P = [](const Vec5& x) {
    Mat5 M = P_f_matrix(SigmaState::from_vec(x));
    M(0, 1) += 1e-3;
    M(1, 0) -= 1e-3;
    return M;
  };
  const Report rep = lenard_magri_check(points(36, 50), P);
  for (const auto& e : rep.entries) {
    if (e.identity == "P dK2 = X") {
      EXPECT_FALSE(e.passed());
      EXPECT_EQ(e.failing_points.size(), 50u);
    } else {
      EXPECT_TRUE(e.passed()) << e.identity;
    }
  }
}

TEST(Jacobi, ConstantMatrixIsPoisson) {
  Mat5 A;
  A << 0, 1, -2, 3, 0.5, -1, 0, 4, -1, 2, 2, -4, 0, 0.3, 1, -3, 1, -0.3, 0, 7, -0.5, -2, -1, -7, 0;
  const Bivector5 C = [A](const Vec5&) { return A; };
  const Vec5 x(0.3, -1.2, 2.0, 0.1, 0.9);
  EXPECT_EQ(jacobi_tensor_residual<5>(C, x).absolute, 0.0);
  using TF = TestFunction<5>;
  EXPECT_LE(jacobi_residual<5>(C, TF::coordinate(0), TF::coordinate(1), TF::coordinate(3), x).absolute,
            1e-12);
}

TEST(Jacobi, PfAndQgAtThousandPoints) {
  const Report rep = compatibility_check(points(37, 1000));
  for (const auto& e : rep.entries) EXPECT_TRUE(e.passed()) << e.identity << " " << e.max_residual;
}

TEST(Jacobi, ScalarFormMatchesTensorForm) {
  // The three-function residual on coordinate functions is one entry of the tensor residual.
  using TF = TestFunction<5>;
  const Bivector5 P = P_f_field();
  for (const auto& s : points(38, 50)) {
    const Vec5 x = s.vec();
    const JacobiResidual r = jacobi_residual<5>(P, TF::coordinate(0), TF::coordinate(1),
                                                TF::coordinate(3), x);
    EXPECT_LE(r.relative(), kJacobiTolerance);
  }
}

TEST(Jacobi, LambdaZeroIsP) {
  const auto xs = coordinates(points(39, 20));
  const CheckEntry a = jacobi_sweep<5>("a", P_f_field(), xs);
  const CheckEntry b = jacobi_sweep<5>("b", combine<5>(P_f_field(), Q_g_field(), 0.0), xs);
  EXPECT_EQ(a.max_residual, b.max_residual);
}

TEST(Jacobi, UncorrectedTensorIsNotPoisson) {
  const CheckEntry e = obstruction_check(points(40, 300, {3.0, 0.1, 0.1}));
  EXPECT_TRUE(e.passed()) << "fraction " << e.max_residual;
  EXPECT_GE(e.max_residual, kObstructionFraction);
}

TEST(Jacobi, UncorrectedTensorIsPoissonAtDeltaZero) {
  auto pts = points(41, 50);
  for (auto& s : pts) s.delta = 0.0;
  const CheckEntry e = jacobi_sweep<5>("P' at delta = 0", P_prime_field(), coordinates(pts));
  EXPECT_TRUE(e.passed()) << e.max_residual;
}

TEST(Jacobi, WrongGBreaksCompatibility) {
  const Bivector5 Q = Q_g_field([](const SigmaState& s) { return 1.01 * g_of(s); });
  const Report rep = compatibility_check(points(42, 100), {1.0}, P_f_field(), Q);
  EXPECT_FALSE(rep.find("Jacobi P + 1 Q")->passed());
  EXPECT_TRUE(rep.find("Jacobi P")->passed());
}

TEST(Jacobi, WrongFBreaksPButNotLenardMagri) {
  const Bivector5 P = P_f_field([](const SigmaState& s) { return 1.01 * f_of(s); });
  const auto pts = points(43, 100);
  EXPECT_FALSE(compatibility_check(pts, {}, P).find("Jacobi P")->passed());
  EXPECT_TRUE(lenard_magri_check(pts, P).passed());
}

TEST(Jacobi, UnscaledGEntriesFail) {
  const Bivector5 Q = [](const Vec5& x) { return unscaled_Q(SigmaState::from_vec(x)); };
  const CheckEntry e = jacobi_sweep<5>("unscaled Q", Q, coordinates(points(44, 100)));
  EXPECT_FALSE(e.passed());
  // Any multiple of g in those two entries still satisfies the Lenard-Magri relations.
  EXPECT_TRUE(lenard_magri_check(points(44, 100), P_f_field(), Q).passed());
}

TEST(BiInvolution, KsAndHs) {
  const Report rep = bi_involution_check(points(45, 1000));
  for (const auto& e : rep.entries) {
    EXPECT_TRUE(e.passed()) << e.identity << " " << e.max_residual;
    EXPECT_GT(e.points, 0u);
  }
}

TEST(BiInvolution, K0K1UnderPIsExactlyZero) {
  for (const auto& s : points(46, 100)) {
    const auto dK = grad_K(s);
    EXPECT_EQ(dK[0].dot(P_f_matrix(s) * dK[1]), 0.0);
  }
}

TEST(Rank, IsFourAtGenericPoints) {
  const CheckEntry e = rank_check(points(47, 1000));
  EXPECT_TRUE(e.passed()) << e.max_residual;
  const Vec5 sv = singular_values(P_f_matrix(SigmaState{3, 1, 0, 0, 0}));
  EXPECT_NEAR(sv[0], 2.0, 1e-14);
  EXPECT_NEAR(sv[2], 0.5, 1e-14);
  EXPECT_LE(sv[4], 1e-15);
}

TEST(Reports, IndependentOfPointOrder) {
  auto pts = points(48, 40);
  const Bivector5 Pp = P_prime_field();
  const CheckEntry a = jacobi_sweep<5>("x", Pp, coordinates(pts));
  std::reverse(pts.begin(), pts.end());
  const CheckEntry b = jacobi_sweep<5>("x", Pp, coordinates(pts));
  EXPECT_EQ(a.max_residual, b.max_residual);
  EXPECT_EQ(a.failing_points, b.failing_points);
  EXPECT_FALSE(a.failing_points.empty());
}

TEST(RestrictedPairs, AllIdentitiesHold) {
  SplitMix64 rng(49);
  const auto m3 = sample_m3_points(rng, 500);
  const auto lin = sample_linear_points(rng, 500);
  const Report rep = restricted_pairs(m3, lin);
  for (const auto& e : rep.entries) EXPECT_TRUE(e.passed()) << e.identity << " " << e.max_residual;
  ASSERT_EQ(rep.notes.size(), 1u);
  EXPECT_NE(rep.notes[0].find("mu = zeta"), std::string::npos);
}

TEST(RestrictedPairs, ExactStructuralZeros) {
  const Vec<3> y(3, 1, 0.4);
  EXPECT_EQ(P3_matrix(y) * Vec<3>::UnitZ(), Vec<3>::Zero());
  EXPECT_EQ(Q3_matrix(y) * Vec<3>(6, -22, 0), Vec<3>::Zero());
  EXPECT_EQ(Q3_matrix(y) * Vec<3>::UnitZ(), vf_X3_sigma(y));
}

TEST(RestrictedPairs, OffManifoldRejected) {
  EXPECT_THROW(restricted_pairs({SigmaState{1, 1, 0, 0.5, 0}}, {}), DomainError);
  EXPECT_THROW(restricted_pairs({SigmaState{1, 1, 0, 0, 0.5}}, {}), DomainError);
  EXPECT_THROW(linear_coordinates(LinearState{1, 1, 0, 1}), DomainError);
}

TEST(RestrictedPairs, LinearCoordinatesRoundTrip) {
  SplitMix64 rng(50);
  for (const auto& s : sample_linear_points(rng, 200)) {
    const LinearState back = from_linear_coordinates(linear_coordinates(s));
    EXPECT_LE((back.vec() - s.vec()).lpNorm<Eigen::Infinity>(), 1e-12 * std::max(1.0, s.vec().lpNorm<Eigen::Infinity>()));
  }
}
