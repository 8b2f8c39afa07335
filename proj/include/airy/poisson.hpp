#ifndef AIRY_POISSON_HPP
#define AIRY_POISSON_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "airy/closed_form.hpp"
#include "airy/errors.hpp"
#include "airy/invariants.hpp"
#include "airy/random.hpp"
#include "airy/report.hpp"
#include "airy/state.hpp"
#include "airy/types.hpp"
#include "airy/vector_fields.hpp"

namespace airy {

// Matrices are indexed in the sigma chart order (alpha, sigma, kappa, omega, delta).

template <int N>
using BivectorField = std::function<Mat<N>(const Vec<N>&)>;
using Bivector5 = BivectorField<5>;
using SigmaScalar = std::function<double(const SigmaState&)>;

struct SingularGuards {
  double alpha = 1e-10;
  double sigma = 1e-10;
  double discriminant = 1e-10;
};

/// alpha^2 - 4 sigma^3, the quantity whose sign selects the real branch of f and g.
inline double discriminant(double alpha, double sigma) {
  return alpha * alpha - 4.0 * sigma * sigma * sigma;
}

enum class DeltaBranch { positive, negative };

struct AuxScalars {
  double f = 0.0;
  double g = 0.0;
  double discriminant = 0.0;
  DeltaBranch branch = DeltaBranch::positive;
};

namespace detail {

inline void guard(bool ok, const char* what) {
  if (!ok) throw SingularLocusError(what);
}

/// atanh(alpha/sqrt(D)) for D > 0, taken as atanh(sqrt(D)/alpha) when the argument
/// exceeds 1; -atan(sqrt(-D)/alpha) for D < 0. Both shifts are functions of K2 and
/// delta only, and with them f and g have the same Laurent expansion in D on either
/// side of D = 0, where the poles cancel.
inline double branch_angle(double alpha, double D) {
  return D > 0.0 ? atanh_real(alpha / std::sqrt(D)) : -std::atan(std::sqrt(-D) / alpha);
}

}  // namespace detail

/// Solution of X(f) = sigma^2 delta / (2 alpha^2), real on both sides of alpha^2 = 4 sigma^3.
inline double f_eval(double alpha, double sigma, double delta, const SingularGuards& gd = {}) {
  detail::guard(std::abs(alpha) > gd.alpha, "f_eval: alpha on the singular locus alpha = 0");
  const double D = discriminant(alpha, sigma);
  detail::guard(std::abs(D) > gd.discriminant, "f_eval: alpha^2 - 4 sigma^3 on the singular locus");
  const double s2 = sigma * sigma;
  const double s3 = s2 * sigma;
  const double rational = 0.5 * s2 * delta * (8.0 * s3 + alpha * alpha) / (alpha * D * D);
  if (sigma == 0.0) return rational;
  const double aD = std::abs(D);
  const double sign = D > 0.0 ? -1.0 : 1.0;
  return sign * 6.0 * s3 * s2 * delta * detail::branch_angle(alpha, D) / (aD * aD * std::sqrt(aD)) +
         rational;
}

/// Solution of (alpha^2 + 2 sigma^3) g_alpha + alpha sigma g_sigma = 1, i.e. X(g) = -1.
inline double g_eval(double alpha, double sigma, const SingularGuards& gd = {}) {
  const double D = discriminant(alpha, sigma);
  detail::guard(std::abs(D) > gd.discriminant, "g_eval: alpha^2 - 4 sigma^3 on the singular locus");
  const double s3 = sigma * sigma * sigma;
  if (sigma == 0.0) return -alpha / D;
  const double aD = std::abs(D);
  return 4.0 * s3 * detail::branch_angle(alpha, D) / (aD * std::sqrt(aD)) - alpha / D;
}

inline AuxScalars aux_scalars(const SigmaState& s) {
  const double D = discriminant(s.alpha, s.sigma);
  return {f_eval(s.alpha, s.sigma, s.delta), g_eval(s.alpha, s.sigma), D,
          D > 0.0 ? DeltaBranch::positive : DeltaBranch::negative};
}

inline double f_of(const SigmaState& s) { return f_eval(s.alpha, s.sigma, s.delta); }
inline double g_of(const SigmaState& s) { return g_eval(s.alpha, s.sigma); }

/// v ^ w as the matrix v w^T - w v^T.
template <int N>
Mat<N> wedge(const Vec<N>& v, const Vec<N>& w) {
  return v * w.transpose() - w * v.transpose();
}

inline void require_regular(const SigmaState& s, const SingularGuards& gd = {}) {
  detail::guard(std::abs(s.alpha) > gd.alpha, "alpha on the singular locus alpha = 0");
  detail::guard(std::abs(s.sigma) > gd.sigma, "sigma on the singular locus sigma = 0");
}

/// First Poisson tensor for a given value of the auxiliary scalar f.
inline Mat5 P_f_matrix(const SigmaState& s, double f) {
  require_regular(s);
  const auto [a, sg, k, w, d] = s;
  const double s2 = sg * sg;
  const double s3 = s2 * sg;
  Mat5 P = Mat5::Zero();
  P(0, 1) = 0.5 * s3;
  P(0, 3) = s3 * s2 * d / a + 1.5 * s2 * w - 2.0 * f * (2.0 * s3 + a * a) * s3;
  P(1, 3) = -2.0 * f * s3 * sg * a;
  P(3, 4) = 2.0 * s3;
  return P - P.transpose();
}

inline Mat5 P_f_matrix(const SigmaState& s) { return P_f_matrix(s, f_of(s)); }

/// Second Poisson tensor for a given value of the auxiliary scalar g.
inline Mat5 Q_g_matrix(const SigmaState& s, double g) {
  require_regular(s);
  const auto [a, sg, k, w, d] = s;
  const double s3 = sg * sg * sg;
  Mat5 Q = Mat5::Zero();
  Q(0, 3) = -2.0 * s3 * (2.0 * s3 + a * a) * g;
  Q(0, 4) = -2.0 * s3 - a * a;
  Q(1, 3) = -2.0 * a * s3 * sg * g;
  Q(1, 4) = -a * sg;
  Q(2, 3) = -2.0 * s3;
  Q(3, 4) = -2.0 * d * s3 - 3.0 * a * w;
  return Q - Q.transpose();
}

inline Mat5 Q_g_matrix(const SigmaState& s) { return Q_g_matrix(s, g_of(s)); }

inline Bivector5 P_f_field(SigmaScalar f = f_of) {
  return [f = std::move(f)](const Vec5& v) {
    const SigmaState s = SigmaState::from_vec(v);
    return P_f_matrix(s, f(s));
  };
}

inline Bivector5 Q_g_field(SigmaScalar g = g_of) {
  return [g = std::move(g)](const Vec5& v) {
    const SigmaState s = SigmaState::from_vec(v);
    return Q_g_matrix(s, g(s));
  };
}

/// The uncorrected tensor P' (f identically zero), which is not Poisson.
inline Bivector5 P_prime_field() {
  return [](const Vec5& v) { return P_f_matrix(SigmaState::from_vec(v), 0.0); };
}

template <int N>
BivectorField<N> combine(BivectorField<N> P, BivectorField<N> Q, double lambda) {
  return [P = std::move(P), Q = std::move(Q), lambda](const Vec<N>& x) -> Mat<N> {
    return P(x) + lambda * Q(x);
  };
}

// ---------------------------------------------------------------------------
// Jacobi identity by nested finite differences.

/// A test function with analytic gradient.
template <int N>
struct TestFunction {
  std::function<double(const Vec<N>&)> value;
  std::function<Vec<N>(const Vec<N>&)> gradient;

  static TestFunction coordinate(int i) {
    return {[i](const Vec<N>& x) { return x[i]; },
            [i](const Vec<N>&) { return Vec<N>(Vec<N>::Unit(i)); }};
  }
};

struct JacobiResidual {
  double absolute = 0.0;
  /// Largest single product entering the cyclic sum.
  double scale = 0.0;

  double relative() const { return scale > 0.0 ? absolute / scale : absolute; }
};

template <int N>
double fd_step(const Vec<N>& x, int l) {
  return 1e-5 * std::max(1.0, std::abs(x[l]));
}

/// {F,{G,H}} + {G,{H,F}} + {H,{F,G}} at x, with {A,B} = dA . P . dB.
template <int N>
JacobiResidual jacobi_residual(const BivectorField<N>& P, const TestFunction<N>& F,
                               const TestFunction<N>& G, const TestFunction<N>& H,
                               const Vec<N>& x) {
  auto bracket = [&P](const TestFunction<N>& A, const TestFunction<N>& B, const Vec<N>& y) {
    return A.gradient(y).dot(P(y) * B.gradient(y));
  };
  const Mat<N> Px = P(x);
  JacobiResidual r;
  double total = 0.0;
  const std::array<const TestFunction<N>*, 3> fn{&F, &G, &H};
  for (int c = 0; c < 3; ++c) {
    const TestFunction<N>& A = *fn[c];
    const TestFunction<N>& B = *fn[(c + 1) % 3];
    const TestFunction<N>& C = *fn[(c + 2) % 3];
    Vec<N> dBC;
    for (int l = 0; l < N; ++l) {
      const double h = fd_step(x, l);
      Vec<N> xp = x, xm = x;
      xp[l] += h;
      xm[l] -= h;
      dBC[l] = (bracket(B, C, xp) - bracket(B, C, xm)) / (2.0 * h);
    }
    const Vec<N> dA = A.gradient(x);
    for (int l = 0; l < N; ++l)
      for (int m = 0; m < N; ++m) {
        const double term = dA[l] * Px(l, m) * dBC[m];
        total += term;
        r.scale = std::max(r.scale, std::abs(term));
      }
  }
  r.absolute = std::abs(total);
  return r;
}

/// Worst Jacobi residual over all coordinate triples:
/// J^{ijk} = sum_l P^{il} d_l P^{jk} + cyclic.
template <int N>
JacobiResidual jacobi_tensor_residual(const BivectorField<N>& P, const Vec<N>& x) {
  const Mat<N> Px = P(x);
  std::array<Mat<N>, N> dP;
  for (int l = 0; l < N; ++l) {
    const double h = fd_step(x, l);
    Vec<N> xp = x, xm = x;
    xp[l] += h;
    xm[l] -= h;
    dP[l] = (P(xp) - P(xm)) / (2.0 * h);
  }
  JacobiResidual r;
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j)
      for (int k = j + 1; k < N; ++k) {
        double J = 0.0;
        for (int l = 0; l < N; ++l) {
          const double t1 = Px(i, l) * dP[l](j, k);
          const double t2 = Px(j, l) * dP[l](k, i);
          const double t3 = Px(k, l) * dP[l](i, j);
          J += t1 + t2 + t3;
          r.scale = std::max({r.scale, std::abs(t1), std::abs(t2), std::abs(t3)});
        }
        r.absolute = std::max(r.absolute, std::abs(J));
      }
  return r;
}

// ---------------------------------------------------------------------------
// Sampling.

struct SamplingOptions {
  double box = 3.0;
  /// Minimum distance from alpha = 0, sigma = 0 and alpha^2 = 4 sigma^3.
  double margin = 0.1;
  /// Minimum |delta|; P' is Poisson on delta = 0, so obstruction tests need delta away from 0.
  double min_delta = 0.0;
};

/// Uniform points of [-box, box]^5 off the singular loci, alternating the sign of
/// alpha^2 - 4 sigma^3 (first point positive).
inline std::vector<SigmaState> sample_sigma_points(SplitMix64& rng, std::size_t n,
                                                   const SamplingOptions& opt = {}) {
  std::vector<SigmaState> pts;
  pts.reserve(n);
  while (pts.size() < n) {
    const bool want_positive = pts.size() % 2 == 0;
    SigmaState s;
    s.alpha = rng.uniform(-opt.box, opt.box);
    s.sigma = rng.uniform(-opt.box, opt.box);
    s.kappa = rng.uniform(-opt.box, opt.box);
    s.omega = rng.uniform(-opt.box, opt.box);
    s.delta = rng.uniform(-opt.box, opt.box);
    const double D = discriminant(s.alpha, s.sigma);
    if (std::abs(s.alpha) < opt.margin || std::abs(s.sigma) < opt.margin ||
        std::abs(D) < opt.margin || std::abs(s.delta) < opt.min_delta || (D > 0.0) != want_positive)
      continue;
    pts.push_back(s);
  }
  return pts;
}

// ---------------------------------------------------------------------------
// Verification sweeps.

namespace detail {

/// |M dK - V|_inf relative to the size of the products that form M dK and of V.
template <int N>
double relative_identity_residual(const Mat<N>& M, const Vec<N>& dK, const Vec<N>& V) {
  const double abs = (M * dK - V).template lpNorm<Eigen::Infinity>();
  const double scale = std::max((M.cwiseAbs() * dK.cwiseAbs()).template lpNorm<Eigen::Infinity>(),
                                V.template lpNorm<Eigen::Infinity>());
  return scale > 0.0 ? abs / scale : abs;
}

/// |dA . M . dB| relative to the largest single product.
inline double relative_bracket(const Mat5& M, const Vec5& dA, const Vec5& dB) {
  const double value = dA.dot(M * dB);
  const double scale = (dA.cwiseAbs().asDiagonal() * M.cwiseAbs() * dB.cwiseAbs().asDiagonal())
                           .maxCoeff();
  return scale > 0.0 ? std::abs(value) / scale : std::abs(value);
}

}  // namespace detail

constexpr double kLenardTolerance = 1e-9;
constexpr double kJacobiTolerance = 1e-5;
constexpr double kObstructionThreshold = 1e-3;
constexpr double kObstructionFraction = 0.9;

/// P dK0 = 0, P dK1 = Y, P dK2 = X, Q dK0 = Y, Q dK1 = X, Q dK2 = 0.
inline Report lenard_magri_check(const std::vector<SigmaState>& points,
                                 const Bivector5& P = P_f_field(),
                                 const Bivector5& Q = Q_g_field()) {
  Report rep{"lenard-magri", {}, {}};
  const std::array<const char*, 6> names{"P dK0 = 0", "P dK1 = Y", "P dK2 = X",
                                         "Q dK0 = Y", "Q dK1 = X", "Q dK2 = 0"};
  for (const char* n : names) rep.entries.emplace_back(n, kLenardTolerance);
  for (const SigmaState& s : points) {
    const Vec5 x = s.vec();
    const auto dK = grad_K(s);
    const Vec5 X = vf_X_sigma(s);
    const Vec5 Y = vf_Y_sigma(s);
    const Vec5 zero = Vec5::Zero();
    const Mat5 Pm = P(x);
    const Mat5 Qm = Q(x);
    const std::array<Vec5, 6> target{zero, Y, X, Y, X, zero};
    for (int i = 0; i < 3; ++i) {
      rep.entries[i].add(detail::relative_identity_residual<5>(Pm, dK[i], target[i]), x);
      rep.entries[3 + i].add(detail::relative_identity_residual<5>(Qm, dK[i], target[3 + i]), x);
    }
  }
  rep.finalize();
  return rep;
}

template <int N>
CheckEntry jacobi_sweep(const std::string& name, const BivectorField<N>& P,
                        const std::vector<Vec<N>>& points, double tol = kJacobiTolerance) {
  CheckEntry e(name, tol);
  for (const Vec<N>& x : points) e.add(jacobi_tensor_residual<N>(P, x).relative(), x);
  e.finalize();
  return e;
}

inline std::vector<Vec5> coordinates(const std::vector<SigmaState>& points) {
  std::vector<Vec5> xs;
  xs.reserve(points.size());
  for (const auto& s : points) xs.push_back(s.vec());
  return xs;
}

/// Jacobi identity of P, Q and P + lambda Q.
inline Report compatibility_check(const std::vector<SigmaState>& points,
                                  const std::vector<double>& lambdas = {-1.0, 0.5, 1.0, 2.0},
                                  const Bivector5& P = P_f_field(),
                                  const Bivector5& Q = Q_g_field()) {
  Report rep{"jacobi-compatibility", {}, {}};
  const std::vector<Vec5> xs = coordinates(points);
  rep.entries.push_back(jacobi_sweep<5>("Jacobi P", P, xs));
  rep.entries.push_back(jacobi_sweep<5>("Jacobi Q", Q, xs));
  for (double lam : lambdas) {
    rep.entries.push_back(
        jacobi_sweep<5>("Jacobi P + " + format_number(lam) + " Q", combine<5>(P, Q, lam), xs));
  }
  return rep;
}

/// Fraction of points at which P' fails Jacobi by more than kObstructionThreshold.
/// The entry fails (listing the points where P' looked Poisson) when the fraction
/// is below kObstructionFraction.
inline CheckEntry obstruction_check(const std::vector<SigmaState>& points) {
  CheckEntry e("P' (f = 0) violates Jacobi", kObstructionThreshold);
  const Bivector5 Pp = P_prime_field();
  std::vector<std::vector<double>> quiet;
  std::size_t violating = 0;
  for (const SigmaState& s : points) {
    const Vec5 x = s.vec();
    const double r = jacobi_tensor_residual<5>(Pp, x).relative();
    if (r > kObstructionThreshold) {
      ++violating;
    } else {
      quiet.emplace_back(x.data(), x.data() + 5);
    }
  }
  e.points = points.size();
  const double fraction =
      points.empty() ? 1.0 : static_cast<double>(violating) / static_cast<double>(points.size());
  e.max_residual = fraction;
  if (fraction < kObstructionFraction) e.failing_points = std::move(quiet);
  e.finalize();
  return e;
}

/// Pairwise brackets of K0..K2 (tolerance 1e-10) and of H1..H5 (1e-8, points with kappa <= 0,
/// where K0 = -4 kappa >= 0).
inline Report bi_involution_check(const std::vector<SigmaState>& points,
                                  const Bivector5& P = P_f_field(),
                                  const Bivector5& Q = Q_g_field()) {
  Report rep{"bi-involution", {}, {}};
  CheckEntry kP("{K_i, K_j}_P = 0", 1e-10), kQ("{K_i, K_j}_Q = 0", 1e-10);
  CheckEntry hP("{H_i, H_j}_P = 0", 1e-8), hQ("{H_i, H_j}_Q = 0", 1e-8);
  for (const SigmaState& s : points) {
    const Vec5 x = s.vec();
    const Mat5 Pm = P(x);
    const Mat5 Qm = Q(x);
    const auto dK = grad_K(s);
    double rp = 0.0, rq = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        rp = std::max(rp, detail::relative_bracket(Pm, dK[i], dK[j]));
        rq = std::max(rq, detail::relative_bracket(Qm, dK[i], dK[j]));
      }
    kP.add(rp, x);
    kQ.add(rq, x);
    if (s.kappa > 0.0) continue;
    std::array<Vec5, kMaxHamiltonian> dH;
    for (int n = 1; n <= kMaxHamiltonian; ++n) dH[n - 1] = grad_H(s, n);
    rp = rq = 0.0;
    for (int i = 0; i < kMaxHamiltonian; ++i)
      for (int j = i + 1; j < kMaxHamiltonian; ++j) {
        rp = std::max(rp, detail::relative_bracket(Pm, dH[i], dH[j]));
        rq = std::max(rq, detail::relative_bracket(Qm, dH[i], dH[j]));
      }
    hP.add(rp, x);
    hQ.add(rq, x);
  }
  rep.entries = {kP, kQ, hP, hQ};
  rep.finalize();
  return rep;
}

/// Singular values of P in decreasing order.
inline Vec5 singular_values(const Mat5& M) {
  return Eigen::JacobiSVD<Mat5>(M).singularValues();
}

/// Rank four: s4 > 1e-8 s1 and s5 < 1e-10 s1. The residual is s5 / s1.
inline CheckEntry rank_check(const std::vector<SigmaState>& points,
                             const Bivector5& P = P_f_field()) {
  CheckEntry e("rank P = 4", 1e-10);
  for (const SigmaState& s : points) {
    const Vec5 x = s.vec();
    const Vec5 sv = singular_values(P(x));
    const double ratio5 = sv[0] > 0.0 ? sv[4] / sv[0] : 0.0;
    const bool ok = sv[3] > 1e-8 * sv[0] && sv[4] < 1e-10 * sv[0];
    e.record(ratio5, ok, std::vector<double>(x.data(), x.data() + 5));
  }
  e.finalize();
  return e;
}

// ---------------------------------------------------------------------------
// Characteristic equations of f and g.

/// Derivative of phi along the flow of X_sigma at s, by a five-point stencil whose
/// step is a fixed fraction of the distance to the nearest singular locus.
template <class Fn>
double derivative_along_X(Fn&& phi, const SigmaState& s) {
  const Vec5 X = vf_X_sigma(s);
  const double norm = X.norm();
  if (norm == 0.0) return 0.0;
  const double D = discriminant(s.alpha, s.sigma);
  const double dist_D = std::abs(D) / std::hypot(2.0 * s.alpha, 12.0 * s.sigma * s.sigma);
  const double reach = std::min({std::abs(s.alpha), std::abs(s.sigma), dist_D});
  const double h = 1e-3 * reach / norm;
  auto at = [&](double e) { return phi(SigmaState::from_vec(s.vec() + e * X)); };
  return (-at(2 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2 * h)) / (12.0 * h);
}

inline double f_pde_residual(const SigmaState& s) {
  const double target = s.sigma * s.sigma * s.delta / (2.0 * s.alpha * s.alpha);
  return std::abs(derivative_along_X(f_of, s) - target);
}

inline double g_pde_residual(const SigmaState& s) {
  return std::abs(derivative_along_X(g_of, s) + 1.0);
}

constexpr double kAuxPdeTolerance = 1e-6;

inline Report aux_pde_check(const std::vector<SigmaState>& points) {
  Report rep{"f-g-characteristics", {}, {}};
  CheckEntry fp("X(f) = sigma^2 delta / (2 alpha^2), Delta > 0", kAuxPdeTolerance);
  CheckEntry fn("X(f) = sigma^2 delta / (2 alpha^2), Delta < 0", kAuxPdeTolerance);
  CheckEntry gp("X(g) = -1, Delta > 0", kAuxPdeTolerance);
  CheckEntry gn("X(g) = -1, Delta < 0", kAuxPdeTolerance);
  for (const SigmaState& s : points) {
    const bool pos = discriminant(s.alpha, s.sigma) > 0.0;
    (pos ? fp : fn).add(f_pde_residual(s), s.vec());
    (pos ? gp : gn).add(g_pde_residual(s), s.vec());
  }
  rep.entries = {fp, fn, gp, gn};
  rep.finalize();
  return rep;
}

// ---------------------------------------------------------------------------
// Restricted pairs.

/// X on omega = delta = 0 in coordinates (alpha, sigma, kappa).
inline Vec<3> vf_X3_sigma(const Vec<3>& y) {
  const double a = y[0], s = y[1];
  return Vec<3>(-a * a - 2.0 * s * s * s, -a * s, 0.0);
}

inline Vec<3> vf_X_alpha(const Vec<3>& y) { return Vec<3>(y[1] * y[1] / (2.0 * y[0]), 0.0, 0.0); }

inline Mat<3> P3_matrix(const Vec<3>& y) { return wedge<3>(vf_X3_sigma(y), vf_X_alpha(y)); }

inline Mat<3> Q3_matrix(const Vec<3>& y) { return wedge<3>(vf_X3_sigma(y), Vec<3>::UnitZ()); }

/// Coordinates (alpha, mu, H1, H2) on the linear-linear manifold, with mu = zeta.
inline Vec<4> linear_coordinates(const LinearState& s) {
  const LinearInvariants inv = linear_invariants(s);
  return Vec<4>(s.alpha, s.zeta, inv.H1, inv.H2);
}

inline LinearState from_linear_coordinates(const Vec<4>& y) {
  const double a = y[0], mu = y[1], H1 = y[2], H2 = y[3];
  return {a, mu, a * a / H1, mu * H1 / a - H2 + a / H1};
}

/// Pushforward of a tangent vector (d alpha, d zeta, d omega, d beta) to (alpha, mu, H1, H2).
inline Vec<4> push_to_linear_coordinates(const LinearState& s, const Vec<4>& v) {
  const auto [a, z, w, b] = s;
  return Vec<4>(v[0], v[1], 2.0 * a * v[0] / w - a * a * v[2] / (w * w),
                (z / w - w / (a * a)) * v[0] + (a / w) * v[1] + (1.0 / a - a * z / (w * w)) * v[2] -
                    v[3]);
}

inline Vec<4> X4_linear_coordinates(const Vec<4>& y) {
  const LinearState s = from_linear_coordinates(y);
  return Vec<4>(-s.alpha * s.alpha, -s.alpha * s.zeta - s.beta * s.omega, 0.0, 0.0);
}

inline Vec<4> Y4_linear_coordinates(const Vec<4>& y) {
  return Vec<4>(0.0, y[0] * y[0] / y[2], 0.0, 0.0);
}

inline Mat<4> P1_matrix(const Vec<4>& y) {
  const Vec<4> X = X4_linear_coordinates(y), Y = Y4_linear_coordinates(y);
  return wedge<4>(Y, Vec<4>::Unit(2)) + wedge<4>(X, Vec<4>::Unit(3)) - wedge<4>(Y, X) / y[0];
}

inline Mat<4> P2_matrix(const Vec<4>& y) {
  const Vec<4> X = X4_linear_coordinates(y), Y = Y4_linear_coordinates(y);
  const double c = y[1] / (y[0] * y[0]) + std::log(std::abs(y[0])) / (y[2] * y[2]);
  return wedge<4>(Y, Vec<4>::Unit(3)) + wedge<4>(X, Vec<4>::Unit(2)) + c * wedge<4>(Y, X);
}

inline constexpr const char* kMuConvention = "mu = zeta (mu obeys zeta's evolution law under X4)";

inline void require_on_M3(const SigmaState& s) {
  if (s.omega != 0.0 || s.delta != 0.0) {
    throw DomainError("restricted pair P3, Q3: point must satisfy omega = delta = 0");
  }
  require_regular(s);
}

/// Restricted pair on omega = delta = 0 and the linear-linear pair P1, P2.
inline Report restricted_pairs(const std::vector<SigmaState>& m3_points,
                               const std::vector<LinearState>& linear_points) {
  Report rep{"restricted-pairs", {}, {kMuConvention}};
  CheckEntry p3k("P3 dkappa = 0", kLenardTolerance), p3h("P3 dH = X3", kLenardTolerance);
  CheckEntry q3k("Q3 dkappa = X3", kLenardTolerance), q3h("Q3 dH = 0", kLenardTolerance);
  std::vector<Vec<3>> y3;
  for (const SigmaState& s : m3_points) {
    require_on_M3(s);
    const Vec<3> y(s.alpha, s.sigma, s.kappa);
    y3.push_back(y);
    const Vec<3> dk = Vec<3>::UnitZ();
    const Vec<3> dH(2.0 * s.alpha / (s.sigma * s.sigma),
                    -2.0 * s.alpha * s.alpha / (s.sigma * s.sigma * s.sigma) - 4.0, 0.0);
    const Vec<3> X3 = vf_X3_sigma(y);
    const Mat<3> P3 = P3_matrix(y), Q3 = Q3_matrix(y);
    p3k.add(detail::relative_identity_residual<3>(P3, dk, Vec<3>::Zero()), y);
    p3h.add(detail::relative_identity_residual<3>(P3, dH, X3), y);
    q3k.add(detail::relative_identity_residual<3>(Q3, dk, X3), y);
    q3h.add(detail::relative_identity_residual<3>(Q3, dH, Vec<3>::Zero()), y);
  }
  const BivectorField<3> P3f = P3_matrix, Q3f = Q3_matrix;

  CheckEntry pushX("X4 pushforward", kLenardTolerance), pushY("Y4 pushforward", kLenardTolerance);
  CheckEntry p1a("P1 dH1 = Y4", kLenardTolerance), p1b("P1 dH2 = X4", kLenardTolerance);
  CheckEntry p2a("P2 dH1 = X4", kLenardTolerance), p2b("P2 dH2 = Y4", kLenardTolerance);
  std::vector<Vec<4>> y4;
  for (const LinearState& s : linear_points) {
    const Vec<4> y = linear_coordinates(s);
    y4.push_back(y);
    const Vec<4> X = X4_linear_coordinates(y), Y = Y4_linear_coordinates(y);
    pushX.add(detail::relative_identity_residual<4>(Mat<4>::Identity(),
                                                    push_to_linear_coordinates(s, vf_X4(s)), X),
              y);
    pushY.add(detail::relative_identity_residual<4>(Mat<4>::Identity(),
                                                    push_to_linear_coordinates(s, vf_Y4(s)), Y),
              y);
    const Vec<4> dH1 = Vec<4>::Unit(2), dH2 = Vec<4>::Unit(3);
    const Mat<4> P1 = P1_matrix(y), P2 = P2_matrix(y);
    p1a.add(detail::relative_identity_residual<4>(P1, dH1, Y), y);
    p1b.add(detail::relative_identity_residual<4>(P1, dH2, X), y);
    p2a.add(detail::relative_identity_residual<4>(P2, dH1, X), y);
    p2b.add(detail::relative_identity_residual<4>(P2, dH2, Y), y);
  }
  const BivectorField<4> P1f = P1_matrix, P2f = P2_matrix;
  rep.entries = {p3k, p3h, q3k, q3h, pushX, pushY, p1a, p1b, p2a, p2b};
  rep.entries.push_back(jacobi_sweep<3>("Jacobi P3", P3f, y3));
  rep.entries.push_back(jacobi_sweep<3>("Jacobi Q3", Q3f, y3));
  rep.entries.push_back(jacobi_sweep<3>("Jacobi P3 + Q3", combine<3>(P3f, Q3f, 1.0), y3));
  rep.entries.push_back(jacobi_sweep<4>("Jacobi P1", P1f, y4));
  rep.entries.push_back(jacobi_sweep<4>("Jacobi P2", P2f, y4));
  rep.finalize();
  return rep;
}

/// Points on omega = delta = 0 off the singular loci.
inline std::vector<SigmaState> sample_m3_points(SplitMix64& rng, std::size_t n,
                                                const SamplingOptions& opt = {}) {
  std::vector<SigmaState> pts = sample_sigma_points(rng, n, opt);
  for (auto& s : pts) s.omega = s.delta = 0.0;
  return pts;
}

/// Linear-linear states with |alpha|, |omega| >= margin.
inline std::vector<LinearState> sample_linear_points(SplitMix64& rng, std::size_t n,
                                                     const SamplingOptions& opt = {}) {
  std::vector<LinearState> pts;
  pts.reserve(n);
  while (pts.size() < n) {
    LinearState s{rng.uniform(-opt.box, opt.box), rng.uniform(-opt.box, opt.box),
                  rng.uniform(-opt.box, opt.box), rng.uniform(-opt.box, opt.box)};
    if (std::abs(s.alpha) < opt.margin || std::abs(s.omega) < opt.margin) continue;
    pts.push_back(s);
  }
  return pts;
}

}  // namespace airy

#endif  // AIRY_POISSON_HPP
