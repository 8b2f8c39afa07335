#ifndef AIRY_STATE_HPP
#define AIRY_STATE_HPP

#include <cmath>
#include <utility>

#include "airy/errors.hpp"
#include "airy/types.hpp"

namespace airy {

// Reduced fields: eta(x,t) = gamma x^2 + omega x + zeta, u(x,t) = alpha x + beta.
//
// Cube roots of gamma are real (negative for gamma < 0) and gamma^{4/3} is
// always taken as (gamma^{1/3})^4 >= 0. This is the branch on which K0 and
// kappa stay real for the physical regime gamma < 0.

/// Polynomial coefficients of a parabolic/linear field pair; requires gamma != 0.
struct State5 {
  double alpha = 0.0;
  double gamma = 0.0;
  double zeta = 0.0;
  double omega = 0.0;
  double beta = 0.0;

  Vec5 vec() const { return Vec5(alpha, gamma, zeta, omega, beta); }
  static State5 from_vec(const Vec5& v) { return {v[0], v[1], v[2], v[3], v[4]}; }
  friend bool operator==(const State5&, const State5&) = default;
};

/// Adapted chart (alpha, sigma, kappa, omega, delta) in which K0 = kappa, K1 = delta.
struct SigmaState {
  double alpha = 0.0;
  double sigma = 0.0;
  double kappa = 0.0;
  double omega = 0.0;
  double delta = 0.0;

  Vec5 vec() const { return Vec5(alpha, sigma, kappa, omega, delta); }
  static SigmaState from_vec(const Vec5& v) { return {v[0], v[1], v[2], v[3], v[4]}; }
  friend bool operator==(const SigmaState&, const SigmaState&) = default;
};

/// Vertex chart: xi is the parabola vertex abscissa, mu its height.
struct VertexState {
  double alpha = 0.0;
  double gamma = 0.0;
  double xi = 0.0;
  double mu = 0.0;
  double delta = 0.0;

  Vec5 vec() const { return Vec5(alpha, gamma, xi, mu, delta); }
  friend bool operator==(const VertexState&, const VertexState&) = default;
};

/// Linear-linear configuration (gamma == 0): eta = omega x + zeta, u = alpha x + beta.
struct LinearState {
  double alpha = 0.0;
  double zeta = 0.0;
  double omega = 0.0;
  double beta = 0.0;

  Vec<4> vec() const { return Vec<4>(alpha, zeta, omega, beta); }
  static LinearState from_vec(const Vec<4>& v) { return {v[0], v[1], v[2], v[3]}; }
  friend bool operator==(const LinearState&, const LinearState&) = default;
};

/// Parity-preserving configuration (omega == beta == 0).
struct SymState3 {
  double alpha = 0.0;
  double gamma = 0.0;
  double zeta = 0.0;

  Vec<3> vec() const { return Vec<3>(alpha, gamma, zeta); }
  static SymState3 from_vec(const Vec<3>& v) { return {v[0], v[1], v[2]}; }
  State5 embed() const { return {alpha, gamma, zeta, 0.0, 0.0}; }
};

struct FieldValue {
  double eta = 0.0;
  double u = 0.0;
};

struct SupportInterval {
  double x_minus = 0.0;
  double x_plus = 0.0;

  double width() const { return x_plus - x_minus; }
  double center() const { return 0.5 * (x_minus + x_plus); }
};

/// (gamma^{1/3})^4, never negative.
inline double gamma_four_thirds(double gamma) {
  const double s = std::cbrt(gamma);
  return (s * s) * (s * s);
}

inline void require_nonzero_gamma(double gamma, const char* where) {
  if (gamma == 0.0) {
    throw DomainError(std::string(where) +
                      ": gamma == 0 is the linear-linear manifold, use LinearState");
  }
}

inline SigmaState to_sigma(const State5& s) {
  require_nonzero_gamma(s.gamma, "to_sigma");
  const double sigma = std::cbrt(s.gamma);
  const double s4 = (sigma * sigma) * (sigma * sigma);
  // sigma^3 can differ from gamma in the last bit; using it here makes from_sigma
  // subtract exactly the terms added here, which matters when |omega/gamma| is large.
  const double g3 = sigma * sigma * sigma;
  const double disc = s.omega * s.omega - 4.0 * g3 * s.zeta;
  return {s.alpha, sigma, -disc / (4.0 * s4), s.omega, s.beta - s.alpha * s.omega / (2.0 * g3)};
}

inline State5 from_sigma(const SigmaState& s) {
  if (s.sigma == 0.0) {
    throw DomainError("from_sigma: sigma == 0 is the linear-linear manifold, use LinearState");
  }
  const double gamma = s.sigma * s.sigma * s.sigma;
  return {s.alpha, gamma, s.sigma * s.kappa + s.omega * s.omega / (4.0 * gamma), s.omega,
          s.delta + s.alpha * s.omega / (2.0 * gamma)};
}

inline VertexState to_vertex(const State5& s) {
  require_nonzero_gamma(s.gamma, "to_vertex");
  return {s.alpha, s.gamma, -s.omega / (2.0 * s.gamma),
          s.zeta - s.omega * s.omega / (4.0 * s.gamma),
          s.beta - s.alpha * s.omega / (2.0 * s.gamma)};
}

inline State5 from_vertex(const VertexState& v) {
  require_nonzero_gamma(v.gamma, "from_vertex");
  const double omega = -2.0 * v.gamma * v.xi;
  return {v.alpha, v.gamma, v.mu + v.gamma * v.xi * v.xi, omega, v.delta - v.alpha * v.xi};
}

inline FieldValue eval_fields(const State5& s, double x) {
  return {(s.gamma * x + s.omega) * x + s.zeta, s.alpha * x + s.beta};
}

inline FieldValue eval_fields(const LinearState& s, double x) {
  return {s.omega * x + s.zeta, s.alpha * x + s.beta};
}

/// Interval where eta > 0 for a downward parabola with two real roots.
inline SupportInterval support_interval(const State5& s) {
  const double disc = s.omega * s.omega - 4.0 * s.gamma * s.zeta;
  if (!(s.gamma < 0.0) || !(disc > 0.0)) {
    throw UnsupportedConfiguration(
        "support_interval: requires gamma < 0 and omega^2 - 4 gamma zeta > 0");
  }
  // Cancellation-free quadratic roots.
  const double q = -0.5 * (s.omega + std::copysign(std::sqrt(disc), s.omega));
  double r1 = q / s.gamma;
  double r2 = s.zeta / q;
  if (r1 > r2) std::swap(r1, r2);
  return {r1, r2};
}

}  // namespace airy

#endif  // AIRY_STATE_HPP
