#ifndef AIRY_VECTOR_FIELDS_HPP
#define AIRY_VECTOR_FIELDS_HPP

#include <cmath>

#include "airy/state.hpp"
#include "airy/types.hpp"

namespace airy {

/// Time evolution of the parabolic reduction, components in (alpha, gamma, zeta, omega, beta).
inline Tangent5 vf_X(const State5& s) {
  const auto [a, g, z, w, b] = s;
  return Tangent5(-a * a - 2.0 * g, -3.0 * a * g, -a * z - b * w, -2.0 * b * g - 2.0 * a * w,
                  -a * b - w);
}

/// Generator of x-translations on the reduction.
inline Tangent5 vf_Y(const State5& s) { return Tangent5(0.0, 0.0, s.omega, 2.0 * s.gamma, s.alpha); }

/// X in the chart (alpha, sigma, kappa, omega, delta).
inline Tangent5 vf_X_sigma(const SigmaState& s) {
  const double s3 = s.sigma * s.sigma * s.sigma;
  return Tangent5(-s.alpha * s.alpha - 2.0 * s3, -s.alpha * s.sigma, 0.0,
                  -3.0 * s.alpha * s.omega - 2.0 * s.delta * s3, 0.0);
}

/// Y in the chart (alpha, sigma, kappa, omega, delta).
inline Tangent5 vf_Y_sigma(const SigmaState& s) {
  return Tangent5(0.0, 0.0, 0.0, 2.0 * s.sigma * s.sigma * s.sigma, 0.0);
}

/// Restriction of X to omega == beta == 0, components (alpha, gamma, zeta).
inline Vec<3> vf_X3(const SymState3& s) {
  return Vec<3>(-s.alpha * s.alpha - 2.0 * s.gamma, -3.0 * s.alpha * s.gamma, -s.alpha * s.zeta);
}

/// Restriction of X to gamma == 0, components (alpha, zeta, omega, beta).
inline Vec<4> vf_X4(const LinearState& s) {
  const auto [a, z, w, b] = s;
  return Vec<4>(-a * a, -a * z - b * w, -2.0 * a * w, -a * b - w);
}

/// Restriction of Y to gamma == 0.
inline Vec<4> vf_Y4(const LinearState& s) { return Vec<4>(0.0, s.omega, 0.0, s.alpha); }

/// Flow of the scaling symmetry eta -> e^{2s} eta(x e^{-s}), u -> e^s u(x e^{-s})
/// on the polynomial coefficients.
inline State5 lie_symmetry_action(const State5& s, double flow) {
  const double e = std::exp(flow);
  return {s.alpha, s.gamma, e * e * s.zeta, e * s.omega, e * s.beta};
}

}  // namespace airy

#endif  // AIRY_VECTOR_FIELDS_HPP
