#ifndef AIRY_INVARIANTS_HPP
#define AIRY_INVARIANTS_HPP

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>

#include "airy/errors.hpp"
#include "airy/polynomial.hpp"
#include "airy/state.hpp"
#include "airy/types.hpp"

namespace airy {

constexpr int kMaxHamiltonian = 5;

/// Generators K0, K1, K2 of the invariant ring and, on the physical branch, H1..H5.
struct ConservedSet {
  double K0 = 0.0;
  double K1 = 0.0;
  double K2 = 0.0;
  std::optional<std::array<double, kMaxHamiltonian>> H;
};

inline ConservedSet K_values(const State5& s) {
  require_nonzero_gamma(s.gamma, "K_values");
  const double sigma = std::cbrt(s.gamma);
  const double s2 = sigma * sigma;
  return {(s.omega * s.omega - 4.0 * s.gamma * s.zeta) / (s2 * s2),
          s.beta - s.alpha * s.omega / (2.0 * s.gamma), s.alpha * s.alpha / s2 - 4.0 * sigma,
          std::nullopt};
}

namespace detail {

inline void check_order(int n) {
  if (n < 1 || n > kMaxHamiltonian) {
    throw std::invalid_argument("Hamiltonian index must be in 1.." +
                                std::to_string(kMaxHamiltonian));
  }
}

inline void check_physical_K0(double K0) {
  if (K0 < 0.0) {
    throw DomainError("H values need K0 >= 0 (K0^{3/2}); state is on the nonphysical branch");
  }
}

}  // namespace detail

/// H_n as a function of (K0, K1, K2).
inline double H_from_K(double K0, double K1, double K2, int n) {
  detail::check_order(n);
  detail::check_physical_K0(K0);
  const double r = K0 * std::sqrt(K0);
  switch (n) {
    case 1: return r / 6.0;
    case 2: return r * K1 / 6.0;
    case 3: return r * (K1 * K1 / 6.0 + K0 * K2 / 120.0);
    case 4: return r * K1 * (K1 * K1 / 6.0 + K0 * K2 / 40.0);
    default: {
      const double k1sq = K1 * K1;
      return r * (k1sq * k1sq / 6.0 + K0 * k1sq * K2 / 20.0 + K0 * K0 * K2 * K2 / 1120.0);
    }
  }
}

/// (dH_n/dK0, dH_n/dK1, dH_n/dK2).
inline std::array<double, 3> H_partials(double K0, double K1, double K2, int n) {
  detail::check_order(n);
  detail::check_physical_K0(K0);
  const double q = std::sqrt(K0);
  const double r = K0 * q;
  const double dr = 1.5 * q;
  switch (n) {
    case 1: return {dr / 6.0, 0.0, 0.0};
    case 2: return {dr * K1 / 6.0, r / 6.0, 0.0};
    case 3:
      return {dr * (K1 * K1 / 6.0 + K0 * K2 / 120.0) + r * K2 / 120.0, r * K1 / 3.0,
              r * K0 / 120.0};
    case 4:
      return {dr * (K1 * K1 * K1 / 6.0 + K0 * K1 * K2 / 40.0) + r * K1 * K2 / 40.0,
              r * (K1 * K1 / 2.0 + K0 * K2 / 40.0), r * K0 * K1 / 40.0};
    default: {
      const double k1sq = K1 * K1;
      const double inner = k1sq * k1sq / 6.0 + K0 * k1sq * K2 / 20.0 + K0 * K0 * K2 * K2 / 1120.0;
      return {dr * inner + r * (k1sq * K2 / 20.0 + K0 * K2 * K2 / 560.0),
              r * (2.0 * k1sq * K1 / 3.0 + K0 * K1 * K2 / 10.0),
              r * (K0 * k1sq / 20.0 + K0 * K0 * K2 / 560.0)};
    }
  }
}

inline double H_values(const State5& s, int n) {
  const ConservedSet k = K_values(s);
  return H_from_K(k.K0, k.K1, k.K2, n);
}

inline ConservedSet conserved_set(const State5& s) {
  ConservedSet k = K_values(s);
  if (k.K0 >= 0.0) {
    std::array<double, kMaxHamiltonian> h{};
    for (int n = 1; n <= kMaxHamiltonian; ++n) h[n - 1] = H_from_K(k.K0, k.K1, k.K2, n);
    k.H = h;
  }
  return k;
}

/// Density h_n(eta, u) from the z -> infinity expansion of the Casimir generator.
inline Polynomial density(const Polynomial& eta, const Polynomial& u, int n) {
  detail::check_order(n);
  switch (n) {
    case 1: return eta;
    case 2: return eta * u;
    case 3: return eta * eta + eta * u * u;
    case 4: return 3.0 * (eta * eta * u) + eta * pow(u, 3);
    default: return 2.0 * pow(eta, 3) + 6.0 * (eta * eta * u * u) + eta * pow(u, 4);
  }
}

/// H_n by exact integration of the density over the fluid support.
inline double H_by_integration(const State5& s, int n) {
  const SupportInterval I = support_interval(s);
  // Integrate in a variable centred on the support to avoid cancellation at large offsets.
  const double c = I.center();
  const double r = 0.5 * I.width();
  const Polynomial eta = Polynomial{s.zeta, s.omega, s.gamma}.shifted(c);
  const Polynomial u = Polynomial{s.beta, s.alpha}.shifted(c);
  return density(eta, u, n).integrate(-r, r);
}

/// Differentials of the sigma-chart generators (kappa, delta, K2). kappa = -K0/4, so
/// the first entry is dK0 up to that constant.
inline std::array<Gradient5, 3> grad_K(const SigmaState& s) {
  if (s.sigma == 0.0) throw DomainError("grad_K: sigma == 0");
  const double a = s.alpha;
  const double sg = s.sigma;
  Gradient5 dK0 = Gradient5::Zero();
  Gradient5 dK1 = Gradient5::Zero();
  Gradient5 dK2 = Gradient5::Zero();
  dK0[2] = 1.0;
  dK1[4] = 1.0;
  dK2[0] = 2.0 * a / (sg * sg);
  dK2[1] = -2.0 * a * a / (sg * sg * sg) - 4.0;
  return {dK0, dK1, dK2};
}

/// Differentials of K0, K1, K2 in the (alpha, gamma, zeta, omega, beta) chart.
inline std::array<Gradient5, 3> grad_K(const State5& s) {
  require_nonzero_gamma(s.gamma, "grad_K");
  const auto [a, g, z, w, b] = s;
  const double sg = std::cbrt(g);
  const double s2 = sg * sg;
  const double s4 = s2 * s2;
  const double dsigma = 1.0 / (3.0 * s2);  // d(sigma)/d(gamma)
  const double disc = w * w - 4.0 * g * z;
  Gradient5 dK0(0.0, -4.0 * z / s4 - 4.0 * disc / (s4 * sg) * dsigma, -4.0 * g / s4, 2.0 * w / s4,
                0.0);
  Gradient5 dK1(-w / (2.0 * g), a * w / (2.0 * g * g), 0.0, -a / (2.0 * g), 1.0);
  Gradient5 dK2(2.0 * a / s2, (-2.0 * a * a / (s2 * sg) - 4.0) * dsigma, 0.0, 0.0, 0.0);
  return {dK0, dK1, dK2};
}

/// Differential of H_n, by the chain rule through (K0, K1, K2), in the chart of the argument.
template <class Chart>
Gradient5 grad_H(const Chart& s, int n) {
  double K0, K1, K2, c0 = 1.0;
  if constexpr (std::is_same_v<Chart, SigmaState>) {
    K0 = -4.0 * s.kappa;
    c0 = -4.0;
    K1 = s.delta;
    K2 = s.alpha * s.alpha / (s.sigma * s.sigma) - 4.0 * s.sigma;
  } else {
    const ConservedSet k = K_values(s);
    K0 = k.K0;
    K1 = k.K1;
    K2 = k.K2;
  }
  const auto dK = grad_K(s);
  const auto p = H_partials(K0, K1, K2, n);
  return c0 * p[0] * dK[0] + p[1] * dK[1] + p[2] * dK[2];
}

/// H_n evaluated in the sigma chart.
inline double H_values(const SigmaState& s, int n) {
  return H_from_K(-4.0 * s.kappa, s.delta, s.alpha * s.alpha / (s.sigma * s.sigma) - 4.0 * s.sigma, n);
}

/// Constants of motion of the linear-linear flow. mu is the auxiliary height
/// coordinate; with mu evolving like zeta (the convention used throughout),
/// H2 is conserved by X4 and annihilated by Y4.
struct LinearInvariants {
  double H1 = 0.0;
  double H2 = 0.0;
  double H3 = 0.0;
};

inline LinearInvariants linear_invariants(const LinearState& s, double mu) {
  if (s.omega == 0.0 || s.alpha == 0.0) {
    throw DomainError("linear_invariants: requires alpha != 0 and omega != 0");
  }
  const auto [a, z, w, b] = s;
  return {a * a / w, a * mu / w - b + w / a, a * b / w - std::log(std::abs(a))};
}

inline LinearInvariants linear_invariants(const LinearState& s) { return linear_invariants(s, s.zeta); }

}  // namespace airy

#endif  // AIRY_INVARIANTS_HPP
