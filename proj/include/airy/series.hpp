#ifndef AIRY_SERIES_HPP
#define AIRY_SERIES_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "airy/errors.hpp"
#include "airy/integrator.hpp"
#include "airy/random.hpp"
#include "airy/state.hpp"
#include "airy/types.hpp"

namespace airy {

// Symmetric power series around x = 0:
//   eta(x,t) = sum_n eta_n(t) x^{2n},   u(x,t) = sum_n u_n(t) x^{2n+1}.

using VecX = Eigen::VectorXd;

/// Truncated coefficients eta_0..eta_N and u_0..u_N.
struct SeriesState {
  std::vector<double> eta;
  std::vector<double> u;

  SeriesState() = default;
  explicit SeriesState(int order) : eta(order + 1, 0.0), u(order + 1, 0.0) {}
  SeriesState(std::vector<double> e, std::vector<double> v) : eta(std::move(e)), u(std::move(v)) {
    if (eta.size() != u.size() || eta.size() < 2) {
      throw std::invalid_argument("SeriesState: eta and u need the same length N + 1 with N >= 1");
    }
  }

  int order() const { return static_cast<int>(eta.size()) - 1; }

  /// (eta_0..eta_N, u_0..u_N).
  VecX vec() const {
    VecX v(2 * eta.size());
    for (std::size_t i = 0; i < eta.size(); ++i) {
      v[static_cast<Eigen::Index>(i)] = eta[i];
      v[static_cast<Eigen::Index>(eta.size() + i)] = u[i];
    }
    return v;
  }

  static SeriesState from_vec(const VecX& v) {
    const auto n = static_cast<std::size_t>(v.size() / 2);
    SeriesState s;
    s.eta.assign(v.data(), v.data() + n);
    s.u.assign(v.data() + n, v.data() + 2 * n);
    return s;
  }
};

/// Parabolic data eta = zeta + gamma x^2, u = alpha x as an order-N series.
inline SeriesState series_from_symmetric(const SymState3& s, int order) {
  SeriesState r(std::max(order, 1));
  r.eta[0] = s.zeta;
  r.eta[1] = s.gamma;
  r.u[0] = s.alpha;
  return r;
}

/// Coefficient ODEs of the Airy system for the symmetric series, closed by eta_{N+1} = 0:
///   d eta_m / dt = -(2m+1) sum_{i+j=m} eta_i u_j
///   d u_m / dt   = -sum_{i+j=m} (2j+1) u_i u_j - 2(m+1) eta_{m+1}
inline SeriesState hierarchy_rhs(const SeriesState& s) {
  const int N = s.order();
  SeriesState d(N);
  for (int m = 0; m <= N; ++m) {
    double se = 0.0, su = 0.0;
    for (int i = 0; i <= m; ++i) {
      const int j = m - i;
      se += s.eta[i] * s.u[j];
      su += (2.0 * j + 1.0) * s.u[i] * s.u[j];
    }
    d.eta[m] = -(2.0 * m + 1.0) * se;
    const double next = m < N ? s.eta[m + 1] : 0.0;
    d.u[m] = -su - 2.0 * (m + 1.0) * next;
  }
  return d;
}

inline auto integrate_series(const SeriesState& s0, double t_end, IntegratorOptions opts = {}) {
  if (opts.dt <= 0.0) opts.dt = 1e-3;
  return integrate<Eigen::Dynamic>(
      [](const VecX& v) { return hierarchy_rhs(SeriesState::from_vec(v)).vec(); }, s0.vec(), t_end,
      opts, NoDiagnostics<Eigen::Dynamic, 1>{});
}

// ---------------------------------------------------------------------------
// Dry-point linearization.

/// Outcome of probing the pair (eta_{n+1}, u_n).
struct AffinityResult {
  int n = 0;
  /// Largest second difference of the pair's right-hand side along sampled lines.
  double second_difference = 0.0;
  /// Largest change of the pair's right-hand side when higher coefficients are resampled.
  double higher_dependence = 0.0;
  double tolerance = 1e-10;

  bool affine() const { return second_difference <= tolerance; }
  bool closed() const { return higher_dependence <= tolerance; }
  /// The pair evolves by an affine system driven only by lower coefficients.
  bool passed() const { return affine() && closed(); }
};

inline void to_json(nlohmann::json& j, const AffinityResult& r) {
  j = nlohmann::json{{"n", r.n},
                     {"second_difference", r.second_difference},
                     {"higher_dependence", r.higher_dependence},
                     {"tolerance", r.tolerance},
                     {"affine", r.affine()},
                     {"closed", r.closed()},
                     {"passed", r.passed()}};
}

/// Checks that the evolution of (eta_{n+1}, u_n) is affine in that pair and does
/// not involve higher coefficients, with eta_0..eta_n and u_0..u_{n-1} taken from
/// `lower`. At a dry point (eta_0 = 0) both hold for every n >= 1.
inline AffinityResult dry_point_affinity_check(int n, const SeriesState& lower,
                                               std::uint64_t seed = 0x5eed) {
  if (n < 0) throw std::invalid_argument("dry_point_affinity_check: n must be >= 0");
  const int N = n + 2;
  SeriesState base(N);
  for (int i = 0; i <= std::min(n, lower.order()); ++i) base.eta[i] = lower.eta[i];
  for (int i = 0; i <= std::min(n - 1, lower.order()); ++i) base.u[i] = lower.u[i];

  SplitMix64 rng(seed);
  auto fill_higher = [&rng](SeriesState& s, int n_) {
    s.u[n_ + 1] = rng.uniform(-1.0, 1.0);
    s.u[n_ + 2] = rng.uniform(-1.0, 1.0);
    s.eta[n_ + 2] = rng.uniform(-1.0, 1.0);
  };
  auto pair_rhs = [n](const SeriesState& s) {
    const SeriesState d = hierarchy_rhs(s);
    return std::array<double, 2>{d.eta[n + 1], d.u[n]};
  };

  AffinityResult r;
  r.n = n;
  for (int line = 0; line < 4; ++line) {
    SeriesState s = base;
    fill_higher(s, n);
    const double e0 = rng.uniform(-1.0, 1.0), u0 = rng.uniform(-1.0, 1.0);
    const double de = rng.uniform(-1.0, 1.0), du = rng.uniform(-1.0, 1.0);
    std::array<std::array<double, 2>, 4> vals;
    double scale = 1.0;
    for (int k = 0; k < 4; ++k) {
      s.eta[n + 1] = e0 + k * de;
      s.u[n] = u0 + k * du;
      vals[k] = pair_rhs(s);
      scale = std::max({scale, std::abs(vals[k][0]), std::abs(vals[k][1])});
    }
    for (int k = 0; k + 2 < 4; ++k)
      for (int c = 0; c < 2; ++c) {
        const double d2 = std::abs(vals[k][c] - 2.0 * vals[k + 1][c] + vals[k + 2][c]) / scale;
        r.second_difference = std::max(r.second_difference, d2);
      }
    // Same pair, different higher coefficients.
    SeriesState t = s;
    fill_higher(t, n);
    const auto a = pair_rhs(s), b = pair_rhs(t);
    for (int c = 0; c < 2; ++c)
      r.higher_dependence = std::max(r.higher_dependence, std::abs(a[c] - b[c]) / scale);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Algebraic reduction u_2 = 0.

struct U2Reduction {
  double eta3 = 0.0;
  double u3 = 0.0;
};

/// Values of eta_3, u_3 that keep u_2 identically zero: d u_2/dt = 0 fixes eta_3 and
/// d^2 u_2/dt^2 = 0 fixes u_3.
inline U2Reduction algebraic_reduction_u2(const SeriesState& s) {
  if (s.order() < 2) throw std::invalid_argument("algebraic_reduction_u2: needs order >= 2");
  if (s.eta[0] == 0.0) throw DomainError("algebraic_reduction_u2: eta_0 == 0");
  const double u0 = s.u[0], u1 = s.u[1], e0 = s.eta[0], e2 = s.eta[2];
  return {-0.5 * u1 * u1, -u1 * (u0 * u1 + 22.0 * e2) / (14.0 * e0)};
}

/// Copy of s (order raised to at least 3) with u_2 = 0 and eta_3, u_3 from the reduction.
inline SeriesState apply_u2_reduction(const SeriesState& s) {
  SeriesState r(std::max(s.order(), 3));
  std::copy(s.eta.begin(), s.eta.end(), r.eta.begin());
  std::copy(s.u.begin(), s.u.end(), r.u.begin());
  r.u[2] = 0.0;
  const U2Reduction red = algebraic_reduction_u2(r);
  r.eta[3] = red.eta3;
  r.u[3] = red.u3;
  return r;
}

/// (d u_2/dt, d^2 u_2/dt^2). The right-hand side is quadratic, so the central
/// difference with unit step gives the directional derivative exactly up to rounding.
inline std::array<double, 2> u2_rates(const SeriesState& s) {
  if (s.order() < 3) throw std::invalid_argument("u2_rates: needs order >= 3");
  const VecX x = s.vec();
  const VecX v = hierarchy_rhs(s).vec();
  const auto idx = static_cast<Eigen::Index>(s.eta.size() + 2);
  const VecX fp = hierarchy_rhs(SeriesState::from_vec(x + v)).vec();
  const VecX fm = hierarchy_rhs(SeriesState::from_vec(x - v)).vec();
  return {v[idx], 0.5 * (fp[idx] - fm[idx])};
}

}  // namespace airy

#endif  // AIRY_SERIES_HPP
