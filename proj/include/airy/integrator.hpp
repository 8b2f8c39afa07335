#ifndef AIRY_INTEGRATOR_HPP
#define AIRY_INTEGRATOR_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string_view>
#include <tuple>
#include <type_traits>
#include <vector>

#include "airy/invariants.hpp"
#include "airy/state.hpp"
#include "airy/types.hpp"
#include "airy/vector_fields.hpp"

namespace airy {

enum class Method { rk4, dopri45 };

enum class Termination { reached_end, blow_up, step_underflow };

inline std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::reached_end: return "reached_end";
    case Termination::blow_up: return "blow_up";
    case Termination::step_underflow: return "step_underflow";
  }
  return "unknown";
}

struct IntegratorOptions {
  Method method = Method::dopri45;
  /// Fixed step for rk4 and initial step for dopri45; 0 picks a default.
  double dt = 0.0;
  double rtol = 1e-10;
  double atol = 1e-10;
  double blowup_threshold = 1e12;
  /// Upper bound on adaptive steps; 0 means unbounded.
  double max_dt = 0.0;
  std::size_t max_steps = 50'000'000;
};

/// Samples at every accepted step, with D diagnostic values per sample.
template <int N, int D = 3>
struct Trajectory {
  std::vector<double> t;
  std::vector<Vec<N>> states;
  std::vector<std::array<double, D>> diagnostics;
  Termination reason = Termination::reached_end;

  std::size_t size() const { return t.size(); }
  double final_time() const { return t.empty() ? 0.0 : t.back(); }
  const Vec<N>& final_state() const { return states.back(); }
};

/// Diagnostic functor that records nothing useful (all NaN).
template <int N, int D = 3>
struct NoDiagnostics {
  std::array<double, D> operator()(const Vec<N>&) const {
    std::array<double, D> r;
    r.fill(std::numeric_limits<double>::quiet_NaN());
    return r;
  }
};

/// K0, K1, K2 of a 5-field state; NaN where gamma == 0.
struct KDiagnostics {
  std::array<double, 3> operator()(const Vec5& v) const {
    if (v[1] == 0.0) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      return {nan, nan, nan};
    }
    const ConservedSet k = K_values(State5::from_vec(v));
    return {k.K0, k.K1, k.K2};
  }
};

/// Step size used when the caller leaves dt unset for the 5-field flow.
inline double default_step(const State5& s0) {
  return 1e-3 / std::max({1.0, std::abs(s0.alpha), std::sqrt(std::abs(s0.gamma))});
}

namespace detail {

template <int N>
bool exceeds(const Vec<N>& y, double threshold) {
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (!(std::abs(y[i]) <= threshold)) return true;  // NaN counts as blow-up
  return false;
}

// Dormand-Prince 5(4) tableau.
struct DormandPrince {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // Differences between 5th and embedded 4th order weights.
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

}  // namespace detail

/// Integrates dy/dt = field(y) from t = 0 to t_end, recording every accepted step.
template <int N, class Field, class Diagnostics = NoDiagnostics<N>>
Trajectory<N, std::tuple_size_v<std::invoke_result_t<Diagnostics, const Vec<N>&>>> integrate(
    Field&& field, const Vec<N>& y0, double t_end, const IntegratorOptions& opts = {},
    Diagnostics&& diag = {}) {
  constexpr int D = std::tuple_size_v<std::invoke_result_t<Diagnostics, const Vec<N>&>>;
  if (!(t_end >= 0.0)) throw std::invalid_argument("integrate: t_end must be >= 0");

  Trajectory<N, D> traj;
  auto record = [&](double t, const Vec<N>& y) {
    traj.t.push_back(t);
    traj.states.push_back(y);
    traj.diagnostics.push_back(diag(y));
  };

  Vec<N> y = y0;
  double t = 0.0;
  record(t, y);
  if (t_end == 0.0) return traj;
  if (detail::exceeds(y, opts.blowup_threshold)) {
    traj.reason = Termination::blow_up;
    return traj;
  }

  double h = opts.dt > 0.0 ? opts.dt : 1e-3;
  const double min_h = 1e-14 * t_end;

  if (opts.method == Method::rk4) {
    for (std::size_t step = 0; t < t_end && step < opts.max_steps; ++step) {
      const double hs = std::min(h, t_end - t);
      const Vec<N> k1 = field(y);
      const Vec<N> k2 = field(Vec<N>(y + 0.5 * hs * k1));
      const Vec<N> k3 = field(Vec<N>(y + 0.5 * hs * k2));
      const Vec<N> k4 = field(Vec<N>(y + hs * k3));
      y += (hs / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t = (t_end - t <= h) ? t_end : t + hs;
      if (detail::exceeds(y, opts.blowup_threshold)) {
        traj.reason = Termination::blow_up;
        return traj;
      }
      record(t, y);
    }
    return traj;
  }

  using DP = detail::DormandPrince;
  Vec<N> k1 = field(y);
  for (std::size_t step = 0; t < t_end && step < opts.max_steps; ++step) {
    if (opts.max_dt > 0.0) h = std::min(h, opts.max_dt);
    const bool last = t + h >= t_end;
    const double hs = last ? t_end - t : h;
    if (hs < min_h && !last) {
      traj.reason = Termination::step_underflow;
      return traj;
    }
    const Vec<N> k2 = field(Vec<N>(y + hs * DP::a21 * k1));
    const Vec<N> k3 = field(Vec<N>(y + hs * (DP::a31 * k1 + DP::a32 * k2)));
    const Vec<N> k4 = field(Vec<N>(y + hs * (DP::a41 * k1 + DP::a42 * k2 + DP::a43 * k3)));
    const Vec<N> k5 =
        field(Vec<N>(y + hs * (DP::a51 * k1 + DP::a52 * k2 + DP::a53 * k3 + DP::a54 * k4)));
    const Vec<N> k6 = field(Vec<N>(
        y + hs * (DP::a61 * k1 + DP::a62 * k2 + DP::a63 * k3 + DP::a64 * k4 + DP::a65 * k5)));
    const Vec<N> y_new =
        y + hs * (DP::b1 * k1 + DP::b3 * k3 + DP::b4 * k4 + DP::b5 * k5 + DP::b6 * k6);
    const Vec<N> k7 = field(y_new);
    const Vec<N> err =
        hs * (DP::e1 * k1 + DP::e3 * k3 + DP::e4 * k4 + DP::e5 * k5 + DP::e6 * k6 + DP::e7 * k7);

    double err_norm = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double sc = opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err_norm = std::max(err_norm, std::abs(err[i]) / sc);
    }
    if (!std::isfinite(err_norm)) err_norm = std::numeric_limits<double>::infinity();

    if (err_norm <= 1.0) {
      t = last ? t_end : t + hs;
      y = y_new;
      k1 = k7;
      if (detail::exceeds(y, opts.blowup_threshold)) {
        traj.reason = Termination::blow_up;
        return traj;
      }
      record(t, y);
      const double factor = err_norm == 0.0 ? 5.0 : 0.9 * std::pow(err_norm, -0.2);
      if (!last) h = hs * std::clamp(factor, 0.2, 5.0);
    } else {
      h = hs * std::clamp(0.9 * std::pow(err_norm, -0.2), 0.1, 0.9);
      if (h < min_h) {
        traj.reason = Termination::step_underflow;
        return traj;
      }
    }
  }
  return traj;
}

/// Integrates the 5-field flow X with K diagnostics; dt defaults from the initial state.
inline Trajectory<5> integrate_X(const State5& s0, double t_end, IntegratorOptions opts = {}) {
  if (opts.dt <= 0.0) opts.dt = default_step(s0);
  return integrate<5>([](const Vec5& v) { return vf_X(State5::from_vec(v)); }, s0.vec(), t_end,
                      opts, KDiagnostics{});
}

}  // namespace airy

#endif  // AIRY_INTEGRATOR_HPP
