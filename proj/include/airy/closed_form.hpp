#ifndef AIRY_CLOSED_FORM_HPP
#define AIRY_CLOSED_FORM_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "airy/errors.hpp"
#include "airy/state.hpp"

namespace airy {

namespace detail {

/// Real part of atanh: (1/2) log|(1 + x) / (1 - x)|, valid on both sides of |x| = 1.
inline double atanh_real(double x) {
  if (std::abs(x) < 1.0) return std::atanh(x);
  return std::atanh(1.0 / x);
}

/// Finds x in [lo, hi] with g(x) = 0 given g(lo) < 0 < g(hi), by bisection
/// safeguarded secant (Illinois) steps. g(hi) may be +infinity.
template <class Fn>
double bracketed_root(Fn&& g, double lo, double hi, double g_lo, double g_hi, double ftol) {
  int side = 0;
  for (int it = 0; it < 400; ++it) {
    double x;
    if (std::isfinite(g_lo) && std::isfinite(g_hi)) {
      x = (lo * g_hi - hi * g_lo) / (g_hi - g_lo);
      if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    } else {
      x = 0.5 * (lo + hi);
    }
    const double gx = g(x);
    if (std::abs(gx) <= ftol || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x))
      return x;
    if (gx < 0.0) {
      lo = x;
      g_lo = gx;
      if (side == -1) g_hi *= 0.5;
      side = -1;
    } else {
      hi = x;
      g_hi = gx;
      if (side == 1) g_lo *= 0.5;
      side = 1;
    }
    // Bisect when the secant stalls on one side.
    if (it % 8 == 7) {
      const double m = 0.5 * (lo + hi);
      const double gm = g(m);
      if (gm < 0.0) {
        lo = m;
        g_lo = gm;
      } else {
        hi = m;
        g_hi = gm;
      }
      side = 0;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Time reparametrization tau(t) of the parabolic reduction: gamma = gamma0 tau^3,
/// tau(0) = 1, dtau/dt = -alpha tau, (dtau/dt)^2 = 4 gamma0 tau^5 + (alpha0^2 - 4 gamma0) tau^4.
///
/// Internally the motion is parametrized by w = sqrt(4 gamma0 tau + alpha0^2 - 4 gamma0) = |alpha| / tau,
/// in which dt = 2|a| dw / (w^2 - c)^2 along every monotone phase. A phase ends where w hits
/// zero (alpha changes sign and tau turns around), at tau -> infinity (finite-time blow-up),
/// or at tau -> 0 (infinite time).
class TauSolver {
 public:
  struct Point {
    double tau = 1.0;
    double w = 0.0;      // |alpha| / tau
    int direction = 1;   // sign of dtau/dt
    double alpha() const { return -direction * tau * w; }
  };

  /// Relative size of |alpha0^2 - 4 gamma0| below which the data count as degenerate
  /// (double root of the tau polynomial).
  static constexpr double kDegenerateTolerance = 1e-4;

  TauSolver(double alpha0, double gamma0)
      : alpha0_(alpha0), gamma0_(gamma0), a_(4.0 * gamma0), c_(alpha0 * alpha0 - 4.0 * gamma0),
        w0_(std::abs(alpha0)) {
    require_nonzero_gamma(gamma0, "TauSolver");
    degenerate_ = std::abs(c_) <= kDegenerateTolerance * std::max(alpha0 * alpha0, std::abs(a_));
    d0_ = alpha0 != 0.0 ? (alpha0 > 0.0 ? -1 : 1) : (gamma0 > 0.0 ? 1 : -1);
    w_increasing_ = a_ * d0_ > 0.0;
    if (w_increasing_) {
      turning_ = false;
      phase1_duration_ = d0_ > 0 ? elapsed(w0_, inf()) : inf();
      limit_ = phase1_duration_;
    } else if (-c_ / a_ > 0.0) {
      turning_ = true;
      tau_turn_ = -c_ / a_;
      phase1_duration_ = elapsed(0.0, w0_);
      limit_ = -d0_ > 0 ? phase1_duration_ + elapsed(0.0, inf()) : inf();
    } else {
      // a > 0, c >= 0, tau decreasing: w falls towards sqrt(c) as tau -> 0, never reaching it.
      turning_ = false;
      phase1_duration_ = inf();
      limit_ = inf();
    }
  }

  double alpha0() const { return alpha0_; }
  double gamma0() const { return gamma0_; }
  bool degenerate() const { return degenerate_; }
  bool has_turning_point() const { return turning_; }
  double turning_tau() const { return turning_ ? tau_turn_ : std::numeric_limits<double>::quiet_NaN(); }

  /// End of the maximal existence interval: blow-up time, or +infinity.
  double existence_limit() const { return limit_; }
  bool blows_up() const { return std::isfinite(limit_); }

  /// First time at which tau(t) equals the given value.
  double t_of_tau(double tau) const {
    if (!(tau > 0.0)) throw DomainError("t_of_tau: tau must be positive");
    if (tau == 1.0) return 0.0;
    const double w2 = a_ * tau + c_;
    if (w2 < 0.0) throw OutOfDomain("t_of_tau: tau is never reached", limit_);
    const double w = std::sqrt(w2);
    const bool in_phase1 = d0_ * (tau - 1.0) >= 0.0 && (!turning_ || d0_ * (tau_turn_ - tau) >= 0.0);
    if (in_phase1) return elapsed(std::min(w, w0_), std::max(w, w0_));
    if (turning_ && -d0_ * (tau - tau_turn_) >= 0.0) return phase1_duration_ + elapsed(0.0, w);
    throw OutOfDomain("t_of_tau: tau is never reached", limit_);
  }

  /// The motion at time t (tau, |alpha|/tau, and the sign of dtau/dt).
  Point at(double t) const {
    if (!(t >= 0.0)) throw DomainError("tau_of_t: t must be >= 0");
    if (t >= limit_) {
      throw OutOfDomain("tau_of_t: t = " + std::to_string(t) + " is beyond blow-up at t_s = " +
                            std::to_string(limit_),
                        limit_);
    }
    if (t == 0.0) return {1.0, w0_, d0_};
    const double ftol = 1e-12 * std::max(1.0, t);
    if (t <= phase1_duration_) {
      if (turning_) {
        // w decreases from w0 towards 0.
        auto g = [&](double w) { return t - elapsed(w, w0_); };
        const double w = detail::bracketed_root(g, 0.0, w0_, t - phase1_duration_, t, ftol);
        return {tau_from_w(w), w, d0_};
      }
      if (!w_increasing_) {
        auto g = [&](double w) { return t - elapsed(w, w0_); };
        const double w = detail::bracketed_root(g, std::sqrt(c_), w0_, -inf(), t, ftol);
        return {tau_from_w(w), w, d0_};
      }
      auto g = [&](double w) { return elapsed(w0_, w) - t; };
      const auto [lo, hi, g_lo, g_hi] = bracket_increasing(w0_, g);
      const double w = detail::bracketed_root(g, lo, hi, g_lo, g_hi, ftol);
      return {tau_from_w(w), w, d0_};
    }
    const double rest = t - phase1_duration_;
    auto g = [&](double w) { return elapsed(0.0, w) - rest; };
    const auto [lo, hi, g_lo, g_hi] = bracket_increasing(0.0, g);
    const double w = detail::bracketed_root(g, lo, hi, g_lo, g_hi, ftol);
    return {tau_from_w(w), w, -d0_};
  }

  double tau_of_t(double t) const { return at(t).tau; }

  /// Integral of 2|a| / (w^2 - c)^2 over [w1, w2]; w2 may be +infinity.
  double elapsed(double w1, double w2) const {
    if (w1 == w2) return 0.0;
    return antiderivative(w2) - antiderivative(w1);
  }

 private:
  static double inf() { return std::numeric_limits<double>::infinity(); }

  double tau_from_w(double w) const { return (w * w - c_) / a_; }

  // Largest admissible w on an increasing-w phase; tau -> 0 corresponds to w -> sqrt(c).
  double w_upper() const {
    const int dir = w_increasing_ ? d0_ : -d0_;
    return dir > 0 ? inf() : std::sqrt(c_);
  }

  struct Bracket {
    double lo, hi, g_lo, g_hi;
  };

  template <class G>
  Bracket bracket_increasing(double w_start, G& g) const {
    const double top = w_upper();
    double lo = w_start;
    double g_lo = g(lo);
    if (std::isfinite(top)) return Bracket{lo, top, g_lo, inf()};
    double hi = std::max(2.0 * w_start, 1.0);
    double g_hi = g(hi);
    while (g_hi < 0.0) {
      lo = hi;
      g_lo = g_hi;
      hi *= 2.0;
      g_hi = g(hi);
    }
    return Bracket{lo, hi, g_lo, g_hi};
  }

  // Antiderivative of 2|a| / (w^2 - c)^2, normalized to vanish at w = +infinity.
  // For |c| <= w^2/4 it is summed as -2|a| sum (k+1) c^k w^{-3-2k} / (3+2k), which has no
  // cancellation as c -> 0; elsewhere the closed forms are used.
  double antiderivative(double w) const {
    const double abs_a = std::abs(a_);
    if (std::isinf(w)) return 0.0;
    if (c_ == 0.0) return -2.0 * abs_a / (3.0 * w * w * w);
    if (std::abs(c_) <= 0.25 * w * w) {
      const double r = c_ / (w * w);
      double term = 1.0, sum = 0.0;
      for (int k = 0; k < 200; ++k) {
        const double add = (k + 1) * term / (3.0 + 2.0 * k);
        sum += add;
        if (std::abs(add) <= 1e-17 * std::abs(sum)) break;
        term *= r;
      }
      return -2.0 * abs_a * sum / (w * w * w);
    }
    if (c_ > 0.0) {
      const double rc = std::sqrt(c_);
      return abs_a * (-w / (c_ * (w * w - c_)) + detail::atanh_real(w / rc) / (c_ * rc));
    }
    const double m = -c_;
    const double rm = std::sqrt(m);
    return abs_a * (w / (m * (w * w + m)) - std::atan(rm / w) / (m * rm));
  }

  double alpha0_, gamma0_;
  double a_, c_, w0_;
  bool degenerate_ = false;
  int d0_ = 1;
  bool w_increasing_ = true;
  bool turning_ = false;
  double tau_turn_ = std::numeric_limits<double>::quiet_NaN();
  double phase1_duration_ = 0.0;
  double limit_ = std::numeric_limits<double>::infinity();
};

/// Time at which tau first reaches the given value.
inline double t_of_tau(double tau, double alpha0, double gamma0) {
  return TauSolver(alpha0, gamma0).t_of_tau(tau);
}

inline double tau_of_t(double t, double alpha0, double gamma0) {
  return TauSolver(alpha0, gamma0).tau_of_t(t);
}

/// Parity-preserving solution (alpha, gamma, zeta) at time t.
inline SymState3 symmetric_solution(double t, double alpha0, double gamma0, double zeta0) {
  if (t == 0.0) return {alpha0, gamma0, zeta0};
  const TauSolver solver(alpha0, gamma0);
  const TauSolver::Point p = solver.at(t);
  return {p.alpha(), gamma0 * p.tau * p.tau * p.tau, zeta0 * p.tau};
}

/// Full 5-field solution: the vertex height scales like tau, the vertex moves uniformly.
inline State5 full_solution(double t, const State5& s0) {
  if (t == 0.0) return s0;
  const VertexState v0 = to_vertex(s0);
  const TauSolver::Point p = TauSolver(s0.alpha, s0.gamma).at(t);
  const VertexState v{p.alpha(), s0.gamma * p.tau * p.tau * p.tau, v0.xi + v0.delta * t,
                      v0.mu * p.tau, v0.delta};
  return from_vertex(v);
}

/// Blow-up time of a fluid initially at rest with gamma0 > 0.
inline double blowup_time(double gamma0) {
  if (!(gamma0 > 0.0)) throw UnsupportedConfiguration("blowup_time: requires gamma0 > 0");
  return std::numbers::pi / (4.0 * std::sqrt(gamma0));
}

inline double blowup_time(const State5& s0) {
  if (s0.alpha != 0.0 || s0.beta != 0.0) {
    throw UnsupportedConfiguration(
        "blowup_time: closed form needs alpha0 == beta0 == 0; use TauSolver or the integrator");
  }
  return blowup_time(s0.gamma);
}

namespace detail {

// log1p(x) / x
inline double log1p_ratio(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * (0.5 - x * (1.0 / 3.0 - x * 0.25));
  return std::log1p(x) / x;
}

// (x - log1p(x)) / x^2
inline double log1p_remainder(double x) {
  if (std::abs(x) < 1e-4) return 0.5 - x * (1.0 / 3.0 - x * (0.25 - x * 0.2));
  return (x - std::log1p(x)) / (x * x);
}

}  // namespace detail

/// Cauchy solution of the linear-linear flow; defined while 1 + alpha0 t > 0.
inline LinearState linear_solution(double t, const LinearState& s0) {
  if (t == 0.0) return s0;
  const auto [a0, z0, w0, b0] = s0;
  const double x = a0 * t;
  const double T = 1.0 + x;
  if (!(T > 0.0)) {
    throw OutOfDomain("linear_solution: 1 + alpha0 t <= 0 (coefficient blow-up)",
                      a0 < 0.0 ? -1.0 / a0 : std::numeric_limits<double>::quiet_NaN());
  }
  const double phi1 = detail::log1p_ratio(x);
  const double phi2 = detail::log1p_remainder(x);
  return {a0 / T, z0 / T - w0 * b0 * t / (T * T) + w0 * w0 * t * t * phi2 / (T * T),
          w0 / (T * T), (b0 - w0 * t * phi1) / T};
}

}  // namespace airy

#endif  // AIRY_CLOSED_FORM_HPP
