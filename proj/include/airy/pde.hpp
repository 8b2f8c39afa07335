#ifndef AIRY_PDE_HPP
#define AIRY_PDE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "airy/closed_form.hpp"
#include "airy/errors.hpp"
#include "airy/polynomial.hpp"
#include "airy/state.hpp"
#include "airy/vector_fields.hpp"

namespace airy {

// Finite-volume solver for eta_t + m_x = 0, m_t + (m^2/eta + eta^2/2)_x = 0, m = eta u.

/// Cell averages of eta and m on a uniform grid over [a, b]; transmissive boundaries.
struct Grid1D {
  double a = 0.0;
  double b = 1.0;
  std::vector<double> eta;
  std::vector<double> m;

  Grid1D() = default;
  Grid1D(double lo, double hi, int cells)
      : a(lo), b(hi), eta(static_cast<std::size_t>(cells), 0.0),
        m(static_cast<std::size_t>(cells), 0.0) {
    if (cells < 1 || !(hi > lo)) throw std::invalid_argument("Grid1D: need cells >= 1 and b > a");
  }

  int cells() const { return static_cast<int>(eta.size()); }
  double dx() const { return (b - a) / cells(); }
  double x(int i) const { return a + (i + 0.5) * dx(); }

  double max_eta() const { return eta.empty() ? 0.0 : *std::max_element(eta.begin(), eta.end()); }

  /// Desingularized velocity eta m / (eta^2 + eps^2), eps = 1e-8 max eta.
  double velocity(int i) const {
    const double e = eta[i];
    if (e <= 0.0) return 0.0;
    const double eps = 1e-8 * max_eta();
    return e * m[i] / (e * e + eps * eps);
  }

  double mass() const {
    double s = 0.0;
    for (double e : eta) s += e;
    return s * dx();
  }

  double momentum() const {
    double s = 0.0;
    for (double v : m) s += v;
    return s * dx();
  }
};

namespace detail {

struct CellState {
  double eta, m, u;
};

inline double wave_speed(const CellState& c) { return std::abs(c.u) + std::sqrt(std::max(c.eta, 0.0)); }

inline std::array<double, 2> physical_flux(const CellState& c) {
  return {c.m, c.m * c.u + 0.5 * c.eta * c.eta};
}

}  // namespace detail

inline double max_wave_speed(const Grid1D& g) {
  double s = 0.0;
  for (int i = 0; i < g.cells(); ++i) s = std::max(s, detail::wave_speed({g.eta[i], g.m[i], g.velocity(i)}));
  return s;
}

constexpr double kCfl = 0.45;

/// Largest step allowed by the CFL condition.
inline double stable_dt(const Grid1D& g, double cfl = kCfl) {
  const double s = max_wave_speed(g);
  return s > 0.0 ? cfl * g.dx() / s : std::numeric_limits<double>::infinity();
}

/// One first-order Rusanov (local Lax-Friedrichs) step.
inline Grid1D step(const Grid1D& g, double dt) {
  const int n = g.cells();
  const double dx = g.dx();
  const double smax = max_wave_speed(g);
  if (!(dt > 0.0) || dt * smax > kCfl * dx * (1.0 + 1e-12)) {
    throw CflViolation("step: dt = " + std::to_string(dt) + " violates CFL " +
                       std::to_string(kCfl) + " (limit " + std::to_string(stable_dt(g)) + ")");
  }
  std::vector<detail::CellState> c(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) c[i] = {g.eta[i], g.m[i], g.velocity(i)};

  // Interface i sits between cells i-1 and i; ghost cells copy the boundary cell.
  std::vector<std::array<double, 2>> F(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) {
    const detail::CellState& L = c[std::max(i - 1, 0)];
    const detail::CellState& R = c[std::min(i, n - 1)];
    const auto fL = detail::physical_flux(L);
    const auto fR = detail::physical_flux(R);
    const double s = std::max(detail::wave_speed(L), detail::wave_speed(R));
    F[i] = {0.5 * (fL[0] + fR[0]) - 0.5 * s * (R.eta - L.eta),
            0.5 * (fL[1] + fR[1]) - 0.5 * s * (R.m - L.m)};
  }
  Grid1D out = g;
  const double r = dt / dx;
  for (int i = 0; i < n; ++i) {
    out.eta[i] = g.eta[i] - r * (F[i + 1][0] - F[i][0]);
    out.m[i] = g.m[i] - r * (F[i + 1][1] - F[i][1]);
    if (out.eta[i] <= 0.0) {
      out.eta[i] = 0.0;
      out.m[i] = 0.0;
    }
  }
  return out;
}

/// True if eta exceeds 1e-8 max eta in either of the two outermost cells on a side.
inline bool touches_boundary(const Grid1D& g) {
  const double thr = 1e-8 * g.max_eta();
  const int n = g.cells();
  for (int i : {0, 1, n - 2, n - 1})
    if (i >= 0 && i < n && g.eta[i] > thr) return true;
  return false;
}

struct AdvanceResult {
  Grid1D grid;
  double t = 0.0;
  std::size_t steps = 0;
  bool reached_boundary = false;
};

/// Advances to t_end with CFL-limited steps; stops early if the fluid reaches the boundary.
inline AdvanceResult advance(Grid1D g, double t_end, double cfl = kCfl) {
  AdvanceResult r;
  while (r.t < t_end) {
    if (touches_boundary(g)) {
      r.reached_boundary = true;
      break;
    }
    const double dt = std::min(stable_dt(g, cfl), t_end - r.t);
    g = step(g, dt);
    r.t = (dt == t_end - r.t) ? t_end : r.t + dt;
    ++r.steps;
  }
  r.grid = std::move(g);
  return r;
}

/// Exact cell averages of the reduced fields, clipped to the support (eta = 0 outside).
inline Grid1D grid_from_state(const State5& s, double a, double b, int cells) {
  Grid1D g(a, b, cells);
  const SupportInterval I = support_interval(s);
  const Polynomial eta{s.zeta, s.omega, s.gamma};
  const Polynomial u{s.beta, s.alpha};
  const Polynomial mom = eta * u;
  const double dx = g.dx();
  for (int i = 0; i < cells; ++i) {
    const double lo = std::max(a + i * dx, I.x_minus);
    const double hi = std::min(a + (i + 1) * dx, I.x_plus);
    if (hi <= lo) continue;
    g.eta[i] = std::max(eta.integrate(lo, hi) / dx, 0.0);
    g.m[i] = mom.integrate(lo, hi) / dx;
  }
  return g;
}

/// Domain of three times the initial support width, centred on it.
inline std::array<double, 2> comparison_domain(const State5& s0) {
  const SupportInterval I = support_interval(s0);
  return {I.center() - 1.5 * I.width(), I.center() + 1.5 * I.width()};
}

struct ResolutionError {
  int cells = 0;
  double dx = 0.0;
  double linf_eta = 0.0;
  double linf_u = 0.0;
  double l1_eta = 0.0;
  double l1_u = 0.0;

  double linf() const { return std::max(linf_eta, linf_u); }
  double l1() const { return l1_eta + l1_u; }
};

struct ComparisonReport {
  State5 initial;
  double t_end = 0.0;
  std::vector<ResolutionError> errors;
  /// Observed orders log2(e_k / e_{k+1}) of the L-infinity error between consecutive resolutions.
  std::vector<double> observed_orders;
  bool truncated = false;
  std::string reason;

  bool monotone() const {
    for (std::size_t i = 1; i < errors.size(); ++i)
      if (!(errors[i].linf() < errors[i - 1].linf())) return false;
    return true;
  }
};

/// Errors of the finite-volume solution against the exact reduction on the inner
/// `fraction` of the exact support at t_end.
inline ResolutionError reduction_error(const Grid1D& g, const State5& exact, double fraction = 0.8) {
  const SupportInterval I = support_interval(exact);
  const double half = 0.5 * fraction * I.width();
  const double c = I.center();
  ResolutionError e;
  e.cells = g.cells();
  e.dx = g.dx();
  for (int i = 0; i < g.cells(); ++i) {
    const double x = g.x(i);
    if (std::abs(x - c) > half) continue;
    const FieldValue f = eval_fields(exact, x);
    const double de = std::abs(g.eta[i] - f.eta);
    const double du = std::abs(g.velocity(i) - f.u);
    e.linf_eta = std::max(e.linf_eta, de);
    e.linf_u = std::max(e.linf_u, du);
    e.l1_eta += de * e.dx;
    e.l1_u += du * e.dx;
  }
  return e;
}

/// Runs the finite-volume solver at each resolution and compares with full_solution.
inline ComparisonReport compare_reduction(const State5& s0, double t_end,
                                          const std::vector<int>& resolutions = {400, 800, 1600}) {
  ComparisonReport rep;
  rep.initial = s0;
  rep.t_end = t_end;
  State5 exact;
  try {
    exact = full_solution(t_end, s0);
  } catch (const OutOfDomain& e) {
    rep.truncated = true;
    rep.reason = std::string("closed form undefined at t_end: ") + e.what();
    return rep;
  }
  const auto [a, b] = comparison_domain(s0);
  for (int n : resolutions) {
    const AdvanceResult r = advance(grid_from_state(s0, a, b, n), t_end);
    if (r.reached_boundary) {
      rep.truncated = true;
      rep.reason = "support reached the domain boundary at t = " + std::to_string(r.t);
      break;
    }
    rep.errors.push_back(reduction_error(r.grid, exact));
  }
  for (std::size_t i = 1; i < rep.errors.size(); ++i) {
    rep.observed_orders.push_back(std::log2(rep.errors[i - 1].linf() / rep.errors[i].linf()) /
                                  std::log2(rep.errors[i - 1].dx / rep.errors[i].dx));
  }
  return rep;
}

/// Vertex abscissa of the numerical profile: least-squares parabola through cells
/// with eta above half its maximum.
inline double fitted_vertex(const Grid1D& g) {
  const double thr = 0.5 * g.max_eta();
  std::vector<double> xs, ys;
  for (int i = 0; i < g.cells(); ++i) {
    if (g.eta[i] > thr) {
      xs.push_back(g.x(i));
      ys.push_back(g.eta[i]);
    }
  }
  if (xs.size() < 3) throw DomainError("fitted_vertex: fewer than three wet cells");
  const double x0 = 0.5 * (xs.front() + xs.back());
  Eigen::MatrixXd A(xs.size(), 3);
  Eigen::VectorXd y(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = xs[i] - x0;
    A.row(static_cast<Eigen::Index>(i)) << 1.0, d, d * d;
    y[static_cast<Eigen::Index>(i)] = ys[i];
  }
  const Eigen::Vector3d c = A.colPivHouseholderQr().solve(y);
  return x0 - c[1] / (2.0 * c[2]);
}

struct VertexDrift {
  double xi0 = 0.0;
  double xi_numeric = 0.0;
  double xi_exact = 0.0;
  double dx = 0.0;

  double error() const { return std::abs(xi_numeric - xi_exact); }
  bool within(double cells) const { return error() <= cells * dx; }
};

inline VertexDrift vertex_drift(const State5& s0, double t_end, int cells) {
  const auto [a, b] = comparison_domain(s0);
  const AdvanceResult r = advance(grid_from_state(s0, a, b, cells), t_end);
  if (r.reached_boundary) throw DomainError("vertex_drift: support reached the domain boundary");
  const VertexState v0 = to_vertex(s0);
  return {v0.xi, fitted_vertex(r.grid), v0.xi + v0.delta * t_end, r.grid.dx()};
}

// ---------------------------------------------------------------------------
// Exact solutions.

struct PdeResidual {
  double eta = 0.0;
  double u = 0.0;
};

/// Residuals of the Airy system for eta = A (x/t)^2, u = B (x/t). The rarefaction
/// fan is A = 1/9, B = 2/3.
inline PdeResidual rarefaction_residual(double x, double t, double A = 1.0 / 9.0,
                                        double B = 2.0 / 3.0) {
  if (!(t > 0.0)) throw DomainError("rarefaction_residual: t must be positive");
  const double s = x / t;
  const double eta = A * s * s, u = B * s;
  const double eta_t = -2.0 * A * s * s / t, eta_x = 2.0 * A * s / t;
  const double u_t = -B * s / t, u_x = B / t;
  return {eta_t + eta_x * u + eta * u_x, u_t + u * u_x + eta_x};
}

/// Residuals at (x, t) of the field built from a coefficient trajectory, with the time
/// derivative of the coefficients supplied by the caller.
inline PdeResidual polynomial_residual(const State5& s, const State5& ds_dt, double x) {
  const FieldValue f = eval_fields(s, x);
  const FieldValue ft = eval_fields(ds_dt, x);
  const double eta_x = 2.0 * s.gamma * x + s.omega;
  const double u_x = s.alpha;
  return {ft.eta + eta_x * f.u + f.eta * u_x, ft.u + f.u * u_x + eta_x};
}

struct SymmetryCheck {
  /// max |act(evolve(s0)) - evolve(act(s0))| relative to the coefficient size.
  double commutation = 0.0;
  /// max |act(s0) - (alpha, gamma, e^{2s} zeta, e^s omega, e^s beta)|.
  double coefficient_map = 0.0;
  /// Largest PDE residual of the transformed closed-form solution on its support.
  double residual = 0.0;
};

/// Verifies that the scaling symmetry maps the closed-form reduction to a PDE solution.
inline SymmetryCheck symmetry_solution_check(const State5& s0, double sflow, double t_end,
                                             int samples = 64) {
  if (!(t_end > 0.0)) throw DomainError("symmetry_solution_check: t_end must be positive");
  SymmetryCheck r;
  const double e = std::exp(sflow);
  const State5 acted = lie_symmetry_action(s0, sflow);
  const State5 expected{s0.alpha, s0.gamma, e * e * s0.zeta, e * s0.omega, e * s0.beta};
  r.coefficient_map = (acted.vec() - expected.vec()).lpNorm<Eigen::Infinity>();

  for (int k = 1; k <= samples; ++k) {
    const double t = t_end * k / samples;
    const State5 lhs = lie_symmetry_action(full_solution(t, s0), sflow);
    const State5 rhs = full_solution(t, acted);
    const double scale = std::max(1.0, rhs.vec().lpNorm<Eigen::Infinity>());
    r.commutation = std::max(r.commutation, (lhs.vec() - rhs.vec()).lpNorm<Eigen::Infinity>() / scale);

    // Time derivative of the transformed coefficients by a fourth-order stencil.
    const double h = 1e-4 * t_end;
    auto at = [&](double tt) { return full_solution(tt, acted).vec(); };
    const Vec5 d = (-at(t + 2 * h) + 8.0 * at(t + h) - 8.0 * at(t - h) + at(t - 2 * h)) / (12.0 * h);
    const State5 ds = State5::from_vec(d);
    const SupportInterval I = support_interval(rhs);
    for (int j = 0; j <= 8; ++j) {
      const double x = I.x_minus + I.width() * j / 8.0;
      const PdeResidual res = polynomial_residual(rhs, ds, x);
      r.residual = std::max({r.residual, std::abs(res.eta) / scale, std::abs(res.u) / scale});
    }
  }
  return r;
}

inline void to_json(nlohmann::json& j, const ResolutionError& e) {
  j = nlohmann::json{{"cells", e.cells},       {"dx", e.dx},         {"linf", e.linf()},
                     {"l1", e.l1()},           {"linf_eta", e.linf_eta}, {"linf_u", e.linf_u},
                     {"l1_eta", e.l1_eta},     {"l1_u", e.l1_u}};
}

inline void to_json(nlohmann::json& j, const ComparisonReport& r) {
  j = nlohmann::json{{"initial",
                      {{"alpha", r.initial.alpha},
                       {"gamma", r.initial.gamma},
                       {"zeta", r.initial.zeta},
                       {"omega", r.initial.omega},
                       {"beta", r.initial.beta}}},
                     {"t_end", r.t_end},
                     {"errors", r.errors},
                     {"observed_orders", r.observed_orders},
                     {"monotone", r.monotone()},
                     {"truncated", r.truncated}};
  if (!r.reason.empty()) j["reason"] = r.reason;
}

}  // namespace airy

#endif  // AIRY_PDE_HPP
