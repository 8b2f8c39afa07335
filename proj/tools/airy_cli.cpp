// Command-line front end: simulations, closed forms, and verification suites.
//
// Flags may also be given in a JSON file (--config); flags on the command line win.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "airy/airy.hpp"

namespace {

using airy::State5;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kVerificationFailure = 1;
constexpr int kUsageError = 2;

struct RunConfig {
  double alpha0 = 0.0;
  double gamma0 = 1.0;
  double zeta0 = 1.0;
  double omega0 = 0.0;
  double beta0 = 0.0;
  double t_end = 0.5;
  double dt = 0.0;
  double tol = 1e-10;
  std::optional<std::size_t> points;
  std::uint64_t seed = 20240501;
  std::string out;
  std::string format = "csv";

  bool linear = false;
  bool inject_wrong_f = false;
  bool affinity = false;
  int order = 1;
  std::vector<int> cells{400, 800, 1600};
  std::string snapshot;

  State5 state() const { return {alpha0, gamma0, zeta0, omega0, beta0}; }
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Keys accept either dashes or underscores ("t-end" or "t_end").
void load_config(const std::string& path, RunConfig& c) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw UsageError("config file " + path + ": " + e.what());
  }
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  for (const auto& [raw, v] : j.items()) {
    std::string k = raw;
    for (char& ch : k)
      if (ch == '-') ch = '_';
    try {
      if (k == "alpha0") c.alpha0 = v.get<double>();
      else if (k == "gamma0") c.gamma0 = v.get<double>();
      else if (k == "zeta0") c.zeta0 = v.get<double>();
      else if (k == "omega0") c.omega0 = v.get<double>();
      else if (k == "beta0") c.beta0 = v.get<double>();
      else if (k == "t_end") c.t_end = v.get<double>();
      else if (k == "dt") c.dt = v.get<double>();
      else if (k == "tol") c.tol = v.get<double>();
      else if (k == "points") c.points = v.get<std::size_t>();
      else if (k == "seed") c.seed = v.get<std::uint64_t>();
      else if (k == "out") c.out = v.get<std::string>();
      else if (k == "format") c.format = v.get<std::string>();
      else if (k == "linear") c.linear = v.get<bool>();
      else if (k == "inject_wrong_f") c.inject_wrong_f = v.get<bool>();
      else if (k == "affinity") c.affinity = v.get<bool>();
      else if (k == "order") c.order = v.get<int>();
      else if (k == "cells") c.cells = v.get<std::vector<int>>();
      else if (k == "snapshot") c.snapshot = v.get<std::string>();
      else throw UsageError("config file: unknown key '" + raw + "'");
    } catch (const json::exception& e) {
      throw UsageError("config file: bad value for '" + raw + "': " + e.what());
    }
  }
}

std::optional<std::string> find_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config") {
      if (i + 1 >= argc) throw UsageError("--config needs a path");
      return std::string(argv[i + 1]);
    }
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return std::nullopt;
}

/// Output stream: --out path, or stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw UsageError("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

airy::IntegratorOptions integrator_options(const RunConfig& c) {
  airy::IntegratorOptions o;
  if (c.dt > 0.0) {
    o.method = airy::Method::rk4;
    o.dt = c.dt;
  } else {
    o.method = airy::Method::dopri45;
    o.rtol = o.atol = c.tol;
  }
  return o;
}

void print_json(std::ostream& os, const json& j) { os << j.dump(2) << '\n'; }

json with_version(json j) {
  j["version"] = std::string(airy::version());
  return j;
}

// ---------------------------------------------------------------------------

int cmd_simulate_linear(const RunConfig& c) {
  const airy::LinearState s0{c.alpha0, c.zeta0, c.omega0, c.beta0};
  const auto opts = integrator_options(c);
  const auto tr = airy::integrate<4>([](const airy::Vec<4>& v) {
    return airy::vf_X4(airy::LinearState::from_vec(v));
  }, s0.vec(), c.t_end, opts, airy::NoDiagnostics<4, 1>{});

  Output out(c.out);
  std::vector<std::vector<double>> rows;
  double worst = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const airy::Vec<4>& v = tr.states[i];
    std::vector<double> row{tr.t[i], v[0], v[1], v[2], v[3]};
    double dev = std::numeric_limits<double>::quiet_NaN();
    try {
      const airy::LinearState ex = airy::linear_solution(tr.t[i], s0);
      dev = (ex.vec() - v).lpNorm<Eigen::Infinity>();
      worst = std::max(worst, dev);
      row.insert(row.end(), {ex.alpha, ex.zeta, ex.omega, ex.beta});
    } catch (const airy::OutOfDomain&) {
      row.insert(row.end(), 4, std::numeric_limits<double>::quiet_NaN());
    }
    row.push_back(dev);
    rows.push_back(row);
  }
  if (c.format == "json") {
    json j{{"command", "simulate"}, {"linear", true},
           {"termination", std::string(airy::to_string(tr.reason))},
           {"max_deviation", worst}, {"rows", rows}};
    print_json(out.stream(), with_version(j));
  } else {
    airy::CsvWriter w(out.stream(), {"t", "alpha", "zeta", "omega", "beta", "alpha_exact",
                                     "zeta_exact", "omega_exact", "beta_exact", "max_deviation"});
    for (const auto& r : rows) w.row(r);
  }
  if (tr.reason != airy::Termination::reached_end) {
    std::cerr << "warning: integration stopped early (" << airy::to_string(tr.reason) << ") at t = "
              << tr.final_time() << '\n';
  }
  return kOk;
}

int cmd_simulate(const RunConfig& c) {
  if (c.linear) return cmd_simulate_linear(c);
  const State5 s0 = c.state();
  if (s0.gamma == 0.0) throw UsageError("gamma0 must be nonzero (use --linear for gamma = 0)");
  const auto tr = airy::integrate_X(s0, c.t_end, integrator_options(c));
  const airy::TauSolver solver(s0.alpha, s0.gamma);

  Output out(c.out);
  std::vector<std::vector<double>> rows;
  double worst = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const airy::Vec5& v = tr.states[i];
    const auto& d = tr.diagnostics[i];
    std::vector<double> row{tr.t[i], v[0], v[1], v[2], v[3], v[4], d[0], d[1], d[2]};
    double dev = std::numeric_limits<double>::quiet_NaN();
    if (tr.t[i] < solver.existence_limit()) {
      const State5 ex = airy::full_solution(tr.t[i], s0);
      dev = (ex.vec() - v).lpNorm<Eigen::Infinity>();
      worst = std::max(worst, dev);
      row.insert(row.end(), {ex.alpha, ex.gamma, ex.zeta, ex.omega, ex.beta});
    } else {
      row.insert(row.end(), 5, std::numeric_limits<double>::quiet_NaN());
    }
    row.push_back(dev);
    rows.push_back(row);
  }
  if (c.format == "json") {
    json j{{"command", "simulate"},
           {"initial", s0},
           {"termination", std::string(airy::to_string(tr.reason))},
           {"final_time", tr.final_time()},
           {"max_deviation", worst},
           {"rows", rows}};
    if (solver.blows_up()) j["blowup_time"] = solver.existence_limit();
    print_json(out.stream(), with_version(j));
  } else {
    std::vector<std::string> header = airy::trajectory_header();
    for (const char* h : {"alpha_exact", "gamma_exact", "zeta_exact", "omega_exact", "beta_exact",
                          "max_deviation"})
      header.emplace_back(h);
    airy::CsvWriter w(out.stream(), header);
    for (const auto& r : rows) w.row(r);
  }
  if (tr.reason == airy::Termination::blow_up) {
    std::cerr << "warning: blow-up detected at t = " << tr.final_time() << '\n';
  } else if (tr.reason == airy::Termination::step_underflow) {
    std::cerr << "warning: step underflow at t = " << tr.final_time() << '\n';
  }
  if (solver.blows_up()) {
    std::cerr << "warning: the closed form blows up at t_s = " << solver.existence_limit() << '\n';
  }
  return kOk;
}

int cmd_closed_form(const RunConfig& c) {
  const State5 s0 = c.state();
  if (s0.gamma == 0.0) throw UsageError("gamma0 must be nonzero");
  const airy::TauSolver solver(s0.alpha, s0.gamma);
  const std::size_t n = c.points.value_or(100);
  double t_stop = c.t_end;
  if (c.t_end >= solver.existence_limit()) {
    std::cerr << "warning: t_end is beyond blow-up at t_s = " << solver.existence_limit()
              << "; sampling stops before t_s\n";
    t_stop = solver.existence_limit();
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = n == 0 ? 0.0 : t_stop * static_cast<double>(i) / static_cast<double>(n);
    if (t >= solver.existence_limit()) break;
    const State5 s = airy::full_solution(t, s0);
    const auto k = airy::K_values(s);
    rows.push_back({t, s.alpha, s.gamma, s.zeta, s.omega, s.beta, k.K0, k.K1, k.K2});
  }
  Output out(c.out);
  if (c.format == "json") {
    json j{{"command", "closed-form"}, {"initial", s0}, {"rows", rows}};
    if (solver.blows_up()) j["blowup_time"] = solver.existence_limit();
    print_json(out.stream(), with_version(j));
  } else {
    airy::CsvWriter w(out.stream(), airy::trajectory_header());
    for (const auto& r : rows) w.row(r);
  }
  return kOk;
}

int cmd_verify(const RunConfig& c) {
  airy::VerifyOptions opt;
  opt.points = c.points.value_or(1000);
  opt.seed = c.seed;
  opt.inject_wrong_f = c.inject_wrong_f;
  if (opt.points == 0) std::cerr << "warning: --points 0, every check passes vacuously\n";
  const airy::VerifyResult r = airy::run_verification(opt);
  Output out(c.out);
  if (c.format == "csv") {
    airy::CsvWriter w(out.stream(), {"report", "identity", "tolerance", "max_residual", "points",
                                     "failing_points", "passed"});
    // CsvWriter rows are numeric; emit the mixed rows directly.
    std::ostream& os = out.stream();
    for (const auto& rep : r.reports)
      for (const auto& e : rep.entries)
        os << rep.name << ",\"" << e.identity << "\"," << e.tolerance << ',' << e.max_residual << ','
           << e.points << ',' << e.failing_points.size() << ',' << (e.passed() ? 1 : 0) << '\n';
  } else {
    print_json(out.stream(), airy::to_json(r, opt));
  }
  for (const auto& rep : r.reports)
    for (const auto& e : rep.entries)
      if (!e.passed())
        std::cerr << "FAIL " << rep.name << ": " << e.identity << " (max residual " << e.max_residual
                  << ", tolerance " << e.tolerance << ", " << e.failing_points.size()
                  << " failing points)\n";
  return r.passed() ? kOk : kVerificationFailure;
}

int cmd_pde_compare(const RunConfig& c) {
  const State5 s0 = c.state();
  if (!(s0.gamma < 0.0)) throw UsageError("pde-compare needs gamma0 < 0 (fluid with finite support)");
  const airy::ComparisonReport rep = airy::compare_reduction(s0, c.t_end, c.cells);
  bool ok = !rep.truncated && rep.monotone();
  for (double p : rep.observed_orders) ok = ok && p >= 0.7 && p <= 1.3;

  json j = rep;
  j["command"] = "pde-compare";
  j["order_bounds"] = {0.7, 1.3};
  const airy::VertexState v0 = airy::to_vertex(s0);
  if (v0.delta != 0.0 && !rep.truncated) {
    const airy::VertexDrift d = airy::vertex_drift(s0, c.t_end, c.cells.back());
    j["vertex"] = {{"xi0", d.xi0}, {"numeric", d.xi_numeric}, {"exact", d.xi_exact},
                   {"error", d.error()}, {"dx", d.dx}, {"within_2dx", d.within(2.0)}};
    ok = ok && d.within(2.0);
  }
  j["passed"] = ok;

  Output out(c.out);
  if (c.format == "json") {
    print_json(out.stream(), with_version(j));
  } else {
    airy::CsvWriter w(out.stream(), {"cells", "dx", "linf", "l1", "observed_order"});
    for (std::size_t i = 0; i < rep.errors.size(); ++i) {
      const auto& e = rep.errors[i];
      w.row({static_cast<double>(e.cells), e.dx, e.linf(), e.l1(),
             i == 0 ? std::numeric_limits<double>::quiet_NaN() : rep.observed_orders[i - 1]});
    }
  }
  if (!c.snapshot.empty()) {
    const auto [a, b] = airy::comparison_domain(s0);
    const auto r = airy::advance(airy::grid_from_state(s0, a, b, c.cells.back()), c.t_end);
    std::ofstream snap(c.snapshot);
    if (!snap) throw UsageError("cannot open snapshot file " + c.snapshot);
    airy::CsvWriter w(snap, {"x", "eta", "u"});
    for (int i = 0; i < r.grid.cells(); ++i) w.row({r.grid.x(i), r.grid.eta[i], r.grid.velocity(i)});
  }
  if (rep.truncated) std::cerr << "warning: comparison truncated: " << rep.reason << '\n';
  return ok ? kOk : kVerificationFailure;
}

int cmd_series(const RunConfig& c) {
  if (c.order < 1) throw UsageError("--order must be >= 1");
  const airy::SymState3 sym{c.alpha0, c.gamma0, c.zeta0};
  const airy::SeriesState s0 = airy::series_from_symmetric(sym, c.order);
  Output out(c.out);

  if (c.affinity) {
    json j{{"command", "series"}, {"affinity", json::array()}};
    bool ok = true;
    for (int n = 1; n <= 4; ++n) {
      const airy::AffinityResult r = airy::dry_point_affinity_check(n, s0);
      j["affinity"].push_back(r);
      ok = ok && r.passed();
    }
    j["eta0"] = s0.eta[0];
    j["passed"] = ok;
    print_json(out.stream(), with_version(j));
    return kOk;
  }

  airy::IntegratorOptions opts = integrator_options(c);
  const auto tr = airy::integrate_series(s0, c.t_end, opts);
  // Parabolic data stay parabolic: compare with the three-field reduction.
  const auto ref = airy::integrate<3>([](const airy::Vec<3>& v) {
    return airy::vf_X3(airy::SymState3::from_vec(v));
  }, sym.vec(), c.t_end, opts, airy::NoDiagnostics<3, 1>{});
  double deviation = std::numeric_limits<double>::quiet_NaN();
  if (!tr.states.empty() && !ref.states.empty() && tr.final_time() == ref.final_time()) {
    const auto& v = tr.final_state();
    const auto& r = ref.final_state();
    deviation = std::max({std::abs(v[0] - r[2]), std::abs(v[1] - r[1]),
                          std::abs(v[c.order + 1] - r[0])});
  }

  const int N = c.order;
  if (c.format == "json") {
    json rows = json::array();
    for (std::size_t i = 0; i < tr.size(); ++i) {
      const auto s = airy::SeriesState::from_vec(tr.states[i]);
      rows.push_back({{"t", tr.t[i]}, {"eta", s.eta}, {"u", s.u}});
    }
    json j{{"command", "series"}, {"order", N}, {"rows", rows},
           {"termination", std::string(airy::to_string(tr.reason))},
           {"deviation_from_parabolic_reduction", deviation}};
    print_json(out.stream(), with_version(j));
  } else {
    std::vector<std::string> header{"t"};
    for (int m = 0; m <= N; ++m) header.push_back("eta" + std::to_string(m));
    for (int m = 0; m <= N; ++m) header.push_back("u" + std::to_string(m));
    airy::CsvWriter w(out.stream(), header);
    for (std::size_t i = 0; i < tr.size(); ++i) {
      std::vector<double> row{tr.t[i]};
      row.insert(row.end(), tr.states[i].data(), tr.states[i].data() + tr.states[i].size());
      w.row(row);
    }
    std::cerr << "max deviation from the parabolic reduction at t_end: " << deviation << '\n';
  }
  return kOk;
}

int cmd_rarefaction(const RunConfig& c) {
  airy::SplitMix64 rng(c.seed);
  const std::size_t n = c.points.value_or(1000);
  double worst_eta = 0.0, worst_u = 0.0;
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = rng.uniform(0.5, 2.0);
    const double x = rng.uniform(-3.0, 3.0);
    const airy::PdeResidual r = airy::rarefaction_residual(x, t);
    worst_eta = std::max(worst_eta, std::abs(r.eta));
    worst_u = std::max(worst_u, std::abs(r.u));
    rows.push_back({x, t, r.eta, r.u});
  }
  constexpr double tol = 1e-14;
  const bool ok = worst_eta <= tol && worst_u <= tol;
  Output out(c.out);
  if (c.format == "json") {
    json j{{"command", "rarefaction"}, {"points", n}, {"seed", c.seed},
           {"max_residual_eta", worst_eta}, {"max_residual_u", worst_u},
           {"tolerance", tol}, {"passed", ok}};
    print_json(out.stream(), with_version(j));
  } else {
    airy::CsvWriter w(out.stream(), {"x", "t", "residual_eta", "residual_u"});
    for (const auto& r : rows) w.row(r);
  }
  return ok ? kOk : kVerificationFailure;
}

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--alpha0", c.alpha0, "initial velocity gradient");
  sub->add_option("--gamma0", c.gamma0, "initial curvature of eta");
  sub->add_option("--zeta0", c.zeta0, "initial height offset");
  sub->add_option("--omega0", c.omega0, "initial height slope");
  sub->add_option("--beta0", c.beta0, "initial velocity offset");
  sub->add_option("--t-end", c.t_end, "final time")->check(CLI::NonNegativeNumber);
  sub->add_option("--dt", c.dt, "fixed RK4 step (default: adaptive)")->check(CLI::NonNegativeNumber);
  sub->add_option("--tol", c.tol, "adaptive tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--points", c.points, "sample count");
  sub->add_option("--seed", c.seed, "PRNG seed");
  sub->add_option("--out", c.out, "output file (default stdout)");
  sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--config", "JSON config file; command-line flags override it");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  try {
    if (auto path = find_config_path(argc, argv)) load_config(*path, cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  }

  CLI::App app{"Finite-dimensional reductions of the Airy shallow water system"};
  app.set_version_flag("--version", std::string(airy::version()));
  app.require_subcommand(1);
  app.add_option("--config", "JSON config file; command-line flags override it");

  auto* sim = app.add_subcommand("simulate", "integrate the reduced ODEs");
  add_common(sim, cfg);
  sim->add_flag("--linear", cfg.linear, "linear-linear system (gamma = 0)");

  auto* cf = app.add_subcommand("closed-form", "sample the closed-form solution");
  add_common(cf, cfg);

  auto* ver = app.add_subcommand("verify", "run the verification suite");
  add_common(ver, cfg);
  ver->add_flag("--inject-wrong-f", cfg.inject_wrong_f, "use 1.01 f in P (harness check)");

  auto* pde = app.add_subcommand("pde-compare", "finite-volume cross-check of the reduction");
  add_common(pde, cfg);
  pde->add_option("--cells", cfg.cells, "resolution ladder")->check(CLI::PositiveNumber);
  pde->add_option("--snapshot", cfg.snapshot, "CSV snapshot (x, eta, u) at the finest resolution");

  auto* ser = app.add_subcommand("series", "symmetric power-series hierarchy");
  add_common(ser, cfg);
  ser->add_option("--order", cfg.order, "truncation order N");
  ser->add_flag("--affinity", cfg.affinity, "dry-point affinity report for n = 1..4");

  auto* rar = app.add_subcommand("rarefaction", "residual of the rarefaction fan");
  add_common(rar, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*sim) return cmd_simulate(cfg);
    if (*cf) return cmd_closed_form(cfg);
    if (*ver) return cmd_verify(cfg);
    if (*pde) return cmd_pde_compare(cfg);
    if (*ser) return cmd_series(cfg);
    if (*rar) return cmd_rarefaction(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const airy::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const airy::UnsupportedConfiguration& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const airy::OutOfDomain& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}
