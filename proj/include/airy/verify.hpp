#ifndef AIRY_VERIFY_HPP
#define AIRY_VERIFY_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "airy/invariants.hpp"
#include "airy/io.hpp"
#include "airy/poisson.hpp"
#include "airy/random.hpp"
#include "airy/report.hpp"
#include "airy/state.hpp"

namespace airy {

/// Random state with gamma < 0 and positive vertex height, so the support is a finite interval.
inline State5 sample_physical_state(SplitMix64& rng, double box = 3.0) {
  const double gamma = -rng.uniform(0.1, box);
  const double mu = rng.uniform(0.1, box);
  const double xi = rng.uniform(-box, box);
  const double alpha = rng.uniform(-box, box);
  const double delta = rng.uniform(-box, box);
  return from_vertex({alpha, gamma, xi, mu, delta});
}

constexpr double kHEquivalenceTolerance = 1e-9;

/// H_n by density integration versus the K-representation, n = 1..5. Residuals are
/// relative to the sum of the absolute values of the K-representation's terms.
inline Report h_equivalence_check(const std::vector<State5>& states) {
  Report rep{"h-equivalence", {}, {}};
  for (int n = 1; n <= kMaxHamiltonian; ++n)
    rep.entries.emplace_back("H" + std::to_string(n) + " integral = K-representation",
                             kHEquivalenceTolerance);
  for (const State5& s : states) {
    const ConservedSet k = K_values(s);
    for (int n = 1; n <= kMaxHamiltonian; ++n) {
      const double byK = H_from_K(k.K0, k.K1, k.K2, n);
      const double scale = H_from_K(k.K0, std::abs(k.K1), std::abs(k.K2), n);
      const double diff = std::abs(byK - H_by_integration(s, n));
      rep.entries[n - 1].add(scale > 0.0 ? diff / scale : diff, s.vec());
    }
  }
  rep.finalize();
  return rep;
}

struct VerifyOptions {
  std::size_t points = 1000;
  std::uint64_t seed = 20240501;
  /// Replace f by 1.01 f in P (Jacobi and compatibility must fail, Lenard-Magri must not).
  bool inject_wrong_f = false;
};

struct VerifyResult {
  std::vector<Report> reports;
  bool passed() const {
    for (const auto& r : reports)
      if (!r.passed()) return false;
    return true;
  }
};

/// Every numerical verification of the Poisson structures and conserved quantities.
inline VerifyResult run_verification(const VerifyOptions& opt) {
  SplitMix64 rng(opt.seed);
  const auto pts = sample_sigma_points(rng, opt.points);
  const auto generic = sample_sigma_points(rng, opt.points, {3.0, 0.1, 0.1});
  const auto m3 = sample_m3_points(rng, opt.points);
  const auto lin = sample_linear_points(rng, opt.points);
  std::vector<State5> phys;
  phys.reserve(opt.points);
  for (std::size_t i = 0; i < opt.points; ++i) phys.push_back(sample_physical_state(rng));

  const Bivector5 P = opt.inject_wrong_f
                          ? P_f_field([](const SigmaState& s) { return 1.01 * f_of(s); })
                          : P_f_field();
  const Bivector5 Q = Q_g_field();

  VerifyResult out;
  out.reports.push_back(lenard_magri_check(pts, P, Q));
  Report structural = lenard_magri_check(pts, P_f_field([](const SigmaState&) { return 0.7; }),
                                         Q_g_field([](const SigmaState&) { return -1.3; }));
  structural.name = "lenard-magri-constant-f-g";
  out.reports.push_back(structural);
  Report jac = compatibility_check(pts, {-1.0, 0.5, 1.0, 2.0}, P, Q);
  jac.entries.push_back(obstruction_check(generic));
  out.reports.push_back(jac);
  out.reports.push_back(bi_involution_check(pts, P, Q));
  Report rank{"rank", {rank_check(pts, P)}, {}};
  out.reports.push_back(rank);
  out.reports.push_back(aux_pde_check(pts));
  out.reports.push_back(restricted_pairs(m3, lin));
  out.reports.push_back(h_equivalence_check(phys));
  return out;
}

inline nlohmann::json to_json(const VerifyResult& r, const VerifyOptions& opt) {
  nlohmann::json j;
  j["version"] = std::string(version());
  j["seed"] = opt.seed;
  j["points"] = opt.points;
  j["inject_wrong_f"] = opt.inject_wrong_f;
  j["passed"] = r.passed();
  j["reports"] = r.reports;
  return j;
}

}  // namespace airy

#endif  // AIRY_VERIFY_HPP
