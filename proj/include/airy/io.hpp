#ifndef AIRY_IO_HPP
#define AIRY_IO_HPP

#include <iomanip>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "airy/integrator.hpp"
#include "airy/state.hpp"

#ifndef AIRY_VERSION
#define AIRY_VERSION "unknown"
#endif

namespace airy {

inline constexpr std::string_view version() { return AIRY_VERSION; }

inline void to_json(nlohmann::json& j, const State5& s) {
  j = nlohmann::json{{"alpha", s.alpha}, {"gamma", s.gamma}, {"zeta", s.zeta},
                     {"omega", s.omega}, {"beta", s.beta}};
}

inline void from_json(const nlohmann::json& j, State5& s) {
  j.at("alpha").get_to(s.alpha);
  j.at("gamma").get_to(s.gamma);
  j.at("zeta").get_to(s.zeta);
  j.at("omega").get_to(s.omega);
  j.at("beta").get_to(s.beta);
}

/// Minimal CSV writer: full double precision, header first.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::vector<std::string>& header) : os_(os) {
    os_ << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
    os_ << '\n';
  }

  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) os_ << (i ? "," : "") << values[i];
    os_ << '\n';
  }

 private:
  std::ostream& os_;
};

inline const std::vector<std::string>& trajectory_header() {
  static const std::vector<std::string> h{"t",     "alpha", "gamma", "zeta", "omega",
                                          "beta",  "K0",    "K1",    "K2"};
  return h;
}

/// Columns t, alpha, gamma, zeta, omega, beta, K0, K1, K2.
inline void write_trajectory_csv(std::ostream& os, const Trajectory<5>& tr) {
  CsvWriter w(os, trajectory_header());
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const Vec5& s = tr.states[i];
    const auto& d = tr.diagnostics[i];
    w.row({tr.t[i], s[0], s[1], s[2], s[3], s[4], d[0], d[1], d[2]});
  }
}

}  // namespace airy

#endif  // AIRY_IO_HPP
