#ifndef AIRY_REPORT_HPP
#define AIRY_REPORT_HPP

#include <algorithm>
#include <cstddef>
#include <iomanip>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "airy/types.hpp"

namespace airy {

/// Shortest round-trippable decimal form, for labels ("0.5", "-1").
inline std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  std::string full = os.str();
  for (int p = 1; p <= 17; ++p) {
    std::ostringstream o;
    o << std::setprecision(p) << v;
    if (std::stod(o.str()) == v) return o.str();
  }
  return full;
}

/// One verified identity: worst residual over all sampled points and the offenders.
struct CheckEntry {
  std::string identity;
  double tolerance = 0.0;
  double max_residual = 0.0;
  std::size_t points = 0;
  std::vector<std::vector<double>> failing_points;

  CheckEntry() = default;
  CheckEntry(std::string name, double tol) : identity(std::move(name)), tolerance(tol) {}

  bool passed() const { return failing_points.empty(); }

  /// Records a residual with an explicit verdict (for criteria that are not a single bound).
  void record(double residual, bool ok, std::vector<double> point) {
    ++points;
    if (!(residual <= max_residual)) max_residual = residual;  // NaN propagates
    if (!ok) failing_points.push_back(std::move(point));
  }

  template <class Derived>
  void add(double residual, const Eigen::MatrixBase<Derived>& point) {
    const auto& p = point.derived().eval();
    record(residual, residual <= tolerance, std::vector<double>(p.data(), p.data() + p.size()));
  }

  /// Canonical ordering so reports do not depend on evaluation order.
  void finalize() { std::sort(failing_points.begin(), failing_points.end()); }
};

struct Report {
  std::string name;
  std::vector<CheckEntry> entries;
  std::vector<std::string> notes;

  bool passed() const {
    return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.passed(); });
  }

  const CheckEntry* find(const std::string& identity) const {
    for (const auto& e : entries)
      if (e.identity == identity) return &e;
    return nullptr;
  }

  void finalize() {
    for (auto& e : entries) e.finalize();
  }
};

inline void to_json(nlohmann::json& j, const CheckEntry& e) {
  j = nlohmann::json{{"identity", e.identity},
                     {"tolerance", e.tolerance},
                     {"max_residual", e.max_residual},
                     {"points", e.points},
                     {"passed", e.passed()},
                     {"failing_points", e.failing_points}};
}

inline void to_json(nlohmann::json& j, const Report& r) {
  j = nlohmann::json{{"name", r.name}, {"passed", r.passed()}, {"entries", r.entries}};
  if (!r.notes.empty()) j["notes"] = r.notes;
}

}  // namespace airy

#endif  // AIRY_REPORT_HPP
