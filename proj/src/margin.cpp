#include "bertrand/margin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bertrand {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::satisfied:
      return "satisfied";
    case Verdict::violated:
      return "violated";
    case Verdict::inconclusive:
      return "inconclusive";
    case Verdict::not_applicable:
      return "not-applicable";
  }
  return "unknown";
}

std::string format_point(const Point& point) {
  std::string out;
  for (const auto& [name, value] : point) {
    if (!out.empty()) out += ',';
    out += name + '=' + std::to_string(value);
  }
  return out;
}

void add_component(Margin& margin, std::string name, double lhs, double rhs, double extra_error,
                   double relative_band) {
  double scale = 1.0;
  if (std::isfinite(lhs)) scale = std::max(scale, std::abs(lhs));
  if (std::isfinite(rhs)) scale = std::max(scale, std::abs(rhs));
  margin.components.push_back({std::move(name), lhs, rhs, lhs - rhs, relative_band * scale + extra_error});
}

void add_slack_component(Margin& margin, std::string name, double lhs, double rhs, double slack,
                         double error_bar) {
  margin.components.push_back({std::move(name), lhs, rhs, slack, error_bar});
}

void settle(Margin& margin) {
  if (margin.verdict == Verdict::not_applicable) return;
  if (margin.components.empty()) {
    margin.verdict = Verdict::inconclusive;
    return;
  }
  const MarginComponent* worst = nullptr;
  for (const auto& c : margin.components) {
    const double s = c.slack;
    if (std::isnan(s)) {
      worst = &c;
      break;
    }
    if (!worst || s < worst->slack) worst = &c;
  }
  margin.slack = worst->slack;
  margin.error_bar = worst->error_bar;
  if (std::isnan(margin.slack))
    margin.verdict = Verdict::inconclusive;
  else if (std::abs(margin.slack) <= margin.error_bar)
    margin.verdict = Verdict::inconclusive;
  else
    margin.verdict = margin.slack > 0 ? Verdict::satisfied : Verdict::violated;
}

nlohmann::json number_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

nlohmann::json to_json(const Margin& margin) {
  nlohmann::json j;
  j["bound_id"] = margin.bound_id;
  j["point"] = margin.point;
  j["value"] = number_json(margin.value);
  j["slack"] = number_json(margin.slack);
  j["error_bar"] = number_json(margin.error_bar);
  j["verdict"] = std::string(to_string(margin.verdict));
  j["precision"] = margin.precision;
  if (!margin.witness.empty()) j["witness"] = margin.witness;
  auto& comps = j["components"] = nlohmann::json::array();
  for (const auto& c : margin.components)
    comps.push_back({{"name", c.name},
                     {"lhs", number_json(c.lhs)},
                     {"rhs", number_json(c.rhs)},
                     {"slack", number_json(c.slack)},
                     {"error_bar", number_json(c.error_bar)}});
  return j;
}

}  // namespace bertrand
