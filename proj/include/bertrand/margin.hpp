#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace bertrand {

// Width of the inconclusive band, relative to the magnitude of the compared
// log-domain quantities.
inline constexpr double kRelativeBand = 1e-9;

enum class Verdict { satisfied, violated, inconclusive, not_applicable };

std::string_view to_string(Verdict v);

// Integer parameter assignment, e.g. {n: 6818} or {k: 8, n: 10437, m: 3}.
using Point = std::map<std::string, std::int64_t>;

std::string format_point(const Point& point);

// One inequality "lhs > rhs" inside a bound, both sides in log units unless
// the component says otherwise.
// The slack is stored rather than derived so that it can be formed at higher
// precision before rounding.
struct MarginComponent {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  double slack = 0;
  double error_bar = 0;
};

// Signed slack of one named inequality at one point. The slack is the minimum
// over the bound's components; satisfied iff slack >= 0 outside the error band.
struct Margin {
  std::string bound_id;
  Point point;
  double value = 0;  // headline quantity (e.g. the count bound); 0 when unused
  double slack = 0;
  double error_bar = 0;
  Verdict verdict = Verdict::inconclusive;
  std::vector<MarginComponent> components;
  std::string witness;     // exact-rational witness text, when one exists
  std::string precision;   // "double", "extended" or "exact"
};

// Adds a component whose error bar is the relative band plus `extra_error`.
void add_component(Margin& margin, std::string name, double lhs, double rhs, double extra_error = 0,
                   double relative_band = kRelativeBand);

// Same, with a slack computed elsewhere (e.g. in extended precision).
void add_slack_component(Margin& margin, std::string name, double lhs, double rhs, double slack,
                         double error_bar);

// Recomputes slack/error_bar/verdict from the components.
void settle(Margin& margin);

// JSON cannot carry infinities; they are written as the strings "inf"/"-inf".
nlohmann::json number_json(double v);

nlohmann::json to_json(const Margin& margin);

}  // namespace bertrand
