#include "bertrand/table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "bertrand/bounds.hpp"
#include "bertrand/errors.hpp"

namespace bertrand {

std::vector<TableRow> pnt_table(const Sieve& sieve, int k, std::span<const std::int64_t> n_list) {
  if (k != 4 && k != 8) throw UnknownIdError("no count table for k=" + std::to_string(k) + " (use 4 or 8)");
  for (const auto n : n_list) {
    if (n < 1) throw DomainError("table n must be positive");
    const auto need = static_cast<std::uint64_t>((k + 1) * n);
    if (need > sieve.limit())
      throw CoverageError("table row n=" + std::to_string(n) + " needs primes up to " + std::to_string(need));
  }
  std::vector<TableRow> rows;
  for (const auto n : n_list) {
    TableRow r;
    r.n = n;
    const double x = static_cast<double>(n);
    r.result = k == 4 ? theorem_401_count(x) : theorem_403_count(x);
    r.weak_pnt = weak_pnt(k, x);
    r.actual = sieve.pi(static_cast<std::uint64_t>((k + 1) * n)) - sieve.pi(static_cast<std::uint64_t>(k * n));
    rows.push_back(r);
  }
  return rows;
}

std::string one_decimal(double x) {
  double r = std::floor(x * 10 + 0.5) / 10;
  if (r == 0) r = 0;  // no "-0.0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", r);
  return buf;
}

std::string table_csv(const std::vector<TableRow>& rows) {
  std::ostringstream os;
  os << "n,result,weak_pnt,actual\n";
  for (const auto& r : rows) os << r.n << ',' << one_decimal(r.result) << ',' << one_decimal(r.weak_pnt) << ',' << r.actual << '\n';
  return os.str();
}

nlohmann::json to_json(const std::vector<TableRow>& rows) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rows)
    j.push_back({{"n", r.n}, {"result", r.result}, {"weak_pnt", r.weak_pnt}, {"actual", r.actual},
                 {"display", {{"result", one_decimal(r.result)}, {"weak_pnt", one_decimal(r.weak_pnt)}}}});
  return j;
}

}  // namespace bertrand
