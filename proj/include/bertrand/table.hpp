#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "bertrand/sieve.hpp"

namespace bertrand {

// One row of the count-bound comparison: the proven lower bound for the
// number of primes in (kn, (k+1)n), the weak PNT estimate, and the true count
// pi((k+1)n) - pi(kn).
struct TableRow {
  std::int64_t n = 0;
  double result = 0;
  double weak_pnt = 0;
  std::uint64_t actual = 0;
};

// k must be 4 or 8; the sieve must cover (k+1) * max(n_list).
std::vector<TableRow> pnt_table(const Sieve& sieve, int k, std::span<const std::int64_t> n_list);

// Half-up rounding to one decimal, formatted ("-55.8", "846.4").
std::string one_decimal(double x);

std::string table_csv(const std::vector<TableRow>& rows);
nlohmann::json to_json(const std::vector<TableRow>& rows);

}  // namespace bertrand
