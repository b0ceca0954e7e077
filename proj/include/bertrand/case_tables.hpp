#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "bertrand/ratio.hpp"
#include "bertrand/sieve.hpp"

namespace bertrand {

enum class ClaimKind { beta_zero, divides };

// One bullet of a T2 case analysis: for primes p with lo*n < p <= hi*n the
// claim is either beta(p) = 0 or p divides the named container.
struct CaseBullet {
  Ratio lo;
  Ratio hi;
  ClaimKind kind;
  std::string container;  // empty for beta_zero
};

// The container ids are "A" and "B" for k = 4 and "A", "B8_3", "B8_5",
// "B8_7" for k = 8. Primes in (sqrt((k+1)n), residual_hi*n] are bounded
// as a product instead of case by case.
struct CaseTable {
  int k;
  std::int64_t structural_floor;
  std::vector<CaseBullet> bullets;
  Ratio residual_hi;
  std::string residual_bound;  // "product_4x" or "theta_upper_1001102"
};

const CaseTable& case_table(int k);
nlohmann::json case_table_json(const CaseTable& table);

// Exponent of p in a container at n.
std::int64_t container_valuation(int k, const std::string& container, std::int64_t n, std::uint64_t p);

struct CaseFailure {
  std::uint64_t p;
  int bullet;  // -1 when p fell outside every bullet
  std::string reason;
};

struct CaseReport {
  int k = 0;
  std::int64_t n = 0;
  std::uint64_t t2_primes = 0;
  std::uint64_t residual_primes = 0;
  std::vector<std::uint64_t> bullet_counts;
  double residual_log_product = 0;
  double residual_log_bound = 0;
  std::vector<CaseFailure> failures;

  bool ok() const { return failures.empty(); }
};

// Checks every T2 prime of C((k+1)n, kn) against the bullet table.
CaseReport case_coverage(const Sieve& sieve, int k, std::int64_t n);

nlohmann::json to_json(const CaseReport& report);

}  // namespace bertrand
