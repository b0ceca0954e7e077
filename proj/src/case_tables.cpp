#include "bertrand/case_tables.hpp"

#include <cmath>

#include "bertrand/brace.hpp"
#include "bertrand/chebyshev.hpp"
#include "bertrand/errors.hpp"

namespace bertrand {
namespace {

CaseBullet dead(Ratio lo, Ratio hi) { return {lo, hi, ClaimKind::beta_zero, ""}; }
CaseBullet in(Ratio lo, Ratio hi, std::string container) {
  return {lo, hi, ClaimKind::divides, std::move(container)};
}

const CaseTable kTable4{
    4,
    28,
    {
        dead({5, 2}, 4),
        in(2, {5, 2}, "A"),
        dead({5, 3}, 2),
        in({4, 3}, {5, 3}, "B"),
        dead({5, 4}, {4, 3}),
        in(1, {5, 4}, "A"),
        dead({5, 6}, 1),
        in({2, 3}, {5, 6}, "B"),
        dead({5, 8}, {2, 3}),
        in({1, 2}, {5, 8}, "A"),
        dead({5, 11}, {1, 2}),
        in({4, 9}, {5, 11}, "B"),
        dead({5, 12}, {4, 9}),
        in({1, 3}, {5, 12}, "B"),
        dead({5, 16}, {1, 3}),
        in({2, 7}, {5, 16}, "A"),
        dead({5, 18}, {2, 7}),
        in({1, 4}, {5, 18}, "A"),
    },
    {1, 4},
    "product_4x",
};

const CaseTable kTable8{
    8,
    64,
    {
        dead({9, 2}, 8),
        in(4, {9, 2}, "A"),
        dead(3, 4),
        in({8, 3}, 3, "B8_3"),
        dead({9, 4}, {8, 3}),
        in(2, {9, 4}, "A"),
        dead({9, 5}, 2),
        in({8, 5}, {9, 5}, "B8_5"),
        dead({3, 2}, {8, 5}),
        in({4, 3}, {3, 2}, "A"),
        dead({9, 7}, {4, 3}),
        in({8, 7}, {9, 7}, "B8_7"),
        dead({9, 8}, {8, 7}),
        in(1, {9, 8}, "A"),
        dead({9, 10}, 1),
        in({4, 5}, {9, 10}, "A"),
        dead({3, 4}, {4, 5}),
        in({2, 3}, {3, 4}, "A"),
        dead({9, 14}, {2, 3}),
        in({4, 7}, {9, 14}, "A"),
        dead({9, 16}, {4, 7}),
        in({1, 2}, {9, 16}, "A"),
        dead({9, 19}, {1, 2}),
    },
    {9, 19},
    "theta_upper_1001102",
};

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// p > x*n for a positive rational x, exactly.
bool above(std::uint64_t p, const Ratio& x, std::int64_t n) {
  return static_cast<__int128>(p) * x.den() > static_cast<__int128>(x.num()) * n;
}

}  // namespace

const CaseTable& case_table(int k) {
  if (k == 4) return kTable4;
  if (k == 8) return kTable8;
  throw UnknownIdError("no case table for k=" + std::to_string(k) + " (only 4 and 8)");
}

nlohmann::json case_table_json(const CaseTable& table) {
  nlohmann::json j;
  j["k"] = table.k;
  j["structural_floor"] = table.structural_floor;
  auto& list = j["bullets"] = nlohmann::json::array();
  for (const auto& b : table.bullets) {
    nlohmann::json e{{"lo", b.lo.str()}, {"hi", b.hi.str()},
                     {"claim", b.kind == ClaimKind::beta_zero ? "beta_zero" : "divides"}};
    if (!b.container.empty()) e["container"] = b.container;
    list.push_back(e);
  }
  j["residual"] = {{"lo", "sqrt((k+1)n)"}, {"hi", table.residual_hi.str()}, {"bound", table.residual_bound}};
  return j;
}

std::int64_t container_valuation(int k, const std::string& container, std::int64_t n, std::uint64_t p) {
  if (k == 4) {
    if (container == "A") return brace_valuation(Ratio(5 * n, 2), Ratio(2 * n), p);
    if (container == "B") return brace_valuation(Ratio(5 * n, 3), Ratio(4 * n, 3), p);
  } else if (k == 8) {
    if (container == "A") return brace_valuation(Ratio(9 * n, 2), Ratio(4 * n), p);
    if (container == "B8_3") return bk_valuation(8, n, 3, p);
    if (container == "B8_5") return bk_valuation(8, n, 5, p);
    if (container == "B8_7") return bk_valuation(8, n, 7, p);
  }
  throw UnknownIdError("unknown container '" + container + "' for k=" + std::to_string(k));
}

CaseReport case_coverage(const Sieve& sieve, int k, std::int64_t n) {
  const CaseTable& table = case_table(k);
  if (n < table.structural_floor)
    throw DomainError("case analysis for k=" + std::to_string(k) + " needs n >= " +
                      std::to_string(table.structural_floor));
  CaseReport report;
  report.k = k;
  report.n = n;
  report.bullet_counts.assign(table.bullets.size(), 0);
  const auto un = static_cast<std::uint64_t>(n);
  const std::uint64_t top = static_cast<std::uint64_t>(k + 1) * un;
  const std::uint64_t root = isqrt(top);

  sieve.for_each_prime(root + 1, static_cast<std::uint64_t>(k) * un, [&](std::uint64_t p) {
    ++report.t2_primes;
    const std::uint32_t beta = beta_exponent(p, static_cast<std::uint64_t>(k), un);
    if (beta > 1) report.failures.push_back({p, -1, "beta(p)=" + std::to_string(beta) + " exceeds 1 in T2"});
    int hit = -1;
    int hits = 0;
    for (std::size_t i = 0; i < table.bullets.size(); ++i) {
      const CaseBullet& b = table.bullets[i];
      if (above(p, b.lo, n) && !above(p, b.hi, n)) {
        hit = static_cast<int>(i);
        ++hits;
      }
    }
    if (hits == 0) {
      if (!above(p, table.residual_hi, n)) {
        ++report.residual_primes;
        return;
      }
      report.failures.push_back({p, -1, "not covered by any case"});
      return;
    }
    if (hits > 1) {
      report.failures.push_back({p, hit, "covered by " + std::to_string(hits) + " cases"});
      return;
    }
    ++report.bullet_counts[static_cast<std::size_t>(hit)];
    const CaseBullet& b = table.bullets[static_cast<std::size_t>(hit)];
    const std::string range = "(" + b.lo.str() + "n, " + b.hi.str() + "n]";
    if (b.kind == ClaimKind::beta_zero) {
      if (beta != 0) report.failures.push_back({p, hit, "beta(p)=" + std::to_string(beta) + " in " + range});
    } else {
      const std::int64_t v = container_valuation(k, b.container, n, p);
      if (v < 1)
        report.failures.push_back({p, hit, "does not divide " + b.container + " in " + range});
      else if (v < static_cast<std::int64_t>(beta))
        report.failures.push_back({p, hit, "beta(p) exceeds its exponent in " + b.container});
    }
  });

  // Residual band bounded as a whole product.
  const double hi = table.residual_hi.to_double() * static_cast<double>(n);
  if (hi > static_cast<double>(root)) {
    report.residual_log_product = theta_between(sieve, static_cast<double>(root), hi).value;
  }
  report.residual_log_bound = k == 4 ? hi * std::log(4.0) : 1.001102 * hi;
  if (report.residual_log_product >= report.residual_log_bound)
    report.failures.push_back({0, -1, "residual product exceeds " + table.residual_bound});
  return report;
}

nlohmann::json to_json(const CaseReport& report) {
  nlohmann::json j{{"k", report.k},
                   {"n", report.n},
                   {"ok", report.ok()},
                   {"t2_primes", report.t2_primes},
                   {"residual_primes", report.residual_primes},
                   {"bullet_counts", report.bullet_counts},
                   {"residual_log_product", report.residual_log_product},
                   {"residual_log_bound", report.residual_log_bound}};
  auto& f = j["failures"] = nlohmann::json::array();
  for (const auto& x : report.failures) f.push_back({{"p", x.p}, {"case", x.bullet}, {"reason", x.reason}});
  return j;
}

}  // namespace bertrand
