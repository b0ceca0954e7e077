#include <doctest.h>

#include <cmath>
#include <random>

#include "bertrand/brace.hpp"
#include "bertrand/case_tables.hpp"
#include "bertrand/errors.hpp"
#include "oracles.hpp"

using namespace bertrand;

namespace {
const Sieve& sieve() {
  static const Sieve s(1'000'000);
  return s;
}

// Product of the integers in (a, b] for rational endpoints, exactly.
mpz_class open_closed_product(const Ratio& a, const Ratio& b) {
  mpz_class p = 1;
  for (std::int64_t i = a.floor() + 1; i <= b.floor(); ++i) p *= static_cast<long>(i);
  return p;
}
}  // namespace

TEST_CASE("robbins brackets the factorial") {
  for (int x = 1; x <= 170; ++x) {
    const auto r = robbins(x);
    const double lf = std::lgamma(x + 1.0);
    REQUIRE(r.log_l < lf);
    REQUIRE(lf < r.log_u);
  }
  const auto one = robbins(1);
  CHECK(std::exp(one.log_l) == doctest::Approx(0.99590).epsilon(1e-4));
  CHECK(std::exp(one.log_u) == doctest::Approx(1.00227).epsilon(1e-5));
  mpz_class f10;
  mpz_fac_ui(f10.get_mpz_t(), 10);
  CHECK(f10 == 3628800);
  CHECK(robbins(10).log_l < log_of(f10));
  CHECK(log_of(f10) < robbins(10).log_u);
  const double x = 5.0 * 6818;
  const auto big = robbins(x);
  CHECK(std::isfinite(big.log_l));
  CHECK(big.log_u - big.log_l == doctest::Approx(1 / (12 * x) - 1 / (12 * x + 1)).epsilon(1e-3));
  CHECK_THROWS_AS(robbins(0.5), DomainError);
}

TEST_CASE("brace examples") {
  auto five_two = brace_value(5, 2, true);
  CHECK(*five_two.exact == 10);
  CHECK(five_two.delta == 1);
  auto a = brace_value(Ratio(7, 2), 2, true);
  CHECK(*a.exact == 3);
  CHECK(a.delta == 1);
  auto b = brace_value(Ratio::parse("3.2"), Ratio::parse("1.5"), true);
  CHECK(*b.exact == 6);
  CHECK(b.delta == 2);
  // equal fractional parts count as {s} >= {r}
  auto c = brace_value(Ratio(9, 2), Ratio(3, 2), true);
  CHECK(c.delta == 1);
  CHECK(*c.exact == 4);
  CHECK(*c.exact == oracle::binomial(4, 1));
  CHECK_THROWS_AS(brace_value(2, 2), DomainError);
  CHECK_THROWS_AS(brace_value(Ratio(1, 2), Ratio(1, 3)), DomainError);
  CHECK_THROWS_AS(brace_value(20'000, 3, true), ResourceError);
}

TEST_CASE("random brace values match the defining products") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 1000; ++t) {
    const std::int64_t den = 1 + static_cast<std::int64_t>(rng() % 12);
    const std::int64_t r_num = den + static_cast<std::int64_t>(rng() % (499 * den));
    const std::int64_t s_num = r_num + 1 + static_cast<std::int64_t>(rng() % (500 * den - r_num));
    const Ratio s(s_num, den), r(r_num, den);
    if (!(s > r) || r < Ratio(1)) continue;
    const auto v = brace_value(s, r, true);
    REQUIRE(v.exact);
    CHECK(v.delta >= 1);
    CHECK(Ratio(v.delta) <= s);
    const mpz_class num = open_closed_product(s - r, s);
    const mpz_class den_p = open_closed_product(Ratio(0), r);
    CHECK(num % den_p == 0);
    CHECK(*v.exact * den_p == num);
    CHECK(*v.exact == oracle::binomial(s.floor(), r.floor()) * static_cast<long>(v.delta));
    CHECK(v.log_value == doctest::Approx(log_of(*v.exact)).epsilon(1e-9));
  }
}

TEST_CASE("beta examples and errors") {
  CHECK(oracle::binomial(15, 12) == 455);
  CHECK(beta_exponent(5, 4, 3) == 1);
  CHECK(beta_exponent(3, 4, 3) == 0);
  CHECK(beta_exponent(13, 4, 3) == 1);
  CHECK(beta_exponent(7, 4, 3) == 1);
  CHECK_THROWS_AS(beta_exponent(9, 4, 3), DomainError);
}

TEST_CASE("beta agrees with factorial valuations for (k+1)n <= 2000") {
  const auto primes = oracle::prime_list(2000);
  for (std::uint64_t k = 1; k < 2000; ++k)
    for (std::uint64_t n = 1; (k + 1) * n <= 2000; ++n)
      for (const auto p : primes) {
        if (p > (k + 1) * n) break;
        const std::uint64_t want = oracle::factorial_valuation((k + 1) * n, p) -
                                   oracle::factorial_valuation(k * n, p) - oracle::factorial_valuation(n, p);
        if (beta_exponent(p, k, n) != want) FAIL("k=" << k << " n=" << n << " p=" << p);
      }
}

TEST_CASE("decompose examples") {
  const auto d = decompose(sieve(), 4, 3);
  CHECK(d.t1.empty());
  CHECK(d.t2 == FactorMap{{5, 1}, {7, 1}});
  CHECK(d.t3 == FactorMap{{13, 1}});
  CHECK(factor_product(d.t1) * factor_product(d.t2) * factor_product(d.t3) == 455);
  CHECK(decompose(sieve(), 4, 2).t3.empty());
  CHECK(decompose(sieve(), 8, 5).t3 == FactorMap{{41, 1}, {43, 1}});
}

TEST_CASE("decomposition identity for k in {4, 8} and n <= 300") {
  for (std::uint64_t k : {4, 8})
    for (std::uint64_t n = 1; n <= 300; ++n) {
      const auto d = decompose(sieve(), k, n);
      const mpz_class want = oracle::binomial((k + 1) * n, k * n);
      REQUIRE(factor_product(d.t1) * factor_product(d.t2) * factor_product(d.t3) == want);
      REQUIRE(decomposition_identity_holds(d));
      const double root = std::sqrt(static_cast<double>((k + 1) * n));
      for (const auto& [p, e] : d.t1) REQUIRE(static_cast<double>(p) <= root);
      for (const auto& [p, e] : d.t2) {
        REQUIRE(static_cast<double>(p) > root);
        REQUIRE(p <= k * n);
      }
      for (const auto& [p, e] : d.t3) {
        REQUIRE(p > k * n);
        REQUIRE(p <= (k + 1) * n);
        if (n > 1) REQUIRE(e == 1);
      }
      CHECK(d.binom_log == doctest::Approx(log_of(want)).epsilon(1e-9));
    }
}

TEST_CASE("decomposition identity in logs beyond the exact budget") {
  const auto d = decompose(sieve(), 8, 20'000);
  CHECK(decomposition_identity_holds(d));
  CHECK(d.binom_log > 0);
}

TEST_CASE("bk values") {
  const auto v = bk_value(8, 93, 3, true);
  REQUIRE(v.exact);
  CHECK(*v.exact > 0);
  CHECK(v.log_value == doctest::Approx(log_of(*v.exact)).epsilon(1e-9));
  const auto small = bk_value(2, 2, 2, true);
  REQUIRE(small.exact);
  // {3 brace 2} / {3/2 brace 1} = 3 / 1
  CHECK(*small.exact == 3);
  CHECK(bk_value(8, 10437, 5).log_value > 1.129918 * 10437.0 / 5.0);
  CHECK_THROWS_AS(bk_value(1, 10, 2), DomainError);
  CHECK_THROWS_AS(bk_value(4, 2, 3), DomainError);
}

TEST_CASE("bk valuations agree with the exact rational") {
  for (std::int64_t k : {2, 4, 8})
    for (std::int64_t m : {2, 3, 5, 7})
      for (std::int64_t n = m; n <= 120; n += 7) {
        const auto v = bk_value(k, n, m, true);
        REQUIRE(v.exact);
        mpq_class rest = *v.exact;
        for (std::uint64_t p = 2; p <= static_cast<std::uint64_t>((k + 1) * n); ++p) {
          if (!oracle::trial_division(p)) continue;
          const std::int64_t e = bk_valuation(k, n, m, p);
          mpz_class pe;
          mpz_ui_pow_ui(pe.get_mpz_t(), p, static_cast<unsigned long>(e < 0 ? -e : e));
          if (e >= 0)
            rest /= pe;
          else
            rest *= pe;
        }
        rest.canonicalize();
        CHECK(rest == 1);
      }
}

TEST_CASE("case tables") {
  const auto& four = case_table(4);
  const auto& eight = case_table(8);
  CHECK(four.bullets.size() == 18);
  CHECK(four.structural_floor == 28);
  CHECK(eight.structural_floor == 64);
  CHECK(case_table_json(four).at("bullets").size() == four.bullets.size());
  CHECK_THROWS(case_table(5));
}

TEST_CASE("case coverage examples") {
  for (std::int64_t n : {100, 6818}) {
    const auto r = case_coverage(sieve(), 4, n);
    CHECK(r.ok());
    CHECK(r.t2_primes > 0);
  }
  const auto r8 = case_coverage(sieve(), 8, 100'000);
  CHECK(r8.ok());
  CHECK(to_json(r8).contains("bullet_counts"));
}

TEST_CASE("case coverage on small ranges") {
  for (std::int64_t n = 28; n <= 600; ++n) REQUIRE(case_coverage(sieve(), 4, n).ok());
  for (std::int64_t n = 64; n <= 600; ++n) REQUIRE(case_coverage(sieve(), 8, n).ok());
}
