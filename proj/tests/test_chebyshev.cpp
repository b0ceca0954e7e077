#include <doctest.h>

#include <cmath>
#include <random>

#include "bertrand/brace.hpp"
#include "bertrand/chebyshev.hpp"
#include "bertrand/errors.hpp"
#include "oracles.hpp"

using namespace bertrand;

namespace {
const Sieve& sieve() {
  static const Sieve s(10'000'000);
  return s;
}
const ThetaTable& table() {
  static const ThetaTable t(sieve());
  return t;
}
}  // namespace

TEST_CASE("theta and psi examples") {
  CHECK(theta(sieve(), 1).value == 0);
  CHECK(theta(sieve(), 2).value == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(theta(sieve(), 10).value == doctest::Approx(std::log(210.0)).epsilon(1e-15));
  CHECK(theta(sieve(), 10.9).value == theta(sieve(), 10).value);
  CHECK(psi(sieve(), 1).value == 0);
  CHECK(psi(sieve(), 10).value == doctest::Approx(std::log(2520.0)).epsilon(1e-15));
  // lcm(1..100)
  mpz_class l = 1;
  for (unsigned long i = 2; i <= 100; ++i) mpz_lcm_ui(l.get_mpz_t(), l.get_mpz_t(), i);
  CHECK(psi(sieve(), 100).value == doctest::Approx(log_of(l)).epsilon(1e-13));
  CHECK(psi_prime_powers(sieve(), 100).value == doctest::Approx(log_of(l)).epsilon(1e-13));
}

TEST_CASE("error bound is reported and small") {
  const auto t = theta(sieve(), 1e7);
  CHECK(t.error_bound > 0);
  CHECK(t.error_bound < 1e-6);
  const auto primes = oracle::prime_list(10'000'000);
  CHECK(std::fabs(static_cast<long double>(t.value) - oracle::theta(primes, 10'000'000)) <= 1e-6L);
}

TEST_CASE("compensated sum") {
  CompensatedSum s;
  s.add(1e16);
  for (int i = 0; i < 1000; ++i) s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1000.0);
  CHECK(s.terms() == 1002);
}

TEST_CASE("integer_root") {
  for (std::uint64_t x = 0; x < 5'000; ++x)
    for (unsigned m = 1; m <= 5; ++m) {
      const auto r = integer_root(x, m);
      REQUIRE(std::pow(static_cast<long double>(r), m) <= x);
      REQUIRE(std::pow(static_cast<long double>(r + 1), m) > x);
    }
  CHECK(integer_root(18446744073709551615ull, 2) == 4294967295ull);
  CHECK(integer_root(1'000'000'000'000'000'000ull, 3) == 1'000'000);
  CHECK(integer_root(999'999'999'999'999'999ull, 3) == 999'999);
  CHECK_THROWS_AS(integer_root(10, 0), DomainError);
}

TEST_CASE("psi by both formulas on every integer up to 10^6") {
  // running psi: add log p at every prime power
  const auto is = oracle::eratosthenes(1'000'000);
  std::vector<std::uint64_t> base(1'000'001, 0);
  for (std::uint64_t p = 2; p <= 1'000'000; ++p)
    if (is[p])
      for (std::uint64_t q = p; q <= 1'000'000; q *= p) {
        base[q] = p;
        if (q > 1'000'000 / p) break;
      }
  long double running = 0;
  for (std::uint64_t x = 2; x <= 1'000'000; ++x) {
    if (base[x]) running += std::log(static_cast<long double>(base[x]));
    const double via_theta = table().psi(static_cast<double>(x)).value;
    if (std::fabs(via_theta - static_cast<double>(running)) > 1e-9 * static_cast<double>(running))
      FAIL("psi mismatch at " << x);
  }
  for (double x : {2.0, 3.0, 64.0, 1e3, 65536.0, 99991.0, 1e6}) {
    CHECK(psi(sieve(), x).value == doctest::Approx(psi_prime_powers(sieve(), x).value).epsilon(1e-9));
    CHECK(table().psi(x).value == doctest::Approx(psi(sieve(), x).value).epsilon(1e-12));
    CHECK(table().theta(x).value == doctest::Approx(theta(sieve(), x).value).epsilon(1e-12));
  }
}

TEST_CASE("psi - theta is at most theta(sqrt x) log2 x") {
  for (double x = 2; x <= 1e7; x *= 1.37) {
    const double t = theta(sieve(), x).value, p = psi(sieve(), x).value;
    CHECK(t <= p);
    CHECK(p - t <= theta(sieve(), std::sqrt(x)).value * std::log2(x) + 1e-9);
  }
}

TEST_CASE("theta_between matches exact primorial quotients") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    std::uint64_t a = rng() % 10'000, b = rng() % 10'000 + 1;
    if (a > b) std::swap(a, b);
    mpz_class prod = 1;
    for (std::uint64_t p = a + 1; p <= b; ++p)
      if (oracle::trial_division(p)) prod *= static_cast<unsigned long>(p);
    const double got = theta_between(sieve(), static_cast<double>(a), static_cast<double>(b)).value;
    const double want = prod == 1 ? 0.0 : log_of(prod);
    CHECK(got == doctest::Approx(want).epsilon(1e-6));
    CHECK(log_of(primorial(sieve(), b)) - log_of(primorial(sieve(), a)) == doctest::Approx(want).epsilon(1e-6));
  }
  CHECK(primorial(sieve(), 25) == 223092870);
}

TEST_CASE("check_bound examples") {
  CHECK(check_bound(sieve(), "theta_lower_0985", 11927).verdict == Verdict::satisfied);
  CHECK(check_bound(sieve(), "theta_upper_1001102", 2).verdict == Verdict::satisfied);
  const auto m = check_bound(sieve(), "product_4x", 25);
  CHECK(m.verdict == Verdict::satisfied);
  CHECK(m.slack >= 0);
  CHECK(check_bound(sieve(), "theta_lower_0985", 11926).verdict == Verdict::not_applicable);
  CHECK_THROWS_AS(check_bound(sieve(), "no_such_bound", 10), UnknownIdError);
  CHECK_THROWS_AS(theta(sieve(), 2e7), CoverageError);
}

TEST_CASE("theta lower and upper bounds at every integer in [11927, 10^7]") {
  // theta is a step function: the lower bound is tightest just below each
  // prime and the upper bound at each prime, so these points cover every x.
  std::uint64_t checked = 0;
  sieve().for_each_prime(11'929, 10'000'000, [&](std::uint64_t p) {
    for (const std::uint64_t x : {p - 1, p}) {
      const Margin lo = check_bound(table(), "theta_lower_0985", static_cast<double>(x));
      const Margin hi = check_bound(table(), "theta_upper_1001102", static_cast<double>(x));
      if (lo.verdict != Verdict::satisfied || hi.verdict != Verdict::satisfied) FAIL("bound fails at " << x);
      ++checked;
    }
  });
  CHECK(check_bound(table(), "theta_lower_0985", 10'000'000).verdict == Verdict::satisfied);
  CHECK(checked > 1'000'000);
}

TEST_CASE("3.965 envelope at powers of two") {
  const Sieve big(100'000'000);
  for (std::uint64_t x = 2; x <= 100'000'000; x *= 2) {
    const Margin m = check_bound(big, "dusart_theta_3965", static_cast<double>(x));
    CHECK(m.verdict != Verdict::violated);
    if (m.verdict != Verdict::not_applicable) CHECK(m.verdict == Verdict::satisfied);
  }
}

TEST_CASE("every registry bound holds where it applies") {
  for (const auto& b : analytic_bounds()) {
    CAPTURE(b.id);
    CHECK_FALSE(b.source.empty());
    CHECK_FALSE(b.valid_from_text.empty());
    for (double x = 2; x <= 1e7; x *= 1.9) {
      const Margin m = check_bound(table(), b.id, x);
      if (x < b.valid_from || (b.strict_threshold && x == b.valid_from))
        CHECK(m.verdict == Verdict::not_applicable);
      else
        CHECK(m.verdict == Verdict::satisfied);
    }
  }
  const auto j = analytic_registry_json();
  CHECK(j.at("version") == kAnalyticRegistryVersion);
  CHECK(j.at("bounds").size() == analytic_bounds().size());
}
