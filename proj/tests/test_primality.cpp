#include <doctest.h>

#include <random>

#include "bertrand/errors.hpp"
#include "bertrand/primality.hpp"
#include "bertrand/sieve.hpp"
#include "oracles.hpp"

using namespace bertrand;

TEST_CASE("examples") {
  CHECK_FALSE(is_prime_64(0));
  CHECK_FALSE(is_prime_64(1));
  CHECK(is_prime_64(2));
  CHECK_FALSE(is_prime_64(7271));
  CHECK(7271 == 11 * 661);
  CHECK(is_prime_64((std::uint64_t{1} << 61) - 1));
  CHECK(oracle::gmp_probable_prime((std::uint64_t{1} << 61) - 1));
  CHECK(is_prime_64(18446744073709551557ull));
  CHECK_FALSE(is_prime_64(18446744073709551615ull));
}

TEST_CASE("strong pseudoprimes to small bases are rejected") {
  for (std::uint64_t n : {2047ull, 1373653ull, 25326001ull, 3215031751ull, 2152302898747ull, 3474749660383ull,
                          341550071728321ull, 3825123056546413051ull, 4759123141ull}) {
    CHECK_FALSE(oracle::gmp_probable_prime(n));
    CHECK_FALSE(is_prime_64(n));
  }
}

TEST_CASE("agrees with the sieve on every n up to 10^7") {
  const std::uint64_t limit = 10'000'000;
  const Sieve s(limit);
  for (std::uint64_t n = 0; n <= limit; ++n)
    if (is_prime_64(n) != s.is_prime(n)) FAIL("mismatch at " << n);
}

TEST_CASE("agrees with GMP on random 64-bit inputs") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 20'000; ++i) {
    const std::uint64_t n = rng() | 1;
    REQUIRE(is_prime_64(n) == oracle::gmp_probable_prime(n));
  }
  // products of two primes near 2^32
  for (std::uint64_t p : {4294967291ull, 4294967279ull, 4294967231ull})
    for (std::uint64_t q : {4294967197ull, 4294967189ull}) CHECK_FALSE(is_prime_64(p * q));
}

TEST_CASE("window search examples") {
  const auto a = first_prime_in_window(13, 15);
  REQUIRE(a.witness);
  CHECK(*a.witness == 13);
  const auto b = first_prime_in_window(7267, 7279);
  CHECK_FALSE(b.witness);
  CHECK(b.tested_count == 13);
  const auto c = first_prime_in_window(17, 24);
  REQUIRE(c.witness);
  CHECK(*c.witness == 17);
  CHECK(*first_prime_in_window(2, 2).witness == 2);
  CHECK(*first_prime_in_window(0, 5).witness == 2);
  CHECK_THROWS_AS(first_prime_in_window(10, 9), DomainError);
}

TEST_CASE("window witness is the least prime of the window") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 3'000; ++t) {
    const std::uint64_t lo = (t % 2 == 0) ? rng() % 1'000'000'000'000ull : rng() % 100'000;
    const std::uint64_t hi = lo + rng() % 400;
    const auto r = first_prime_in_window(lo, hi);
    CHECK(r.lo == lo);
    CHECK(r.hi == hi);
    CHECK(r.strong_tests <= r.tested_count);
    std::uint64_t first = 0;
    bool found = false;
    for (std::uint64_t x = lo; x <= hi && !found; ++x)
      if (oracle::gmp_probable_prime(x)) {
        first = x;
        found = true;
      }
    REQUIRE(r.witness.has_value() == found);
    if (found) {
      REQUIRE(*r.witness == first);
      REQUIRE(r.tested_count == first - lo + 1);
    } else {
      REQUIRE(r.tested_count == hi - lo + 1);
    }
  }
}

TEST_CASE("the wheel skips most candidates") {
  const auto r = first_prime_in_window(1'000'000'000'000'000ull, 1'000'000'000'000'000ull + 2'000);
  REQUIRE(r.witness);
  // only residues coprime to 30 reach the strong test
  CHECK(r.strong_tests * 30 <= r.tested_count * 8 + 30);
}
