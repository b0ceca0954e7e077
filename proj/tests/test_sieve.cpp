#include <doctest.h>

#include <random>

#include "bertrand/errors.hpp"
#include "bertrand/sieve.hpp"
#include "oracles.hpp"

using namespace bertrand;

TEST_CASE("smallest sieve") {
  const Sieve s(2);
  CHECK(s.pi(2) == 1);
  CHECK(s.is_prime(2));
  CHECK_FALSE(s.is_prime(1));
  CHECK(s.primes_in(1, 2).primes == std::vector<std::uint64_t>{2});
}

TEST_CASE("counts against trial division") {
  const Sieve s(100);
  std::uint64_t c = 0;
  for (std::uint64_t n = 0; n <= 100; ++n) {
    c += oracle::trial_division(n);
    CHECK(s.is_prime(n) == oracle::trial_division(n));
    CHECK(s.pi(n) == c);
  }
  CHECK(s.pi(100) == 25);
  CHECK(s.pi(1) == 0);
}

TEST_CASE("pi at 10^6 and the k=4 table row") {
  const Sieve s(1'000'000);
  const auto ref = oracle::eratosthenes(1'000'000);
  std::uint64_t c = 0;
  for (std::uint64_t n = 0; n <= 1'000'000; ++n) {
    c += ref[n];
    if (n % 997 == 0 || n == 1'000'000) REQUIRE(s.pi(n) == c);
  }
  CHECK(s.pi(1'000'000) == 78498);
  CHECK(s.pi(50'000) - s.pi(40'000) == 930);
}

TEST_CASE("pi steps by one exactly at primes") {
  const Sieve s(200'000);
  for (std::uint64_t x = 2; x <= 200'000; ++x) REQUIRE((s.pi(x) - s.pi(x - 1) == 1) == s.is_prime(x));
}

TEST_CASE("primes_in examples") {
  const Sieve s(1000);
  CHECK(s.primes_in(13, 15).primes == std::vector<std::uint64_t>{13});
  CHECK(s.primes_in(9, 10).empty());
  CHECK(s.primes_in(41, 44).primes == std::vector<std::uint64_t>{41, 43});
  CHECK(s.primes_in(0, 1).empty());
}

TEST_CASE("primes_in splits disjointly") {
  const Sieve s(300'000);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    std::uint64_t a = rng() % 300'000, b = rng() % 300'000, c = rng() % 300'000;
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    auto left = s.primes_in(a, b).primes;
    const auto right = s.primes_in(b + 1, c).primes;
    const auto all = s.primes_in(a, c).primes;
    for (std::size_t i = 1; i < all.size(); ++i) REQUIRE(all[i - 1] < all[i]);
    if (!left.empty() && !right.empty()) REQUIRE(left.back() < right.front());
    left.insert(left.end(), right.begin(), right.end());
    REQUIRE(left == all);
  }
}

TEST_CASE("next_prime and prev_prime against the oracle") {
  const Sieve s(100'000);
  const auto ref = oracle::eratosthenes(100'000);
  std::uint64_t last = 0;
  for (std::uint64_t n = 0; n <= 99'900; ++n) {
    if (ref[n]) last = n;
    REQUIRE(s.prev_prime(n) == last);
    std::uint64_t q = n + 1;
    while (!ref[q]) ++q;
    REQUIRE(s.next_prime(n) == q);
  }
  CHECK(s.next_prime(1) == 2);
  CHECK(s.next_prime(2) == 3);
  CHECK(s.next_prime(31397) == 31469);
  CHECK(s.prev_prime(31468) == 31397);
}

TEST_CASE("for_each_prime matches primes_in") {
  const Sieve s(50'000);
  for (std::uint64_t lo : {0, 1, 2, 3, 4, 127, 128, 129, 40'000})
    for (std::uint64_t hi : {2, 3, 130, 1'000, 49'999, 50'000}) {
      std::vector<std::uint64_t> got;
      s.for_each_prime(lo, hi, [&](std::uint64_t p) { got.push_back(p); });
      REQUIRE(got == (lo <= hi ? s.primes_in(lo, hi).primes : std::vector<std::uint64_t>{}));
    }
}

TEST_CASE("segmented sieve equals a monolithic sieve up to 10^7") {
  const std::uint64_t limit = 10'000'000;
  const Sieve s(limit);
  const auto ref = oracle::eratosthenes(limit);
  std::uint64_t count = 0;
  for (std::uint64_t n = 0; n <= limit; ++n) {
    count += ref[n];
    if (s.is_prime(n) != static_cast<bool>(ref[n])) FAIL("mismatch at " << n);
  }
  CHECK(s.pi(limit) == count);
  CHECK(count == 664579);
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    std::uint64_t a = rng() % limit, b = rng() % limit;
    if (a > b) std::swap(a, b);
    std::vector<std::uint64_t> want;
    for (std::uint64_t n = a; n <= b; ++n)
      if (ref[n]) want.push_back(n);
    REQUIRE(s.primes_in(a, b).primes == want);
  }
}

TEST_CASE("worker count does not change the result") {
  const Sieve one(5'000'000, {.jobs = 1});
  const Sieve four(5'000'000, {.jobs = 4});
  CHECK(one.primes_in(0, 5'000'000) == four.primes_in(0, 5'000'000));
  CHECK(one.pi(5'000'000) == four.pi(5'000'000));
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(Sieve(1), DomainError);
  CHECK_THROWS_AS(Sieve(2'000, {.budget = 1'000}), ResourceError);
  const Sieve s(100);
  CHECK_THROWS_AS(s.pi(101), CoverageError);
  CHECK_THROWS_AS(s.primes_in(50, 101), CoverageError);
  CHECK_THROWS_AS(s.next_prime(97), CoverageError);
  CHECK_THROWS_AS(s.prev_prime(1000), CoverageError);
}

TEST_CASE("reported primes have no small divisor") {
  const Sieve s(30'000);
  for (const auto p : s.primes_in(0, 30'000).primes)
    for (std::uint64_t d = 2; d * d <= p; ++d) REQUIRE(p % d != 0);
}
