#pragma once

// Reference implementations that share no code with the library.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace oracle {

inline bool trial_division(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Plain byte-per-integer sieve.
inline std::vector<char> eratosthenes(std::uint64_t limit) {
  std::vector<char> is(limit + 1, 1);
  is[0] = 0;
  if (limit >= 1) is[1] = 0;
  for (std::uint64_t p = 2; p * p <= limit; ++p)
    if (is[p])
      for (std::uint64_t q = p * p; q <= limit; q += p) is[q] = 0;
  return is;
}

inline std::vector<std::uint64_t> prime_list(std::uint64_t limit) {
  const auto is = eratosthenes(limit);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 2; i <= limit; ++i)
    if (is[i]) out.push_back(i);
  return out;
}

// Exponent of p in n!.
inline std::uint64_t factorial_valuation(std::uint64_t n, std::uint64_t p) {
  std::uint64_t e = 0;
  for (std::uint64_t q = p; q <= n; q *= p) {
    e += n / q;
    if (q > n / p) break;
  }
  return e;
}

inline mpz_class binomial(unsigned long n, unsigned long k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline bool gmp_probable_prime(std::uint64_t n) {
  const mpz_class z(std::to_string(n));
  return mpz_probab_prime_p(z.get_mpz_t(), 30) != 0;
}

// Sum of log p over primes p <= x, in long double.
inline long double theta(const std::vector<std::uint64_t>& primes, std::uint64_t x) {
  long double s = 0;
  for (const auto p : primes) {
    if (p > x) break;
    s += std::log(static_cast<long double>(p));
  }
  return s;
}

}  // namespace oracle
