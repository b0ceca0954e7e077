#include "bertrand/primality.hpp"

#include <array>
#include <string>

#include "bertrand/errors.hpp"

namespace bertrand {
namespace {

using u128 = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1;
  base %= m;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool strong_probable_prime(std::uint64_t n, std::uint64_t a, std::uint64_t d, unsigned s) {
  a %= n;
  if (a == 0) return true;
  std::uint64_t x = pow_mod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned r = 1; r < s; ++r) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
    if (x == 1) return false;
  }
  return false;
}

constexpr std::array<std::uint64_t, 18> kSmallPrimes = {2,  3,  5,  7,  11, 13, 17, 19, 23,
                                                         29, 31, 37, 41, 43, 47, 53, 59, 61};
constexpr std::array<std::uint64_t, 7> kWitnesses = {2, 325, 9375, 28178, 450775, 9780504, 1795265022};

// Residues mod 30 coprime to 30.
constexpr std::array<bool, 30> kWheel30 = [] {
  std::array<bool, 30> w{};
  for (int r = 0; r < 30; ++r) w[r] = (r % 2) && (r % 3) && (r % 5);
  return w;
}();

}  // namespace

bool is_prime_64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : kSmallPrimes) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  if (n < 61 * 61) return true;
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : kWitnesses)
    if (!strong_probable_prime(n, a, d, s)) return false;
  return true;
}

WindowSearchResult first_prime_in_window(std::uint64_t lo, std::uint64_t hi) {
  if (lo > hi)
    throw DomainError("first_prime_in_window: lo " + std::to_string(lo) + " exceeds hi " + std::to_string(hi));
  WindowSearchResult out{lo, hi, std::nullopt, 0, 0};
  std::uint64_t n = lo;
  for (; n <= hi && n <= 5; ++n) {
    ++out.tested_count;
    if (n == 2 || n == 3 || n == 5) {
      out.witness = n;
      return out;
    }
  }
  for (; n <= hi; ++n) {
    ++out.tested_count;
    if (kWheel30[n % 30]) {
      ++out.strong_tests;
      if (is_prime_64(n)) {
        out.witness = n;
        return out;
      }
    }
    if (n == UINT64_MAX) break;
  }
  return out;
}

}  // namespace bertrand
