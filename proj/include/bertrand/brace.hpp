#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <gmpxx.h>

#include "bertrand/ratio.hpp"
#include "bertrand/sieve.hpp"

namespace bertrand {

// Stirling-type envelopes l(x) < x! < u(x), in natural-log units.
struct RobbinsBounds {
  double x = 0;
  double log_l = 0;
  double log_u = 0;
};

RobbinsBounds robbins(double x);

// Largest s for which brace_value will build the exact integer.
inline constexpr std::int64_t kExactBraceBudget = 10'000;

// {s brace r} = prod of integers in (s-r, s] / prod of integers in (0, r],
// which equals delta * C([s], [r]).
struct BraceValue {
  Ratio s;
  Ratio r;
  std::int64_t delta = 1;
  double log_value = 0;
  std::optional<mpz_class> exact;
};

BraceValue brace_value(const Ratio& s, const Ratio& r, bool want_exact = false);

// Exponent of the prime p in {s brace r}; exact for any size.
std::int64_t brace_valuation(const Ratio& s, const Ratio& r, std::uint64_t p);

// Exponent of p in C((k+1)n, kn) by the floor-difference sum. Throws
// DomainError when p is not prime.
std::uint32_t beta_exponent(std::uint64_t p, std::uint64_t k, std::uint64_t n);

using FactorMap = std::map<std::uint64_t, std::uint32_t>;

// C((k+1)n, kn) = T1 T2 T3 split by prime size.
struct Decomposition {
  std::uint64_t k = 0;
  std::uint64_t n = 0;
  FactorMap t1;  // p <= sqrt((k+1)n)
  FactorMap t2;  // sqrt((k+1)n) < p <= kn
  FactorMap t3;  // kn < p <= (k+1)n
  double binom_log = 0;
};

Decomposition decompose(const Sieve& sieve, std::uint64_t k, std::uint64_t n);

mpz_class factor_product(const FactorMap& factors);
double factor_log(const FactorMap& factors);

// T1 T2 T3 == C((k+1)n, kn): exact when (k+1)n <= kExactBraceBudget, else
// compared in logs to 1e-6 relative.
bool decomposition_identity_holds(const Decomposition& d);

// B_k(n,m) = {(k+1)n/m brace kn/m} / {(k+1)n/2m brace kn/2m}.
struct BkValue {
  std::int64_t k = 0;
  std::int64_t n = 0;
  std::int64_t m = 0;
  double log_value = 0;
  std::optional<mpq_class> exact;
};

BkValue bk_value(std::int64_t k, std::int64_t n, std::int64_t m, bool want_exact = false);

std::int64_t bk_valuation(std::int64_t k, std::int64_t n, std::int64_t m, std::uint64_t p);

// log of a positive mpz/mpq without overflowing a double.
double log_of(const mpz_class& v);
double log_of(const mpq_class& v);

}  // namespace bertrand
