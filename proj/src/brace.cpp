#include "bertrand/brace.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bertrand/errors.hpp"
#include "bertrand/primality.hpp"

namespace bertrand {
namespace {

double log_factorial(std::int64_t n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// Number of multiples of q in (0, x] for a non-negative rational x.
std::int64_t multiples_through(const Ratio& x, std::uint64_t q) {
  return x.floor() / static_cast<std::int64_t>(q);
}

void require_brace_args(const Ratio& s, const Ratio& r) {
  if (!(s > r) || r < Ratio(1))
    throw DomainError("brace needs s > r >= 1, got s=" + s.str() + " r=" + r.str());
}

}  // namespace

RobbinsBounds robbins(double x) {
  if (!(x >= 1)) throw DomainError("robbins bounds need x >= 1");
  const double base = 0.5 * std::log(2 * std::numbers::pi) + (x + 0.5) * std::log(x) - x;
  return {x, base + 1.0 / (12 * x + 1), base + 1.0 / (12 * x)};
}

BraceValue brace_value(const Ratio& s, const Ratio& r, bool want_exact) {
  require_brace_args(s, r);
  BraceValue out;
  out.s = s;
  out.r = r;
  const std::int64_t fs = s.floor();
  const std::int64_t fr = r.floor();
  const std::int64_t fd = (s - r).floor();
  out.delta = s.frac() >= r.frac() ? 1 : fd + 1;
  out.log_value = log_factorial(fs) - log_factorial(fd) - log_factorial(fr);
  if (want_exact) {
    if (fs > kExactBraceBudget)
      throw ResourceError("exact brace value requested for s=" + s.str() + " beyond the budget s <= " +
                          std::to_string(kExactBraceBudget));
    mpz_class top, low, den;
    mpz_fac_ui(top.get_mpz_t(), static_cast<unsigned long>(fs));
    mpz_fac_ui(low.get_mpz_t(), static_cast<unsigned long>(fd));
    mpz_fac_ui(den.get_mpz_t(), static_cast<unsigned long>(fr));
    mpz_class v = top / low;
    if (!mpz_divisible_p(v.get_mpz_t(), den.get_mpz_t()))
      throw std::logic_error("brace product is not an integer for s=" + s.str() + " r=" + r.str());
    out.exact = v / den;
  }
  return out;
}

std::int64_t brace_valuation(const Ratio& s, const Ratio& r, std::uint64_t p) {
  require_brace_args(s, r);
  const Ratio low = s - r;
  std::int64_t v = 0;
  const auto top = static_cast<std::uint64_t>(s.floor());
  for (std::uint64_t q = p; q <= top; q *= p) {
    v += multiples_through(s, q) - multiples_through(low, q) - multiples_through(r, q);
    if (q > top / p) break;
  }
  return v;
}

std::uint32_t beta_exponent(std::uint64_t p, std::uint64_t k, std::uint64_t n) {
  if (!is_prime_64(p)) throw DomainError(std::to_string(p) + " is not prime");
  if (k < 1 || n < 1) throw DomainError("beta_exponent needs k, n >= 1");
  const std::uint64_t top = (k + 1) * n;
  std::uint32_t beta = 0;
  for (std::uint64_t q = p; q <= top; q *= p) {
    beta += static_cast<std::uint32_t>(top / q - (k * n) / q - n / q);
    if (q > top / p) break;
  }
  return beta;
}

Decomposition decompose(const Sieve& sieve, std::uint64_t k, std::uint64_t n) {
  if (k < 1 || n < 1) throw DomainError("decompose needs k, n >= 1");
  Decomposition d;
  d.k = k;
  d.n = n;
  const std::uint64_t top = (k + 1) * n;
  d.binom_log = log_factorial(static_cast<std::int64_t>(top)) - log_factorial(static_cast<std::int64_t>(k * n)) -
                log_factorial(static_cast<std::int64_t>(n));
  sieve.for_each_prime(2, top, [&](std::uint64_t p) {
    const std::uint32_t beta = beta_exponent(p, k, n);
    if (beta == 0) return;
    if (p * p <= top)
      d.t1[p] = beta;
    else if (p <= k * n)
      d.t2[p] = beta;
    else
      d.t3[p] = beta;
  });
  return d;
}

mpz_class factor_product(const FactorMap& factors) {
  mpz_class out = 1;
  for (const auto& [p, e] : factors) {
    mpz_class pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), static_cast<unsigned long>(p), e);
    out *= pe;
  }
  return out;
}

double factor_log(const FactorMap& factors) {
  double out = 0;
  for (const auto& [p, e] : factors) out += e * std::log(static_cast<double>(p));
  return out;
}

bool decomposition_identity_holds(const Decomposition& d) {
  const std::uint64_t top = (d.k + 1) * d.n;
  if (top <= static_cast<std::uint64_t>(kExactBraceBudget)) {
    mpz_class binom;
    mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(top), static_cast<unsigned long>(d.k * d.n));
    return factor_product(d.t1) * factor_product(d.t2) * factor_product(d.t3) == binom;
  }
  const double total = factor_log(d.t1) + factor_log(d.t2) + factor_log(d.t3);
  return std::abs(total - d.binom_log) <= 1e-6 * std::max(1.0, d.binom_log);
}

BkValue bk_value(std::int64_t k, std::int64_t n, std::int64_t m, bool want_exact) {
  if (k < 2 || m < 2 || n < m)
    throw DomainError("B_k(n,m) needs k >= 2 and n >= m >= 2, got k=" + std::to_string(k) +
                      " n=" + std::to_string(n) + " m=" + std::to_string(m));
  const BraceValue top = brace_value(Ratio((k + 1) * n, m), Ratio(k * n, m), want_exact);
  const BraceValue bottom = brace_value(Ratio((k + 1) * n, 2 * m), Ratio(k * n, 2 * m), want_exact);
  BkValue out;
  out.k = k;
  out.n = n;
  out.m = m;
  out.log_value = top.log_value - bottom.log_value;
  if (want_exact) {
    mpq_class q(*top.exact, *bottom.exact);
    q.canonicalize();
    out.exact = q;
  }
  return out;
}

std::int64_t bk_valuation(std::int64_t k, std::int64_t n, std::int64_t m, std::uint64_t p) {
  return brace_valuation(Ratio((k + 1) * n, m), Ratio(k * n, m), p) -
         brace_valuation(Ratio((k + 1) * n, 2 * m), Ratio(k * n, 2 * m), p);
}

double log_of(const mpz_class& v) {
  if (sgn(v) <= 0) throw DomainError("log of a non-positive integer");
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::numbers::ln2;
}

double log_of(const mpq_class& v) { return log_of(mpz_class(v.get_num())) - log_of(mpz_class(v.get_den())); }

}  // namespace bertrand
