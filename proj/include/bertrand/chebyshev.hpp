#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "bertrand/margin.hpp"
#include "bertrand/sieve.hpp"

namespace bertrand {

// Neumaier-compensated running sum with a running bound on its rounding error.
class CompensatedSum {
 public:
  void add(double term);
  double value() const { return sum_ + compensation_; }
  // Bound on |computed - exact| given each term carries at most one rounding.
  double error_bound() const;
  std::uint64_t terms() const { return terms_; }

 private:
  double sum_ = 0;
  double compensation_ = 0;
  double abs_total_ = 0;
  std::uint64_t terms_ = 0;
};

enum class ChebyshevKind { theta, psi };

struct ChebyshevValue {
  double x = 0;
  double value = 0;
  double error_bound = 0;
  ChebyshevKind kind = ChebyshevKind::theta;
};

// theta(x) = sum of log p over primes p <= x. Real x is floored.
ChebyshevValue theta(const Sieve& sieve, double x);

// Sum of log p over primes in (a, b]; avoids the cancellation of theta(b)-theta(a).
ChebyshevValue theta_between(const Sieve& sieve, double a, double b);

// psi(x) = sum_{m>=1} theta(x^{1/m}), stopping once x^{1/m} < 2.
ChebyshevValue psi(const Sieve& sieve, double x);

// psi(x) by direct enumeration of prime powers p^k <= x.
ChebyshevValue psi_prime_powers(const Sieve& sieve, double x);

// Exact product of the primes <= x.
mpz_class primorial(const Sieve& sieve, std::uint64_t x);

// floor(x^{1/m}) for integer x, exact.
std::uint64_t integer_root(std::uint64_t x, unsigned m);

// Cumulative theta at every prime up to a limit; theta(x) becomes an O(1)
// lookup after pi(x).
class ThetaTable {
 public:
  explicit ThetaTable(const Sieve& sieve);
  const Sieve& sieve() const { return *sieve_; }
  ChebyshevValue theta(double x) const;
  ChebyshevValue psi(double x) const;

 private:
  const Sieve* sieve_;
  std::vector<double> cumulative_;  // cumulative_[i] = theta(p_i), p_0 = 2
};

// Explicit analytic estimates imported from the literature. Stored as data;
// the evaluation forms are fixed by `form`.
enum class BoundForm {
  theta_lower,     // theta(x) > c x
  theta_upper,     // theta(x) < c x
  psi_lower,       // psi(x) > c x
  psi_upper,       // psi(x) < c x
  theta_envelope,  // |theta(x) - x| < c x / log^2 x
  pi_upper,        // pi(x) <= c x / log x
  primorial_upper  // prod_{p<=x} p < c^x
};

struct AnalyticBound {
  std::string id;
  BoundForm form;
  double constant;
  std::string constant_text;
  double valid_from;
  bool strict_threshold;  // asserted for x > valid_from rather than x >= valid_from
  std::string valid_from_text;
  std::string statement;
  std::string source;
};

std::span<const AnalyticBound> analytic_bounds();
const AnalyticBound& analytic_bound(std::string_view id);

// Evaluates one registry bound against the sieve at x. Below the bound's
// validity threshold the verdict is not_applicable and nothing is asserted.
Margin check_bound(const Sieve& sieve, std::string_view bound_id, double x);
Margin check_bound(const ThetaTable& table, std::string_view bound_id, double x);

inline constexpr int kAnalyticRegistryVersion = 1;
nlohmann::json analytic_registry_json();

}  // namespace bertrand
