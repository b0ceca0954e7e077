#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "bertrand/certificate.hpp"
#include "bertrand/sieve.hpp"

namespace bertrand {

struct VerifyOptions {
  unsigned jobs = 1;
};

// Prime in the open interval (kn, (k+1)n) for every n in [lo, hi].
Certificate verify_interval_family(const Sieve& sieve, std::int64_t k, std::int64_t lo, std::int64_t hi,
                                   const VerifyOptions& options = {});

// Prime p with n < p < (num*n + add)/den for every n in [lo, hi], checked by
// walking consecutive primes: the integers whose next prime is q form a run
// [p, q-1], and within a run the condition is monotone in n.
Certificate verify_affine_family(const Sieve& sieve, std::int64_t num, std::int64_t add, std::int64_t den,
                                 std::int64_t lo, std::int64_t hi, const VerifyOptions& options = {});

// verify_affine_family with add = 0: a prime in (n, num*n/den).
Certificate verify_ratio_family(const Sieve& sieve, std::int64_t num, std::int64_t den, std::int64_t lo,
                                std::int64_t hi, const VerifyOptions& options = {});

// Per-n reference for the affine family: failing n in [lo, hi].
std::vector<std::int64_t> affine_failures_naive(const Sieve& sieve, std::int64_t num, std::int64_t add,
                                                std::int64_t den, std::int64_t lo, std::int64_t hi);

enum class CountConvention { open, left_closed };

// At least `required` primes in (n, kn) (or [n, kn) when left_closed).
Certificate verify_count_family(const Sieve& sieve, std::int64_t k, std::int64_t required, std::int64_t lo,
                                std::int64_t hi, const VerifyOptions& options = {},
                                CountConvention convention = CountConvention::open);

// Largest integer below (n+1)^(2+eps), with eps parsed from decimal text.
// Both the parse and the power are rounded down, so the window is never wider
// than the true one.
std::uint64_t legendre_window_top(std::string_view epsilon, std::uint64_t n);

// Prime in [n^2 + 1, legendre_window_top(eps, n)] for every n in [lo, hi].
Certificate verify_legendre(std::string_view epsilon, std::int64_t lo, std::int64_t hi,
                            const VerifyOptions& options = {});

// Long form of verify_legendre that saves a checkpoint after every block and
// resumes from an existing checkpoint with the same epsilon and range.
struct CheckpointOptions {
  std::string path;
  std::int64_t block = 1'000'000;
  VerifyOptions verify;
  // Called after each block; returning false stops the job (status partial).
  std::function<bool(const Certificate&)> progress;
};

Certificate verify_legendre_checkpointed(std::string_view epsilon, std::int64_t lo, std::int64_t hi,
                                         const CheckpointOptions& options);

// Number of primes in (n^d, n^(d+1)) against n^(d - (log d)/2).
Certificate verify_power_interval(const Sieve& sieve, std::int64_t n, std::int64_t d);

// The affine map f(x) = a x + b with rational coefficients.
struct AffineMap {
  mpq_class a;
  mpq_class b;
};

// f^m(n) by m-fold application.
mpq_class iterate_f(const AffineMap& f, std::int64_t m, const mpq_class& n);
// f^m(n) = a^m n + b (a^m - 1)/(a - 1), or n + m b when a = 1.
mpq_class iterate_f_closed(const AffineMap& f, std::int64_t m, const mpq_class& n);
// Both forms, throwing if they disagree.
mpq_class iterate_f_checked(const AffineMap& f, std::int64_t m, const mpq_class& n);
// Least real n0 with f^m(n) <= c n for all n >= n0, when a^m < c.
std::optional<mpq_class> iterate_threshold(const AffineMap& f, std::int64_t m, const mpq_class& c);

// Numeric check of a division-algorithm reduction: for each n in [lo, hi]
// and residue r, the sub-interval produced for (n, r) must lie inside the
// superset interval claimed for n.
struct ContainmentReport {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::uint64_t pairs = 0;
  std::vector<std::pair<std::int64_t, std::int64_t>> violations;  // (n, r)
  // n whose own sub-interval falls below the floor of the theorem it cites.
  std::vector<std::int64_t> inapplicable;
  bool ok() const { return violations.empty(); }
};

nlohmann::json to_json(const ContainmentReport& r);

// Thm 2.1.4 / 2.2.11 form: 4 | n + r (resp. 8) and the sub-interval
// (n + r, c (n + r)/d) sits inside (n, (c n + add)/d); `floor` is the least
// m = (n + r)/d the cited interval theorem covers.
ContainmentReport check_shift_containment(std::int64_t c, std::int64_t d, std::int64_t add, std::int64_t floor,
                                          std::int64_t lo, std::int64_t hi);

// Corollary form: n = 8k + j and (8(ck + j), 9(ck + j)) inside (cn, (c+1)n).
ContainmentReport check_corollary_containment(std::int64_t c, std::int64_t lo, std::int64_t hi);

// Re-tests a certificate: a 1% sample of witnesses (at least one) must be
// prime under is_prime_64 and lie in their interval, and every listed
// failure must fail again under the window search or a fresh count.
struct RecheckReport {
  std::uint64_t witnesses_checked = 0;
  std::uint64_t failures_checked = 0;
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

RecheckReport recheck(const Certificate& certificate, double sample_fraction = 0.01);
nlohmann::json to_json(const RecheckReport& r);

// Named theorem drivers.
struct DriverOptions {
  std::optional<std::int64_t> from;
  std::optional<std::int64_t> to;
  unsigned jobs = 1;
  std::uint64_t sieve_budget = 1'000'000'000;
  bool long_job = false;
  std::string checkpoint;  // long jobs only
};

struct TheoremDriver {
  std::string id;
  std::string statement;
  std::int64_t lo = 0;  // default range
  std::int64_t hi = 0;
  // Failures the statement is known to have, as found by this toolkit; a
  // driver with an expectation passes when its failures match it.
  std::optional<std::string> finding;
  bool long_only = false;
  std::function<Certificate(std::int64_t lo, std::int64_t hi, const DriverOptions&)> run;
};

std::span<const TheoremDriver> theorem_drivers();
const TheoremDriver& theorem_driver(std::string_view id);

// Runs a driver over its default range or the override in `options`; the
// elapsed time is filled in.
Certificate run_theorem(std::string_view id, const DriverOptions& options = {});

// Status passes for a driver: verified, or for a driver with a recorded
// finding, failed in exactly the recorded way.
bool driver_outcome_ok(const TheoremDriver& driver, const Certificate& c);

}  // namespace bertrand
