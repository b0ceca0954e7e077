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

#include "bertrand/margin.hpp"
#include "bertrand/sieve.hpp"

namespace bertrand {

// Shared state for evaluators that consult primes (count bounds, theta
// comparisons). When `sieve` is null such evaluators build their own.
struct EvalContext {
  const Sieve* sieve = nullptr;
  std::uint64_t sieve_budget = 1'000'000'000;
};

struct BoundSpec {
  std::string id;
  std::vector<std::string> params;
  Point defaults;              // fixed parameters, e.g. m=3 for L2.2.7a
  std::string domain;          // where the evaluator is defined
  std::string claim;           // range over which the source asserts the inequality
  Point claim_from;            // base point of the claim, one entry per scanned parameter
  std::string anchor;
  std::function<bool(const Point&)> in_domain;
  // Largest integer the evaluator needs the sieve to cover; 0 when it never does.
  std::function<std::uint64_t(const Point&)> coverage;
  std::function<Margin(const Point&, const Sieve*)> eval_double;
  std::function<Margin(const Point&, const Sieve*)> eval_extended;  // may be empty
  std::function<Margin(const Point&)> eval_exact;                   // may be empty
};

std::span<const BoundSpec> bound_registry();
const BoundSpec& bound_spec(std::string_view id);

inline constexpr int kBoundRegistryVersion = 1;
nlohmann::json bound_registry_json();

// Fills parameters missing from `point` with the BoundSpec defaults and checks the domain.
Point complete_point(const BoundSpec& spec, const Point& point);

// Evaluates in double precision; an inconclusive result is re-evaluated
// exactly when the BoundSpec has a rational form, otherwise in extended precision.
Margin evaluate(std::string_view id, const Point& point, const EvalContext& ctx = {});

// Integer sample points of [lo, hi] with the given step: every point while
// there are at most kExhaustivePoints of them, then geometric sampling with
// kSamplesPerDecade points per decade up to hi (always included).
inline constexpr std::uint64_t kExhaustivePoints = 100'000;
inline constexpr int kSamplesPerDecade = 1000;
std::vector<std::int64_t> scan_points(std::int64_t lo, std::int64_t hi, std::int64_t step = 1);

struct ScanResult {
  std::string bound_id;
  std::string param;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::int64_t step = 1;
  std::uint64_t points = 0;
  std::uint64_t satisfied = 0;
  std::uint64_t violated = 0;
  std::uint64_t inconclusive = 0;
  std::uint64_t not_applicable = 0;
  Margin minimum;  // smallest slack; ties go to the smallest point
  std::int64_t argmin = 0;
  std::vector<std::pair<std::int64_t, double>> trace;  // only when requested

  bool all_satisfied() const { return points > 0 && satisfied == points; }
};

struct ScanOptions {
  std::int64_t step = 1;
  unsigned jobs = 1;
  bool keep_trace = false;
};

// Scans one parameter of the bound over [lo, hi], other parameters taken
// from `fixed`. Throws DomainError for an empty range.
ScanResult scan(std::string_view id, std::string_view param, std::int64_t lo, std::int64_t hi,
                const Point& fixed = {}, const ScanOptions& options = {}, const EvalContext& ctx = {});

std::string scan_trace_csv(const ScanResult& result);
nlohmann::json to_json(const ScanResult& result);

struct ThresholdResult {
  std::string bound_id;
  std::string param;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  // Least point from which the slack stays >= 0 at every sample up to hi.
  std::optional<std::int64_t> tail_start;
  // Largest point up to which the slack is >= 0 from lo onwards.
  std::optional<std::int64_t> head_end;
  std::uint64_t samples = 0;
  std::uint64_t sign_changes = 0;  // among the samples
  std::string sampling;
};

ThresholdResult threshold(std::string_view id, std::string_view param, std::int64_t lo, std::int64_t hi,
                          const Point& fixed = {}, const EvalContext& ctx = {});

nlohmann::json to_json(const ThresholdResult& result);

// Exponents of the B_k(n,m) envelopes, exact and as doubles.
struct EFExponents {
  mpq_class e_exact;
  mpq_class f_exact;
  double e = 0;
  double f = 0;
};

EFExponents e_f_exponents(std::int64_t k, std::int64_t n, std::int64_t m);

// log of the upper (with e^E) and lower (with e^F) envelopes of B_k(n,m).
// The upper needs n > m and the lower n > 2m; outside those they are +inf / -inf.
struct BkEnvelope {
  double log_upper = 0;
  double log_lower = 0;
};

BkEnvelope bk_envelope(std::int64_t k, std::int64_t n, std::int64_t m);

// Count-bound values used by the comparison tables.
double theorem_401_count(double n);
double theorem_403_count(double n);
double theorem_406_count(double k, double n);
double weak_pnt(double k, double n);

// Primes up to `limit` by a small local sieve; used for the 503/509 sums.
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

}  // namespace bertrand
