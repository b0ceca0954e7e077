#include "bertrand/chebyshev.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "bertrand/errors.hpp"

namespace bertrand {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::uint64_t cutoff(double x) {
  if (!(x >= 0)) throw DomainError("Chebyshev argument must be non-negative");
  return static_cast<std::uint64_t>(std::floor(x));
}

ChebyshevValue make_value(double x, const CompensatedSum& sum, ChebyshevKind kind) {
  return {x, sum.value(), sum.error_bound(), kind};
}

// Relative error bound of a compensated sum of n positive terms totalling v.
double positive_sum_error(double v, std::uint64_t n) {
  return kEps * (2.5 * v) + static_cast<double>(n) * kEps * kEps * v;
}

const std::array<AnalyticBound, 9> kBounds = {{
    {"theta_lower_0985", BoundForm::theta_lower, 0.985, "0.985", 11927, false, "11927",
     "theta(x) > 0.985 x", "schoenfeld1976"},
    {"theta_upper_1001102", BoundForm::theta_upper, 1.001102, "1.001102", 1, false, "1",
     "theta(x) < 1.001102 x", "schoenfeld1976"},
    {"psi_lower_099903839", BoundForm::psi_lower, 0.99903839, "0.99903839", std::exp(19.0), false,
     "e^19", "psi(x) > 0.99903839 x", "schoenfeld1976"},
    {"psi_upper_100096161", BoundForm::psi_upper, 1.00096161, "1.00096161", std::exp(19.0), false,
     "e^19", "psi(x) < 1.00096161 x", "schoenfeld1976"},
    {"pi_upper_125506", BoundForm::pi_upper, 1.25506, "1.25506", 1, true, "1",
     "pi(x) <= 1.25506 x / log x", "rosser1962"},
    {"product_4x", BoundForm::primorial_upper, 4, "4", 1, false, "1", "prod_{p<=x} p < 4^x",
     "erdos2003 p.167"},
    {"dusart_theta_02", BoundForm::theta_envelope, 0.2, "0.2", 3594641, false, "3594641",
     "|theta(x) - x| < 0.2 x / log^2 x", "dusart2010 Thm 5.2"},
    {"dusart_theta_001", BoundForm::theta_envelope, 0.01, "0.01", 7713133853.0, false,
     "7713133853", "|theta(x) - x| < 0.01 x / log^2 x", "dusart2010 Thm 5.2"},
    {"dusart_theta_3965", BoundForm::theta_envelope, 3.965, "3.965", 2, false, "2",
     "|theta(x) - x| < 3.965 x / log^2 x", "dusart2010 Thm 5.2"},
}};

std::string_view form_name(BoundForm f) {
  switch (f) {
    case BoundForm::theta_lower:
      return "theta_lower";
    case BoundForm::theta_upper:
      return "theta_upper";
    case BoundForm::psi_lower:
      return "psi_lower";
    case BoundForm::psi_upper:
      return "psi_upper";
    case BoundForm::theta_envelope:
      return "theta_envelope";
    case BoundForm::pi_upper:
      return "pi_upper";
    case BoundForm::primorial_upper:
      return "primorial_upper";
  }
  return "unknown";
}

// Shared evaluation; the callables supply theta, psi and pi at x.
template <class Theta, class Psi, class Pi>
Margin evaluate_bound(const AnalyticBound& b, double x, Theta&& theta_at, Psi&& psi_at, Pi&& pi_at) {
  Margin m;
  m.bound_id = b.id;
  m.point = {{"x", static_cast<std::int64_t>(std::floor(x))}};
  m.precision = "double";
  const bool applies = b.strict_threshold ? x > b.valid_from : x >= b.valid_from;
  if (!applies) {
    m.verdict = Verdict::not_applicable;
    return m;
  }
  const double c = b.constant;
  auto log_err = [](const ChebyshevValue& v) { return v.value > 0 ? v.error_bound / v.value : 0.0; };
  switch (b.form) {
    case BoundForm::theta_lower: {
      const ChebyshevValue t = theta_at(x);
      m.value = t.value;
      add_component(m, "log theta(x) > log(c x)", std::log(t.value), std::log(c * x), log_err(t));
      break;
    }
    case BoundForm::theta_upper: {
      const ChebyshevValue t = theta_at(x);
      m.value = t.value;
      add_component(m, "log(c x) > log theta(x)", std::log(c * x), std::log(t.value), log_err(t));
      break;
    }
    case BoundForm::psi_lower: {
      const ChebyshevValue p = psi_at(x);
      m.value = p.value;
      add_component(m, "log psi(x) > log(c x)", std::log(p.value), std::log(c * x), log_err(p));
      break;
    }
    case BoundForm::psi_upper: {
      const ChebyshevValue p = psi_at(x);
      m.value = p.value;
      add_component(m, "log(c x) > log psi(x)", std::log(c * x), std::log(p.value), log_err(p));
      break;
    }
    case BoundForm::theta_envelope: {
      const ChebyshevValue t = theta_at(x);
      m.value = t.value;
      const double lx = std::log(x);
      const double gap = std::abs(t.value - x);
      const double extra = gap > 0 ? (t.error_bound + kEps * x) / gap : 0.0;
      add_component(m, "log(c x / log^2 x) > log|theta(x) - x|", std::log(c * x / (lx * lx)),
                    std::log(gap), extra);
      break;
    }
    case BoundForm::pi_upper: {
      const double count = static_cast<double>(pi_at(x));
      m.value = count;
      // Non-strict bound: equality counts as satisfied, so the band is not widened.
      add_component(m, "log(c x / log x) >= log pi(x)", std::log(c * x / std::log(x)),
                    std::log(count));
      break;
    }
    case BoundForm::primorial_upper: {
      const ChebyshevValue t = theta_at(x);
      m.value = t.value;
      add_component(m, "x log c > theta(x)", x * std::log(c), t.value, t.error_bound);
      break;
    }
  }
  settle(m);
  return m;
}

}  // namespace

void CompensatedSum::add(double term) {
  const double t = sum_ + term;
  if (std::abs(sum_) >= std::abs(term))
    compensation_ += (sum_ - t) + term;
  else
    compensation_ += (term - t) + sum_;
  sum_ = t;
  abs_total_ += std::abs(term);
  ++terms_;
}

double CompensatedSum::error_bound() const {
  // Each term is a correctly rounded logarithm (half an ulp) and Neumaier's
  // sum adds at most 2 eps |S| + n eps^2 sum |x_i|.
  return kEps * (0.5 * abs_total_ + 2 * std::abs(value())) +
         static_cast<double>(terms_) * kEps * kEps * abs_total_;
}

ChebyshevValue theta(const Sieve& sieve, double x) {
  CompensatedSum sum;
  const std::uint64_t hi = cutoff(x);
  if (hi >= 2) sieve.for_each_prime(2, hi, [&](std::uint64_t p) { sum.add(std::log(static_cast<double>(p))); });
  return make_value(x, sum, ChebyshevKind::theta);
}

ChebyshevValue theta_between(const Sieve& sieve, double a, double b) {
  CompensatedSum sum;
  const std::uint64_t lo = cutoff(a) + 1;
  const std::uint64_t hi = cutoff(b);
  if (hi >= lo) sieve.for_each_prime(lo, hi, [&](std::uint64_t p) { sum.add(std::log(static_cast<double>(p))); });
  return make_value(b, sum, ChebyshevKind::theta);
}

std::uint64_t integer_root(std::uint64_t x, unsigned m) {
  if (m == 0) throw DomainError("integer_root with m = 0");
  if (m == 1 || x < 2) return x;
  auto r = static_cast<std::uint64_t>(std::pow(static_cast<double>(x), 1.0 / m));
  auto pow_le = [&](std::uint64_t base) {
    unsigned __int128 acc = 1;
    for (unsigned i = 0; i < m; ++i) {
      acc *= base;
      if (acc > x) return false;
    }
    return true;
  };
  while (r > 0 && !pow_le(r)) --r;
  while (pow_le(r + 1)) ++r;
  return r;
}

ChebyshevValue psi(const Sieve& sieve, double x) {
  const std::uint64_t hi = cutoff(x);
  sieve.for_each_prime(hi, hi, [](std::uint64_t) {});  // coverage check
  CompensatedSum sum;
  double error = 0;
  for (unsigned m = 1;; ++m) {
    const std::uint64_t r = integer_root(hi, m);
    if (r < 2) break;
    const ChebyshevValue t = theta(sieve, static_cast<double>(r));
    sum.add(t.value);
    error += t.error_bound;
  }
  return {x, sum.value(), error + sum.error_bound(), ChebyshevKind::psi};
}

ChebyshevValue psi_prime_powers(const Sieve& sieve, double x) {
  const std::uint64_t hi = cutoff(x);
  CompensatedSum sum;
  if (hi >= 2) {
    sieve.for_each_prime(2, hi, [&](std::uint64_t p) {
      const double lp = std::log(static_cast<double>(p));
      for (std::uint64_t pk = p;; pk *= p) {
        sum.add(lp);
        if (pk > hi / p) break;
      }
    });
  }
  return make_value(x, sum, ChebyshevKind::psi);
}

mpz_class primorial(const Sieve& sieve, std::uint64_t x) {
  // Balanced product tree keeps the multiplications roughly equal-sized.
  std::vector<mpz_class> level;
  if (x >= 2) sieve.for_each_prime(2, x, [&](std::uint64_t p) { level.emplace_back(static_cast<unsigned long>(p)); });
  if (level.empty()) return 1;
  while (level.size() > 1) {
    std::vector<mpz_class> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(level[i] * level[i + 1]);
    if (level.size() % 2) next.push_back(level.back());
    level = std::move(next);
  }
  return level.front();
}

ThetaTable::ThetaTable(const Sieve& sieve) : sieve_(&sieve) {
  cumulative_.reserve(sieve.pi(sieve.limit()));
  CompensatedSum sum;
  sieve.for_each_prime(2, sieve.limit(), [&](std::uint64_t p) {
    sum.add(std::log(static_cast<double>(p)));
    cumulative_.push_back(sum.value());
  });
}

ChebyshevValue ThetaTable::theta(double x) const {
  const std::uint64_t count = sieve_->pi(cutoff(x));
  if (count == 0) return {x, 0, 0, ChebyshevKind::theta};
  const double v = cumulative_[count - 1];
  return {x, v, positive_sum_error(v, count), ChebyshevKind::theta};
}

ChebyshevValue ThetaTable::psi(double x) const {
  const std::uint64_t hi = cutoff(x);
  CompensatedSum sum;
  double error = 0;
  for (unsigned m = 1;; ++m) {
    const std::uint64_t r = integer_root(hi, m);
    if (r < 2) break;
    const ChebyshevValue t = theta(static_cast<double>(r));
    sum.add(t.value);
    error += t.error_bound;
  }
  return {x, sum.value(), error + sum.error_bound(), ChebyshevKind::psi};
}

std::span<const AnalyticBound> analytic_bounds() { return kBounds; }

const AnalyticBound& analytic_bound(std::string_view id) {
  for (const auto& b : kBounds)
    if (b.id == id) return b;
  throw UnknownIdError("unknown analytic bound '" + std::string(id) + "'");
}

Margin check_bound(const Sieve& sieve, std::string_view bound_id, double x) {
  const AnalyticBound& b = analytic_bound(bound_id);
  return evaluate_bound(
      b, x, [&](double y) { return theta(sieve, y); }, [&](double y) { return psi(sieve, y); },
      [&](double y) { return sieve.pi(cutoff(y)); });
}

Margin check_bound(const ThetaTable& table, std::string_view bound_id, double x) {
  const AnalyticBound& b = analytic_bound(bound_id);
  return evaluate_bound(
      b, x, [&](double y) { return table.theta(y); }, [&](double y) { return table.psi(y); },
      [&](double y) { return table.sieve().pi(cutoff(y)); });
}

nlohmann::json analytic_registry_json() {
  nlohmann::json j;
  j["version"] = kAnalyticRegistryVersion;
  auto& list = j["bounds"] = nlohmann::json::array();
  for (const auto& b : kBounds)
    list.push_back({{"id", b.id},
                    {"form", std::string(form_name(b.form))},
                    {"constant", b.constant_text},
                    {"threshold", b.valid_from_text},
                    {"threshold_strict", b.strict_threshold},
                    {"statement", b.statement},
                    {"citation", b.source}});
  return j;
}

}  // namespace bertrand
