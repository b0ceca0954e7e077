#include "bertrand/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include <boost/multiprecision/mpfr.hpp>

#include "bertrand/brace.hpp"
#include "bertrand/chebyshev.hpp"
#include "bertrand/errors.hpp"
#include "bertrand/parallel.hpp"
#include "bertrand/ratio.hpp"

namespace bertrand {
namespace {

namespace bmp = boost::multiprecision;
using Ext = bmp::number<bmp::mpfr_float_backend<50>, bmp::et_off>;

constexpr double kExtendedBand = 1e-40;

double to_double(double x) { return x; }
double to_double(const Ext& x) { return x.convert_to<double>(); }

template <class T>
T lit(const char* text) {
  if constexpr (std::is_same_v<T, double>)
    return std::strtod(text, nullptr);
  else
    return T(text);
}

template <class T>
T pi_v() {
  if constexpr (std::is_same_v<T, double>)
    return std::numbers::pi;
  else
    return boost::math::constants::pi<T>();
}

template <class T>
struct Builder {
  using value_type = T;
  Margin m;
  double band;

  Builder(const std::string& id, const Point& p, const char* precision, double relative_band)
      : band(relative_band) {
    m.bound_id = id;
    m.point = p;
    m.precision = precision;
  }

  T c(const char* text) const { return lit<T>(text); }

  void add(std::string name, const T& lhs, const T& rhs, double extra_error = 0) {
    const double l = to_double(lhs);
    const double r = to_double(rhs);
    double scale = 1.0;
    if (std::isfinite(l)) scale = std::max(scale, std::abs(l));
    if (std::isfinite(r)) scale = std::max(scale, std::abs(r));
    add_slack_component(m, std::move(name), l, r, to_double(T(lhs - rhs)), band * scale + extra_error);
  }

  void value(const T& v) { m.value = to_double(v); }

  Margin finish() {
    settle(m);
    return m;
  }
};

struct ExactBuilder {
  Margin m;

  ExactBuilder(const std::string& id, const Point& p) {
    m.bound_id = id;
    m.point = p;
    m.precision = "exact";
  }

  void add(std::string name, const mpq_class& lhs, const mpq_class& rhs) {
    const mpq_class s = lhs - rhs;
    add_slack_component(m, std::move(name), lhs.get_d(), rhs.get_d(), s.get_d(), 0.0);
    // Keep an exact zero distinguishable from a rounded tiny slack.
    if (sgn(s) != 0 && m.components.back().slack == 0)
      m.components.back().slack = sgn(s) > 0 ? std::numeric_limits<double>::denorm_min()
                                             : -std::numeric_limits<double>::denorm_min();
  }

  Margin finish() {
    settle(m);
    return m;
  }
};

mpq_class q(std::int64_t num, std::int64_t den = 1) {
  mpq_class out(mpz_class(std::to_string(num)), mpz_class(std::to_string(den)));
  out.canonicalize();
  return out;
}

mpq_class qz(const mpz_class& num, const mpz_class& den) {
  mpq_class out(num, den);
  out.canonicalize();
  return out;
}

std::string rational_text(const mpq_class& v) { return v.get_str(); }

std::int64_t get(const Point& p, const char* name) {
  auto it = p.find(name);
  if (it == p.end()) throw DomainError(std::string("missing parameter '") + name + "'");
  return it->second;
}

// log {s brace r} with integer lgamma arguments.
template <class T>
T brace_log(const Ratio& s, const Ratio& r) {
  using std::lgamma;
  const T fs(s.floor());
  const T fd((s - r).floor());
  const T fr(r.floor());
  return lgamma(T(fs + 1)) - lgamma(T(fd + 1)) - lgamma(T(fr + 1));
}

template <class T>
T log_binom(std::int64_t top, std::int64_t bottom) {
  using std::lgamma;
  return lgamma(T(top + 1)) - lgamma(T(bottom + 1)) - lgamma(T(top - bottom + 1));
}

const std::vector<std::uint64_t>& primes_509() {
  static const std::vector<std::uint64_t> primes = primes_up_to(509);
  return primes;
}

std::uint64_t pi_open(const Sieve& s, std::uint64_t lo, std::uint64_t hi) {
  // primes p with lo < p < hi
  if (hi <= lo + 1) return 0;
  return s.pi(hi - 1) - s.pi(lo);
}

// ---------------------------------------------------------------------------
// Evaluator bodies. Each is a generic lambda over a Builder<double> or
// Builder<Ext>; `sieve` is non-null whenever the BoundSpec declares coverage.

#define BERTRAND_MATH     \
  using std::log;         \
  using std::sqrt;        \
  using std::exp;         \
  using std::pow;         \
  using std::lgamma;      \
  using T = typename std::decay_t<decltype(b)>::value_type

auto eval_l211a = [](auto& b, const Point& p, const Sieve*) {
  BERTRAND_MATH;
  const T n(get(p, "n"));
  const T w = (252 * n + 5) / (2880 * n * n + 48 * n);
  b.add("(252n+5)/(2880n^2+48n) <= -log 0.999986", T(-log(b.c("0.999986"))), w);
  const auto ni = get(p, "n");
  b.m.witness = rational_text(q(252 * ni + 5, 2880 * ni * ni + 48 * ni));
};

mpq_class l211_exponent(std::int64_t a, std::int64_t b1, std::int64_t c1, std::int64_t n) {
  // 1/(a n) - 1/(b1 n + 1) - 1/(c1 n + 1)
  return q(1, a * n) - q(1, b1 * n + 1) - q(1, c1 * n + 1);
}

auto eval_l211b = [](auto& b, const Point& p, const Sieve*) {
  BERTRAND_MATH;
  const T n(get(p, "n"));
  b.add("1/(24n+1) + 1/(6n+1) >= 1/(30n)", T(1 / (24 * n + 1) + 1 / (6 * n + 1)), T(1 / (30 * n)));
  b.m.witness = rational_text(l211_exponent(30, 24, 6, get(p, "n")));
};

auto eval_l211c = [](auto& b, const Point& p, const Sieve*) {
  BERTRAND_MATH;
  const T n(get(p, "n"));
  b.add("1/(16n+1) + 1/(4n+1) >= 1/(20n)", T(1 / (16 * n + 1) + 1 / (4 * n + 1)), T(1 / (20 * n)));
  b.m.witness = rational_text(l211_exponent(20, 16, 4, get(p, "n")));
};

auto eval_l211d = [](auto& b, const Point& p, const Sieve*) {
  BERTRAND_MATH;
  const T n(get(p, "n"));
  b.add("4.002202 > (4n+3)/(n-3)", b.c("4.002202"), T((4 * n + 3) / (n - 3)));
  const auto ni = get(p, "n");
  b.m.witness = rational_text(q(4 * ni + 3, ni - 3));
};

template <class T>
T l212_lhs(const T& n) {
  using std::log;
  return log(lit<T>("0.054886")) - n / 2 * log(T(2)) - T(3) / 2 * log(n) + n / 6 * log(T(3125) / 256);
}

template <class T>
T l212_rhs(const T& n) {
  using std::sqrt;
  return lit<T>("2.51012") * sqrt(5 * n);
}

auto eval_l212 = [](auto& b, const Point& p, const Sieve*) {
  BERTRAND_MATH;
  const T n(get(p, "n"));
  b.add("log[0.054886 (3125/256)^(n/6) / (2^(n/2) n^(3/2))] > 2.51012 sqrt(5n)", l212_lhs(n), l212_rhs(n));
};

auto eval_t213chain = [](auto& b, const Point& p, const Sieve*) {
  BERTRAND_MATH;
  const T n(get(p, "n"));
  const T pi = pi_v<T>();
  const T e1 = 1 / (60 * n + 1) - 1 / (48 * n) - 1 / (12 * n);
  const T e2 = 1 / (30 * n) - 1 / (24 * n + 1) - 1 / (6 * n + 1);
  const T e3 = 1 / (20 * n) - 1 / (16 * n + 1) - 1 / (4 * n + 1);
  const auto ni = get(p, "n");
  b.add("log C(5n,4n) > log[0.446024 n^(-1/2) (3125/256)^n]", log_binom<T>(5 * ni, 4 * ni),
        T(log(b.c("0.446024")) - log(n) / 2 + n * log(T(3125) / 256)));
  b.add("sqrt(5/(8 pi)) e^(1/(60n+1)-1/(48n)-1/(12n)) > 0.446024", T(log(sqrt(5 / (8 * pi))) + e1),
        T(log(b.c("0.446024"))));
  b.add("1.576958 > (5/4) sqrt(5/pi) e^(1/(30n)-1/(24n+1)-1/(6n+1))", T(log(b.c("1.576958"))),
        T(log(T(5) / 4 * sqrt(5 / pi)) + e2));
  b.add("5.153158 > sqrt(125/(24 pi)) (4n+3)/(n-3) e^(1/(20n)-1/(16n+1)-1/(4n+1))",
        T(log(b.c("5.153158"))), T(log(sqrt(125 / (24 * pi)) * (4 * n + 3) / (n - 3)) + e3));
  b.add("0.446024 / (1.576958 * 5.153158) > 0.054886",
        T(log(b.c("0.446024")) - log(b.c("1.576958")) - log(b.c("5.153158"))), T(log(b.c("0.054886"))));
  // A and B themselves against their stated upper bounds.
  b.add("log A < log[1.576958 n^(1/2) (3125/256)^(n/2)]",
        T(log(b.c("1.576958")) + log(n) / 2 + n / 2 * log(T(3125) / 256)),
        brace_log<T>(Ratio(5 * ni, 2), Ratio(2 * ni)));
  b.add("log B < log[5.153158 n^(1/2) (3125/256)^(n/3)]",
        T(log(b.c("5.153158")) + log(n) / 2 + n / 3 * log(T(3125) / 256)),
        brace_log<T>(Ratio(5 * ni, 3), Ratio(4 * ni, 3)));
  b.add("final T3 lower bound > 1", l212_lhs(n), l212_rhs(n));
};

template <class T>
T e_exponent(const T& k, const T& n, const T& m) {
  return (2 * k * k + 5 * k + 2) * m / (12 * k * (k + 1) * n) - m / (12 * k * n + m) - m / (12 * n + m) -
         m / (6 * (k + 1) * n + m);
}

template <class T>
T f_exponent(const T& k, const T& n, const T& m) {
  return m / (12 * (k + 1) * n + m) + m / (6 * k * n + m) + m / (6 * n + m) -
         (k * k + 4 * k + 1) * m / (12 * k * (k + 1) * n);
}

auto eval_l222e = [](auto& b, const Point& p, const Sieve*) {
  BERTRAND_MATH;
  const T k(get(p, "k")), n(get(p, "n")), m(get(p, "m"));
  const T e = e_exponent(k, n, m);
  b.value(e);
  b.add("E <= 12029/111150", T(T(12029) / 111150), e);
  if (get(p, "n") == get(p, "m")) b.add("E >= 7/78 at n = m", e, T(T(7) / 78));
};

auto eval_l223f = [](auto& b, const Point& p, const Sieve*) {
  BERTRAND_MATH;
  const T k(get(p, "k")), n(get(p, "n")), m(get(p, "m"));
  const T f = f_exponent(k, n, m);
  b.value(f);
  b.add("F <= 16061/242424", T(T(16061) / 242424), f);
  if (get(p, "n") == get(p, "m")) b.add("F >= 5/84 at n = m", f, T(T(5) / 84));
};

Margin exact_l222e(const Point& p) {
  ExactBuilder b("L2.2.2E", p);
  const EFExponents ef = e_f_exponents(get(p, "k"), get(p, "n"), get(p, "m"));
  b.m.value = ef.e;
  b.m.witness = rational_text(ef.e_exact);
  b.add("E <= 12029/111150", q(12029, 111150), ef.e_exact);
  if (get(p, "n") == get(p, "m")) b.add("E >= 7/78 at n = m", ef.e_exact, q(7, 78));
  return b.finish();
}

Margin exact_l223f(const Point& p) {
  ExactBuilder b("L2.2.3F", p);
  const EFExponents ef = e_f_exponents(get(p, "k"), get(p, "n"), get(p, "m"));
  b.m.value = ef.f;
  b.m.witness = rational_text(ef.f_exact);
  b.add("F <= 16061/242424", q(16061, 242424), ef.f_exact);
  if (get(p, "n") == get(p, "m")) b.add("F >= 5/84 at n = m", ef.f_exact, q(5, 84));
  return b.finish();
}

auto eval_l224 = [](auto& b, const Point& p, const Sieve* sieve) {
  BERTRAND_MATH;
  const auto n = get(p, "n");
  const auto m = get(p, "m");
  // floor(8n/m) and floor(9n/m) computed exactly.
  const ChebyshevValue t = theta_between(*sieve, static_cast<double>((8 * n) / m), static_cast<double>((9 * n) / m));
  const T bound = b.c("1.129918") * T(n) / T(m);
  b.value(T(t.value));
  b.add("1.129918 n/m > log prod_{8n/m < p <= 9n/m} p", bound, T(t.value), t.error_bound);
};

template <class T>
T l225_reduced_rhs(const T& n, const T& m) {
  using std::log;
  return log(T(2)) / 2 + 3 * log(T(3)) + log(n) + log(9 * n + m) + log(n + m) + log(4 * n + m);
}

template <class T>
T log_9_8() {
  using std::log;
  return 9 * log(T(9)) - 8 * log(T(8));
}

template <class T>
T l225_lower_log(const T& n, const T& m) {
  using std::log;
  using std::sqrt;
  return log(m * m * m * (n - 2 * m) / (9 * sqrt(T(2)) * n * (9 * n + m) * (n + m) * (4 * n + m))) +
         n / (2 * m) * log_9_8<T>();
}

auto eval_l225chain = [](auto& b, const Point& p, const Sieve*) {
  BERTRAND_MATH;
  const auto ni = get(p, "n");
  const auto mi = get(p, "m");
  const T n(ni), m(mi);
  const T target = b.c("1.129918") * n / m;
  b.add("(n/m)(log(9^9/8^8)/2 - 1.129918) > reduced right-hand side", T(n / m * (log_9_8<T>() / 2 - b.c("1.129918"))),
        l225_reduced_rhs(n, m));
  b.add("lower envelope of B_8(n,m) with e^(5/84) > e^(1.129918 n/m)", T(l225_lower_log(n, m) + T(5) / 84), target);
  b.add("lower envelope of B_8(n,m) with e^F > e^(1.129918 n/m)",
        T(l225_lower_log(n, m) + f_exponent(T(8), n, m)), target);
  const T bk = brace_log<T>(Ratio(9 * ni, mi), Ratio(8 * ni, mi)) - brace_log<T>(Ratio(9 * ni, 2 * mi), Ratio(8 * ni, 2 * mi));
  b.value(bk);
  b.add("log B_8(n,m) > 1.129918 n/m", bk, target);
};

auto eval_l226 = [](auto& b, const Point& p, const Sieve*) {
  BERTRAND_MATH;
  const auto ni = get(p, "n");
  const T n(ni);
  const T pi = pi_v<T>();
  b.add("log sqrt(9/(16 pi)) + 1/(108n+1) - 3/(32n) > log 0.4231409",
        T(log(sqrt(9 / (16 * pi))) + 1 / (108 * n + 1) - 3 / (32 * n)), T(log(b.c("0.4231409"))));
  b.add("log C(9n,8n) > log[0.4231409 n^(-1/2) (9^9/8^8)^n]", log_binom<T>(9 * ni, 8 * ni),
        T(log(b.c("0.4231409")) - log(n) / 2 + n * log_9_8<T>()));
};

mpq_class l227_lhs(std::int64_t n, std::int64_t m) {
  return q(72, n) + q(169 * m, n * n) + q(52 * m * m, n * n * n) + qz(mpz_class(4 * m * m * m), mpz_class(n) * n * n * n) +
         q(m, n);
}

const char* l227_constant(std::int64_t m) {
  switch (m) {
    case 3:
      return "0.065661";
    case 5:
      return "0.014183";
    case 7:
      return "0.005169";
  }
  throw DomainError("L2.2.7 is stated for m in {3, 5, 7}");
}

template <class B>
void l227_constant_component(B& b, std::int64_t mi) {
  BERTRAND_MATH;
  const T m(mi);
  b.add("c > 9 e^(12029/111150) / (4 sqrt(2) m^3)", T(log(b.c(l227_constant(mi)))),
        T(log(T(9) / (4 * sqrt(T(2)) * m * m * m)) + T(12029) / 111150));
}

auto eval_l227 = [](auto& b, const Point& p, const Sieve*) {
  BERTRAND_MATH;
  const auto ni = get(p, "n");
  const auto mi = get(p, "m");
  const T n(ni), m(mi);
  const T lhs = 72 / n + 169 * m / (n * n) + 52 * m * m / (n * n * n) + 4 * m * m * m / (n * n * n * n) + m / n;
  b.add("72/n + 169m/n^2 + 52m^2/n^3 + 4m^3/n^4 + m/n < 1", T(0), T(log(lhs)));
  l227_constant_component(b, mi);
  b.m.witness = rational_text(l227_lhs(ni, mi));
};

Margin exact_l227(const std::string& id, const Point& p) {
  ExactBuilder eb(id, p);
  const auto ni = get(p, "n");
  const auto mi = get(p, "m");
  const mpq_class lhs = l227_lhs(ni, mi);
  eb.m.witness = rational_text(lhs);
  eb.add("72/n + 169m/n^2 + 52m^2/n^3 + 4m^3/n^4 + m/n < 1", q(1), lhs);
  Builder<Ext> b(id, p, "extended", kExtendedBand);
  l227_constant_component(b, mi);
  for (auto& c : b.m.components) eb.m.components.push_back(c);
  return eb.finish();
}

auto eval_l228 = [](auto& b, const Point& p, const Sieve*) {
  BERTRAND_MATH;
  const auto ni = get(p, "n");
  const T n(ni);
  const T pi = pi_v<T>();
  b.add("2.692861 > (9/2) sqrt(9/(8 pi))", T(log(b.c("2.692861"))), T(log(T(9) / 2 * sqrt(9 / (8 * pi)))));
  b.add("1/(6n+1) + 1/(48n+1) >= 1/(54n)", T(1 / (6 * n + 1) + 1 / (48 * n + 1)), T(1 / (54 * n)));
  b.add("log {9n/2 brace 4n} < log[2.692861 sqrt(n) (9^9/8^8)^(n/2)]",
        T(log(b.c("2.692861")) + log(n) / 2 + n / 2 * log_9_8<T>()), brace_log<T>(Ratio(9 * ni, 2), Ratio(4 * ni)));
};

auto eval_l229 = [](auto& b, const Point& p, const Sieve*) {
  BERTRAND_MATH;
  const T n(get(p, "n"));
  b.add("(17n/105) log(9^9/8^8) - 1.001102 (9n/19) > 13 log n + 7.53036 sqrt(n)",
        T(17 * n / 105 * log_9_8<T>() - b.c("1.001102") * 9 * n / 19), T(13 * log(n) + b.c("7.53036") * sqrt(n)));
};

auto eval_t231 = [](auto& b, const Point& p, const Sieve*) {
  BERTRAND_MATH;
  const T n(get(p, "n"));
  const T x = 520 * n / 519;
  T sum503 = 0;
  T sum509 = 0;
  for (std::uint64_t prime : primes_509()) {
    const T inv = T(1) / T(prime);
    sum509 += pow(x, inv);
    if (prime <= 503) sum503 += pow(n, inv);
  }
  const T lhs = b.c("0.99903839") * (x + sum503);
  const T rhs = b.c("1.00096161") * (n + sum509);
  b.value(T(lhs - rhs));
  b.add("0.99903839 (520n/519 + sum_{p<=503} n^(1/p)) > 1.00096161 (n + sum_{p<=509} (520n/519)^(1/p))", lhs,
        rhs);
};

template <class B>
void legendre_components(B& b, const Point& p, const char* eps_text, const char* c1, const char* c2) {
  BERTRAND_MATH;
  const T n(get(p, "n"));
  const T eps = b.c(eps_text);
  const T ratio2 = (n / (n + 1)) * (n / (n + 1));
  const T shrink = exp(-eps * log(n + 1));
  const T l1 = log(n + 1);
  const T l0 = log(n);
  const T rhs = ratio2 * shrink + b.c(c1) / ((2 + eps) * (2 + eps) * l1 * l1) + ratio2 * b.c(c2) * shrink / (l0 * l0);
  b.value(T(1 - rhs));
  b.add("1 > (n/(n+1))^2 (n+1)^-eps + c1/((2+eps)^2 log^2(n+1)) + (n/(n+1))^2 c2 (n+1)^-eps / log^2 n", T(1),
        rhs);
}

constexpr const char* kEps241 = "0.00011516865557559264";
constexpr const char* kEps242 = "0.000001";

auto eval_t241 = [](auto& b, const Point& p, const Sieve*) { legendre_components(b, p, kEps241, "0.2", "0.05"); };
auto eval_t242 = [](auto& b, const Point& p, const Sieve*) { legendre_components(b, p, kEps242, "0.01", "0.0025"); };

auto eval_t341 = [](auto& b, const Point& p, const Sieve*) {
  BERTRAND_MATH;
  const T k(get(p, "k")), n(get(p, "n"));
  const T lkn = log(k * n);
  const T ln = log(n);
  const T c = b.c("3.965");
  b.add("k-1 > (k-1) log(kn)/n + 3.965k/log^2(kn) + 3.965/log^2 n", T(k - 1),
        T((k - 1) * lkn / n + c * k / (lkn * lkn) + c / (ln * ln)));
};

template <class T>
T c342_bound(const T& k, const T& n) {
  using std::log;
  const T lkn = log(k * n);
  const T ln = log(n);
  return n * (k - 1 - lit<T>("3.965") * (k / (lkn * lkn) + 1 / (ln * ln)));
}

auto eval_c342 = [](auto& b, const Point& p, const Sieve* sieve) {
  BERTRAND_MATH;
  const auto ki = get(p, "k");
  const auto ni = get(p, "n");
  const T bound = c342_bound(T(ki), T(ni));
  const ChebyshevValue t = theta_between(*sieve, static_cast<double>(ni), static_cast<double>(ki * ni));
  b.value(bound);
  b.add("theta(kn) - theta(n) > n(k-1-3.965(k/log^2 kn + 1/log^2 n))", T(t.value), bound, t.error_bound);
  b.add("n(k-1-3.965(k/log^2 kn + 1/log^2 n)) > 0", bound, T(0));
};

auto eval_t351 = [](auto& b, const Point& p, const Sieve*) {
  BERTRAND_MATH;
  const T n(get(p, "n")), d(get(p, "d"));
  const T ln = log(n);
  const T ld1 = (d + 1) * ln;
  const T ld = d * ln;
  const T c = b.c("3.965");
  const T rhs = ld1 / pow(n, T(1 + log(d) / 2)) + 1 / n + c / (ld1 * ld1) + c / (n * ld * ld);
  b.add("1 > log n^(d+1)/n^(1+log(d)/2) + 1/n + 3.965/log^2 n^(d+1) + 3.965/(n log^2 n^d)", T(1), rhs);
};

template <class T>
T count_401(const T& n) {
  using std::log;
  return (l212_lhs(n) - l212_rhs(n)) / log(5 * n);
}

template <class T>
T count_403(const T& n) {
  using std::log;
  using std::sqrt;
  const T quotient = lit<T>("0.4231409") / lit<T>("0.000013");
  return (log(quotient) - lit<T>("1.001102") * 9 * n / 19 - 13 * log(n) + 17 * n / 105 * log_9_8<T>() -
          lit<T>("2.51012") * sqrt(9 * n)) /
         log(9 * n);
}

template <class T>
T count_406(const T& k, const T& n) {
  using std::log;
  return c342_bound(k, n) / log(k * n);
}

template <class T>
T weak_pnt_t(const T& k, const T& n) {
  using std::log;
  return (k + 1) * n / log((k + 1) * n) - k * n / log(k * n);
}

auto eval_t401 = [](auto& b, const Point& p, const Sieve* sieve) {
  BERTRAND_MATH;
  const auto ni = get(p, "n");
  const T v = count_401(T(ni));
  b.value(v);
  const auto actual = pi_open(*sieve, 4 * ni, 5 * ni);
  b.add("#primes in (4n,5n) >= bound", T(actual), v);
};

auto eval_t403 = [](auto& b, const Point& p, const Sieve* sieve) {
  BERTRAND_MATH;
  const auto ni = get(p, "n");
  const T v = count_403(T(ni));
  b.value(v);
  const auto actual = pi_open(*sieve, 8 * ni, 9 * ni);
  b.add("#primes in (8n,9n) >= bound", T(actual), v);
};

auto eval_t406 = [](auto& b, const Point& p, const Sieve* sieve) {
  BERTRAND_MATH;
  const auto ki = get(p, "k");
  const auto ni = get(p, "n");
  const T v = count_406(T(ki), T(ni));
  b.value(v);
  const auto actual = pi_open(*sieve, ni, ki * ni);
  b.add("#primes in (n,kn) >= bound", T(actual), v);
};

auto eval_weak = [](auto& b, const Point& p, const Sieve* sieve) {
  BERTRAND_MATH;
  const auto ki = get(p, "k");
  const auto ni = get(p, "n");
  const T v = weak_pnt_t(T(ki), T(ni));
  b.value(v);
  const auto actual = pi_open(*sieve, ki * ni, (ki + 1) * ni);
  // Heuristic only: recorded as the ratio actual / estimate, never as a claim.
  b.m.components.push_back({"actual / estimate", static_cast<double>(actual), to_double(v), 0, 0});
  b.m.verdict = Verdict::not_applicable;
};

template <int Base>
auto make_fpos() {
  return [](auto& b, const Point& p, const Sieve*) {
    BERTRAND_MATH;
    const T m(get(p, "m"));
    // Base*(Base-1)^m > Base^m, in logs.
    b.add("log(" + std::to_string(Base) + "*" + std::to_string(Base - 1) + "^m) > log(" + std::to_string(Base) + "^m)",
          T(log(T(Base)) + m * log(T(Base - 1))), T(m * log(T(Base))));
  };
}

template <int Base>
Margin exact_fpos(const std::string& id, const Point& p) {
  ExactBuilder b(id, p);
  const auto m = static_cast<unsigned long>(get(p, "m"));
  mpz_class lower, upper;
  mpz_ui_pow_ui(lower.get_mpz_t(), Base - 1, m);
  mpz_ui_pow_ui(upper.get_mpz_t(), Base, m);
  lower *= Base;
  const mpz_class diff = lower - upper;
  b.m.value = diff.get_d();
  b.m.witness = diff.get_str();
  b.add(std::to_string(Base) + "*" + std::to_string(Base - 1) + "^m > " + std::to_string(Base) + "^m",
        mpq_class(lower), mpq_class(upper));
  return b.finish();
}

Margin exact_l211a(const Point& p) {
  ExactBuilder b("L2.1.1a", p);
  const auto n = get(p, "n");
  const mpq_class w = q(252 * n + 5, 2880 * n * n + 48 * n);
  b.m.witness = rational_text(w);
  // 14/10^6 < -log(0.999986) < 14000099/10^12, from x < -log(1-x) < x + x^2.
  const mpq_class lower = q(14, 1'000'000);
  const mpq_class upper = q(14'000'099, 1'000'000'000'000);
  if (w <= lower)
    b.add("(252n+5)/(2880n^2+48n) <= 14/10^6 < -log 0.999986", lower, w);
  else if (w >= upper)
    b.add("(252n+5)/(2880n^2+48n) >= 14000099/10^12 > -log 0.999986", upper, w);
  else
    add_slack_component(b.m, "(252n+5)/(2880n^2+48n) inside the bracket of -log 0.999986", lower.get_d(), w.get_d(),
                        0.0, upper.get_d() - lower.get_d());
  return b.finish();
}

Margin exact_l211bc(const std::string& id, const Point& p, std::int64_t a, std::int64_t b1, std::int64_t c1) {
  ExactBuilder b(id, p);
  const auto n = get(p, "n");
  const mpq_class e = l211_exponent(a, b1, c1, n);
  b.m.witness = rational_text(e);
  b.add("exponent <= 0", q(0), e);
  return b.finish();
}

Margin exact_l211d(const Point& p) {
  ExactBuilder b("L2.1.1d", p);
  const auto n = get(p, "n");
  const mpq_class v = q(4 * n + 3, n - 3);
  b.m.witness = rational_text(v);
  b.add("4.002202 > (4n+3)/(n-3)", q(4'002'202, 1'000'000), v);
  return b.finish();
}

// ---------------------------------------------------------------------------

template <class F>
BoundSpec make_spec(std::string id, std::vector<std::string> params, Point defaults, std::string domain,
                    std::string claim, Point claim_from, std::string anchor,
                    std::function<bool(const Point&)> in_domain, F body, bool extended,
                    std::function<std::uint64_t(const Point&)> coverage = {}) {
  BoundSpec s;
  s.id = id;
  s.params = std::move(params);
  s.defaults = std::move(defaults);
  s.domain = std::move(domain);
  s.claim = std::move(claim);
  s.claim_from = std::move(claim_from);
  s.anchor = std::move(anchor);
  s.in_domain = std::move(in_domain);
  s.coverage = coverage ? std::move(coverage) : [](const Point&) { return std::uint64_t{0}; };
  s.eval_double = [id, body](const Point& p, const Sieve* sieve) {
    Builder<double> b(id, p, "double", kRelativeBand);
    body(b, p, sieve);
    return b.m.verdict == Verdict::not_applicable ? b.m : b.finish();
  };
  if (extended)
    s.eval_extended = [id, body](const Point& p, const Sieve* sieve) {
      Builder<Ext> b(id, p, "extended", kExtendedBand);
      body(b, p, sieve);
      return b.m.verdict == Verdict::not_applicable ? b.m : b.finish();
    };
  return s;
}

std::vector<BoundSpec> build_registry() {
  auto n_at_least = [](std::int64_t lo) { return [lo](const Point& p) { return get(p, "n") >= lo; }; };
  auto knm = [](std::int64_t kmin) {
    return [kmin](const Point& p) {
      return get(p, "k") >= kmin && get(p, "m") >= 2 && get(p, "n") >= get(p, "m");
    };
  };
  auto nm_ge = [](std::int64_t mlo, std::int64_t mhi) {
    return [mlo, mhi](const Point& p) {
      const auto m = get(p, "m");
      return m >= mlo && m <= mhi && get(p, "n") > 2 * m;
    };
  };
  auto n_ge_k = [](std::int64_t kmin) {
    return [kmin](const Point& p) { return get(p, "k") >= kmin && get(p, "n") >= get(p, "k"); };
  };

  std::vector<BoundSpec> r;
  BoundSpec s;

  s = make_spec("L2.1.1a", {"n"}, {}, "n >= 1", "n >= 6818", {{"n", 6818}},
                "e^{1/(60n+1)-1/48n-1/12n} >= 0.999986 via 1718141/133877484384 < 0.000013", n_at_least(1),
                eval_l211a, true);
  s.eval_exact = exact_l211a;
  r.push_back(s);

  s = make_spec("L2.1.1b", {"n"}, {}, "n >= 1", "n >= 1", {{"n", 1}}, "e^{1/30n-1/(24n+1)-1/(6n+1)} <= 1",
                n_at_least(1), eval_l211b, true);
  s.eval_exact = [](const Point& p) { return exact_l211bc("L2.1.1b", p, 30, 24, 6); };
  r.push_back(s);

  s = make_spec("L2.1.1c", {"n"}, {}, "n >= 1", "n >= 1", {{"n", 1}}, "e^{1/20n-1/(16n+1)-1/(4n+1)} <= 1",
                n_at_least(1), eval_l211c, true);
  s.eval_exact = [](const Point& p) { return exact_l211bc("L2.1.1c", p, 20, 16, 4); };
  r.push_back(s);

  s = make_spec("L2.1.1d", {"n"}, {}, "n >= 4", "n >= 6815", {{"n", 6815}}, "(4n+3)/(n-3) < 4.002202",
                n_at_least(4), eval_l211d, true);
  s.eval_exact = exact_l211d;
  r.push_back(s);

  r.push_back(make_spec("L2.1.2", {"n"}, {}, "n >= 1", "n >= 6818", {{"n", 6818}},
                        "0.054886 (3125/256)^{n/6} / (2^{n/2} n^{3/2}) > (5n)^{2.51012 sqrt(5n)/log(5n)}",
                        n_at_least(1), eval_l212, true));

  r.push_back(make_spec("T2.1.3chain", {"n"}, {}, "n >= 4", "n >= 6818", {{"n", 6818}},
                        "T3 > 0.054886 (3125/256)^{n/6} / (2^{n/2} n^{3/2} (5n)^{2.51012 sqrt(5n)/log 5n})",
                        n_at_least(4), eval_t213chain, true));

  s = make_spec("L2.2.2E", {"k", "n", "m"}, {}, "k >= 2, n >= m >= 2", "k >= 2, n >= m >= 2",
                {{"k", 2}, {"n", 2}, {"m", 2}}, "7/78 <= E <= 12029/111150", knm(2), eval_l222e, true);
  s.eval_exact = exact_l222e;
  r.push_back(s);

  s = make_spec("L2.2.3F", {"k", "n", "m"}, {}, "k >= 2, n >= m >= 2", "k >= 2, n >= m >= 2",
                {{"k", 2}, {"n", 2}, {"m", 2}}, "16061/242424 >= F >= 5/84", knm(2), eval_l223f, true);
  s.eval_exact = exact_l223f;
  r.push_back(s);

  r.push_back(make_spec(
      "L2.2.4", {"n", "m"}, {}, "1 <= m <= 7, n > 2m", "3 <= m <= 7, n >= 10437", {{"n", 10437}},
      "prod_{8n/m < p <= 9n/m} p < e^{1.129918 n/m}", nm_ge(1, 7), eval_l224, false,
      [](const Point& p) { return static_cast<std::uint64_t>((9 * get(p, "n")) / get(p, "m")); }));

  r.push_back(make_spec("L2.2.5chain", {"n", "m"}, {}, "1 <= m <= 7, n > 2m", "3 <= m <= 7, n >= 10437",
                        {{"n", 10437}}, "B_8(n,m) > prod_{8n/m < p <= 9n/m} p", nm_ge(1, 7), eval_l225chain, true));

  r.push_back(make_spec("L2.2.6", {"n"}, {}, "n >= 1", "n >= 28327", {{"n", 28327}},
                        "C(9n,8n) > 0.4231409 n^{-1/2} (9^9/8^8)^n", n_at_least(1), eval_l226, true));

  const std::pair<const char*, std::int64_t> l227[] = {{"L2.2.7a", 3}, {"L2.2.7b", 5}, {"L2.2.7c", 7}};
  for (const auto& [id, m] : l227) {
    const std::string sid = id;
    s = make_spec(sid, {"n"}, {{"m", m}}, "n > m", "n >= 93", {{"n", 93}},
                  std::string("B_8(n,") + std::to_string(m) + ") < " + l227_constant(m) + " n^4 (9^9/8^8)^{n/" +
                      std::to_string(2 * m) + "}",
                  [](const Point& p) { return get(p, "n") > get(p, "m"); }, eval_l227, true);
    s.eval_exact = [sid](const Point& p) { return exact_l227(sid, p); };
    r.push_back(s);
  }

  r.push_back(make_spec("L2.2.8", {"n"}, {}, "n >= 1", "n >= 1", {{"n", 1}},
                        "{9n/2 brace 4n} < 2.692861 sqrt(n) (9^9/8^8)^{n/2}", n_at_least(1), eval_l228, true));

  r.push_back(make_spec("L2.2.9", {"n"}, {}, "n >= 1", "n >= 56833", {{"n", 56833}},
                        "(9^9/8^8)^{17n/105} > e^{1.001102 (9n/19)} n^13 (9n)^{7.53036 sqrt(n)/log(9n)}",
                        n_at_least(1), eval_l229, true));

  r.push_back(make_spec("T2.3.1expr", {"n"}, {}, "n >= 1", "n >= e^19", {{"n", 178'482'301}},
                        "psi(x) - sum_{p<=503} psi(x^{1/p}) expression with Schoenfeld constants", n_at_least(1),
                        eval_t231, true));

  r.push_back(make_spec("T2.4.1ineq", {"n"}, {}, "n >= 2", "n >= 4408", {{"n", 4408}},
                        "reduced Legendre-window inequality, eps = 0.00011516865557559264", n_at_least(2), eval_t241,
                        true));

  r.push_back(make_spec("T2.4.2ineq", {"n"}, {}, "n >= 2", "n >= 26014596", {{"n", 26'014'596}},
                        "reduced Legendre-window inequality, eps = 0.000001, envelope 0.01", n_at_least(2), eval_t242,
                        true));

  r.push_back(make_spec("T3.4.1ineq", {"k", "n"}, {}, "n >= k >= 2", "n >= k >= 8", {{"k", 8}, {"n", 8}},
                        "at least k-1 primes in (n, kn)", n_ge_k(2), eval_t341, true));

  r.push_back(make_spec(
      "C3.4.2bound", {"k", "n"}, {}, "n >= k >= 2", "n >= k >= 8", {{"k", 8}, {"n", 8}},
      "theta(kn) - theta(n) > n(k-1-3.965(k/log^2 kn + 1/log^2 n))", n_ge_k(2), eval_c342, false,
      [](const Point& p) { return static_cast<std::uint64_t>(get(p, "k") * get(p, "n")); }));

  r.push_back(make_spec("T3.5.1ineq", {"n", "d"}, {}, "n >= 2, d >= 1", "n >= 8, d >= 1", {{"n", 8}, {"d", 1}},
                        "at least n^{d-(log d)/2} primes in (n^d, n^{d+1})",
                        [](const Point& p) { return get(p, "n") >= 2 && get(p, "d") >= 1; }, eval_t351, true));

  r.push_back(make_spec(
      "T4.0.1count", {"n"}, {}, "n >= 1", "n > 2", {{"n", 3}}, "#primes in (4n,5n) >= log_{5n}[T3 lower bound]",
      n_at_least(1), eval_t401, false, [](const Point& p) { return static_cast<std::uint64_t>(5 * get(p, "n")); }));

  r.push_back(make_spec(
      "T4.0.3count", {"n"}, {}, "n >= 1", "n > 4", {{"n", 5}},
      "#primes in (8n,9n) >= log_{9n}[(0.4231409/0.000013) e^{-1.001102 (9n/19)} ...]", n_at_least(1), eval_t403,
      false, [](const Point& p) { return static_cast<std::uint64_t>(9 * get(p, "n")); }));

  r.push_back(make_spec(
      "T4.0.6count", {"k", "n"}, {}, "n >= k >= 2", "n >= k >= 8", {{"k", 8}, {"n", 8}},
      "#primes in (n,kn) >= n/log(kn) (k-1-3.965(k/log^2 kn + 1/log^2 n))", n_ge_k(2), eval_t406, false,
      [](const Point& p) { return static_cast<std::uint64_t>(get(p, "k") * get(p, "n")); }));

  r.push_back(make_spec(
      "weakPNT", {"k", "n"}, {}, "k >= 1, n >= 2", "heuristic", {{"k", 1}, {"n", 2}},
      "(k+1)n/log((k+1)n) - kn/log(kn)", [](const Point& p) { return get(p, "k") >= 1 && get(p, "n") >= 2; },
      eval_weak, false,
      [](const Point& p) { return static_cast<std::uint64_t>((get(p, "k") + 1) * get(p, "n")); }));

  s = make_spec("fpos5", {"m"}, {}, "m >= 1", "m <= 7", {{"m", 1}}, "5*4^m - 5^m > 0",
                [](const Point& p) { return get(p, "m") >= 1; }, make_fpos<5>(), true);
  s.eval_exact = [](const Point& p) { return exact_fpos<5>("fpos5", p); };
  r.push_back(s);

  s = make_spec("fpos9", {"m"}, {}, "m >= 1", "m <= 18", {{"m", 1}}, "9*8^m - 9^m > 0",
                [](const Point& p) { return get(p, "m") >= 1; }, make_fpos<9>(), true);
  s.eval_exact = [](const Point& p) { return exact_fpos<9>("fpos9", p); };
  r.push_back(s);

  return r;
}

const std::vector<BoundSpec>& registry() {
  static const std::vector<BoundSpec> r = build_registry();
  return r;
}

// Evaluates at an already completed point with a sieve that covers it.
Margin evaluate_with(const BoundSpec& spec, const Point& p, const Sieve* sieve) {
  Margin m = spec.eval_double(p, sieve);
  if (m.verdict != Verdict::inconclusive) return m;
  if (spec.eval_exact) {
    Margin exact = spec.eval_exact(p);
    if (exact.verdict != Verdict::inconclusive || !spec.eval_extended) return exact;
  }
  if (spec.eval_extended) return spec.eval_extended(p, sieve);
  return m;
}

std::unique_ptr<Sieve> sieve_for(const BoundSpec& spec, const Point& p, const EvalContext& ctx) {
  const std::uint64_t need = spec.coverage(p);
  if (need == 0) return nullptr;
  if (ctx.sieve && ctx.sieve->limit() >= need) return nullptr;
  SieveOptions opt;
  opt.budget = ctx.sieve_budget;
  return std::make_unique<Sieve>(std::max<std::uint64_t>(need, 2), opt);
}

}  // namespace

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<char> composite(limit + 1, 0);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
  }
  return out;
}

std::span<const BoundSpec> bound_registry() { return registry(); }

const BoundSpec& bound_spec(std::string_view id) {
  for (const auto& s : registry())
    if (s.id == id) return s;
  throw UnknownIdError("unknown bound '" + std::string(id) + "'");
}

nlohmann::json bound_registry_json() {
  nlohmann::json j;
  j["version"] = kBoundRegistryVersion;
  auto& list = j["bounds"] = nlohmann::json::array();
  for (const auto& s : registry()) {
    nlohmann::json e{{"id", s.id},
                     {"params", s.params},
                     {"domain", s.domain},
                     {"claim", s.claim},
                     {"anchor", s.anchor},
                     {"needs_sieve", s.coverage(s.claim_from.empty() ? s.defaults : [&] {
                        Point p = s.defaults;
                        for (const auto& [k, v] : s.claim_from) p[k] = v;
                        for (const auto& name : s.params) p.emplace(name, 10);
                        return p;
                      }()) > 0},
                     {"exact_fallback", static_cast<bool>(s.eval_exact)},
                     {"extended_fallback", static_cast<bool>(s.eval_extended)}};
    if (!s.defaults.empty()) e["fixed"] = s.defaults;
    list.push_back(e);
  }
  return j;
}

Point complete_point(const BoundSpec& spec, const Point& point) {
  Point p = point;
  for (const auto& [k, v] : spec.defaults) {
    auto it = p.find(k);
    if (it != p.end() && it->second != v)
      throw DomainError(spec.id + " fixes " + k + "=" + std::to_string(v));
    p[k] = v;
  }
  for (const auto& name : spec.params)
    if (!p.count(name)) throw DomainError(spec.id + " needs parameter '" + name + "'");
  for (const auto& [k, v] : p) {
    (void)v;
    const bool known = std::find(spec.params.begin(), spec.params.end(), k) != spec.params.end() || spec.defaults.count(k);
    if (!known) throw DomainError(spec.id + " has no parameter '" + k + "'");
  }
  if (!spec.in_domain(p)) throw DomainError(format_point(p) + " is outside the domain of " + spec.id + " (" + spec.domain + ")");
  return p;
}

Margin evaluate(std::string_view id, const Point& point, const EvalContext& ctx) {
  const BoundSpec& spec = bound_spec(id);
  const Point p = complete_point(spec, point);
  auto own = sieve_for(spec, p, ctx);
  return evaluate_with(spec, p, own ? own.get() : ctx.sieve);
}

std::vector<std::int64_t> scan_points(std::int64_t lo, std::int64_t hi, std::int64_t step) {
  if (hi < lo) throw DomainError("empty scan range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  if (step < 1) throw DomainError("scan step must be positive");
  std::vector<std::int64_t> out;
  std::int64_t x = lo;
  for (; x <= hi && out.size() < kExhaustivePoints; x += step) out.push_back(x);
  if (x <= hi) {
    const double ratio = std::pow(10.0, 1.0 / kSamplesPerDecade);
    double y = static_cast<double>(out.back());
    while (true) {
      y *= ratio;
      const auto next = static_cast<std::int64_t>(std::ceil(y));
      if (next >= hi) break;
      if (next > out.back()) out.push_back(next);
    }
    if (out.back() != hi) out.push_back(hi);
  }
  return out;
}

ScanResult scan(std::string_view id, std::string_view param, std::int64_t lo, std::int64_t hi, const Point& fixed,
                const ScanOptions& options, const EvalContext& ctx) {
  const BoundSpec& spec = bound_spec(id);
  const std::string name(param);
  if (std::find(spec.params.begin(), spec.params.end(), name) == spec.params.end())
    throw DomainError(spec.id + " has no scannable parameter '" + name + "'");
  const std::vector<std::int64_t> xs = scan_points(lo, hi, options.step);

  auto at = [&](std::int64_t x) {
    Point p = fixed;
    p[name] = x;
    return complete_point(spec, p);
  };
  // One sieve covering the largest point; coverage grows with every parameter.
  const Point first = at(xs.front());
  const Point last = at(xs.back());
  auto own = sieve_for(spec, last, ctx);
  const Sieve* sieve = own ? own.get() : ctx.sieve;
  (void)first;

  struct Partial {
    ScanResult r;
    bool have = false;
  };
  auto work = [&](Chunk chunk) {
    Partial part;
    for (std::uint64_t i = chunk.lo; i <= chunk.hi; ++i) {
      const std::int64_t x = xs[i];
      Margin m = evaluate_with(spec, at(x), sieve);
      ++part.r.points;
      switch (m.verdict) {
        case Verdict::satisfied:
          ++part.r.satisfied;
          break;
        case Verdict::violated:
          ++part.r.violated;
          break;
        case Verdict::inconclusive:
          ++part.r.inconclusive;
          break;
        case Verdict::not_applicable:
          ++part.r.not_applicable;
          break;
      }
      if (options.keep_trace) part.r.trace.emplace_back(x, m.slack);
      if (!part.have || m.slack < part.r.minimum.slack) {
        part.r.minimum = std::move(m);
        part.r.argmin = x;
        part.have = true;
      }
    }
    return part;
  };
  const auto parts = map_chunks(0, xs.size() - 1, options.jobs, work);

  ScanResult out;
  out.bound_id = spec.id;
  out.param = name;
  out.lo = lo;
  out.hi = hi;
  out.step = options.step;
  bool have = false;
  for (const auto& part : parts) {
    out.points += part.r.points;
    out.satisfied += part.r.satisfied;
    out.violated += part.r.violated;
    out.inconclusive += part.r.inconclusive;
    out.not_applicable += part.r.not_applicable;
    out.trace.insert(out.trace.end(), part.r.trace.begin(), part.r.trace.end());
    if (part.have && (!have || part.r.minimum.slack < out.minimum.slack)) {
      out.minimum = part.r.minimum;
      out.argmin = part.r.argmin;
      have = true;
    }
  }
  return out;
}

std::string scan_trace_csv(const ScanResult& result) {
  std::ostringstream os;
  os.precision(17);
  os << result.param << ",slack\n";
  for (const auto& [x, s] : result.trace) os << x << ',' << s << '\n';
  return os.str();
}

nlohmann::json to_json(const ScanResult& r) {
  return {{"bound_id", r.bound_id}, {"param", r.param},         {"range", {r.lo, r.hi}},
          {"step", r.step},         {"points", r.points},       {"satisfied", r.satisfied},
          {"violated", r.violated}, {"inconclusive", r.inconclusive}, {"not_applicable", r.not_applicable},
          {"argmin", r.argmin},     {"minimum", to_json(r.minimum)}};
}

ThresholdResult threshold(std::string_view id, std::string_view param, std::int64_t lo, std::int64_t hi,
                          const Point& fixed, const EvalContext& ctx) {
  const BoundSpec& spec = bound_spec(id);
  const std::string name(param);
  const std::vector<std::int64_t> xs = scan_points(lo, hi, 1);
  auto at = [&](std::int64_t x) {
    Point p = fixed;
    p[name] = x;
    return complete_point(spec, p);
  };
  auto own = sieve_for(spec, at(hi), ctx);
  const Sieve* sieve = own ? own.get() : ctx.sieve;
  std::map<std::int64_t, bool> cache;
  auto ok = [&](std::int64_t x) {
    auto it = cache.find(x);
    if (it != cache.end()) return it->second;
    const bool v = evaluate_with(spec, at(x), sieve).slack >= 0;
    cache.emplace(x, v);
    return v;
  };

  ThresholdResult out;
  out.bound_id = spec.id;
  out.param = name;
  out.lo = lo;
  out.hi = hi;
  out.samples = xs.size();
  out.sampling = xs.size() > kExhaustivePoints
                     ? "every integer for the first " + std::to_string(kExhaustivePoints) + " points, then " +
                           std::to_string(kSamplesPerDecade) + " geometric samples per decade"
                     : "every integer";
  std::vector<bool> sign(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) sign[i] = ok(xs[i]);
  for (std::size_t i = 1; i < sign.size(); ++i)
    if (sign[i] != sign[i - 1]) ++out.sign_changes;

  // Locates the exact crossing between a sample pair by bisection and then
  // confirms the neighbourhood exhaustively.
  constexpr std::int64_t kLocalWindow = 1000;
  auto refine = [&](std::int64_t bad, std::int64_t good, bool rising) {
    std::int64_t a = bad, b = good;  // ok(a) != ok(b)
    while ((rising ? b - a : a - b) > 1) {
      const std::int64_t mid = a + (b - a) / 2;
      if (ok(mid) == ok(good))
        b = mid;
      else
        a = mid;
    }
    const std::int64_t w_lo = std::max(std::min(bad, good), b - kLocalWindow);
    const std::int64_t w_hi = std::min(std::max(bad, good), b + kLocalWindow);
    if (rising) {
      std::int64_t first_good_after_last_bad = b;
      for (std::int64_t x = w_lo; x <= w_hi; ++x)
        if (!ok(x)) first_good_after_last_bad = x + 1;
      return first_good_after_last_bad;
    }
    std::int64_t last_good_before_first_bad = b;
    for (std::int64_t x = w_hi; x >= w_lo; --x)
      if (!ok(x)) last_good_before_first_bad = x - 1;
    return last_good_before_first_bad;
  };

  // Tail: from the last failing sample onwards everything sampled holds.
  std::optional<std::size_t> last_bad;
  for (std::size_t i = 0; i < sign.size(); ++i)
    if (!sign[i]) last_bad = i;
  if (!last_bad)
    out.tail_start = xs.front();
  else if (*last_bad + 1 < xs.size())
    out.tail_start = xs[*last_bad + 1] - xs[*last_bad] == 1 ? xs[*last_bad + 1]
                                                              : refine(xs[*last_bad], xs[*last_bad + 1], true);

  // Head: the run of holding samples starting at lo.
  std::optional<std::size_t> first_bad;
  for (std::size_t i = 0; i < sign.size(); ++i)
    if (!sign[i]) {
      first_bad = i;
      break;
    }
  if (!first_bad)
    out.head_end = xs.back();
  else if (*first_bad > 0)
    out.head_end = xs[*first_bad] - xs[*first_bad - 1] == 1 ? xs[*first_bad - 1]
                                                             : refine(xs[*first_bad], xs[*first_bad - 1], false);
  return out;
}

nlohmann::json to_json(const ThresholdResult& r) {
  nlohmann::json j{{"bound_id", r.bound_id},
                   {"param", r.param},
                   {"range", {r.lo, r.hi}},
                   {"samples", r.samples},
                   {"sign_changes", r.sign_changes},
                   {"sampling", r.sampling}};
  j["tail_start"] = r.tail_start ? nlohmann::json(*r.tail_start) : nlohmann::json(nullptr);
  j["head_end"] = r.head_end ? nlohmann::json(*r.head_end) : nlohmann::json(nullptr);
  return j;
}

EFExponents e_f_exponents(std::int64_t k, std::int64_t n, std::int64_t m) {
  if (k < 2 || m < 2 || n < m)
    throw DomainError("E and F need k >= 2 and n >= m >= 2, got k=" + std::to_string(k) + " n=" + std::to_string(n) +
                      " m=" + std::to_string(m));
  EFExponents out;
  out.e_exact = q((2 * k * k + 5 * k + 2) * m, 12 * k * (k + 1) * n) - q(m, 12 * k * n + m) - q(m, 12 * n + m) -
                q(m, 6 * (k + 1) * n + m);
  out.f_exact = q(m, 12 * (k + 1) * n + m) + q(m, 6 * k * n + m) + q(m, 6 * n + m) -
                q((k * k + 4 * k + 1) * m, 12 * k * (k + 1) * n);
  out.e = out.e_exact.get_d();
  out.f = out.f_exact.get_d();
  return out;
}

BkEnvelope bk_envelope(std::int64_t k, std::int64_t n, std::int64_t m) {
  const EFExponents ef = e_f_exponents(k, n, m);
  const double K = static_cast<double>(k), N = static_cast<double>(n), M = static_cast<double>(m);
  const double growth = N / (2 * M) * ((K + 1) * std::log(K + 1) - K * std::log(K));
  BkEnvelope out;
  out.log_upper = n > m ? std::log(N * (K + 1) * (K * N + M) * (K * N + N + 2 * M) * (N + 2 * M) /
                                   (4 * std::sqrt(2.0) * M * M * M * (N - M))) +
                              growth + ef.e
                        : std::numeric_limits<double>::infinity();
  out.log_lower = n > 2 * m ? std::log(std::sqrt(2.0) * M * M * M * (N - 2 * M) /
                                       (N * (K + 1) * (K * N + N + M) * (N + M) * (K * N + 2 * M))) +
                                  growth + ef.f
                            : -std::numeric_limits<double>::infinity();
  return out;
}

double theorem_401_count(double n) { return count_401(n); }
double theorem_403_count(double n) { return count_403(n); }
double theorem_406_count(double k, double n) { return count_406(k, n); }
double weak_pnt(double k, double n) { return weak_pnt_t(k, n); }

}  // namespace bertrand
