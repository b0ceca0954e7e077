#include <doctest.h>

#include <filesystem>
#include <random>

#include <mpfr.h>

#include "bertrand/errors.hpp"
#include "bertrand/primality.hpp"
#include "bertrand/verify.hpp"
#include "oracles.hpp"

using namespace bertrand;

namespace {
const Sieve& sieve() {
  static const Sieve s(20'000'000);
  return s;
}
const std::vector<char>& ref() {
  static const auto r = oracle::eratosthenes(3'000'000);
  return r;
}
// Failing n of "a prime x with n < x and den*x < num*n + add", per n.
std::vector<std::int64_t> naive_failures(std::int64_t num, std::int64_t add, std::int64_t den, std::int64_t lo,
                                         std::int64_t hi) {
  std::vector<std::int64_t> out;
  for (std::int64_t n = lo; n <= hi; ++n) {
    bool found = false;
    for (std::int64_t x = n + 1; den * x < num * n + add; ++x)
      if (ref()[static_cast<std::size_t>(x)]) {
        found = true;
        break;
      }
    if (!found) out.push_back(n);
  }
  return out;
}
std::uint64_t open_count(std::uint64_t a, std::uint64_t b) {
  std::uint64_t c = 0;
  for (std::uint64_t x = a + 1; x < b; ++x) c += ref()[x];
  return c;
}
}  // namespace

TEST_CASE("interval family examples") {
  const auto ok = verify_interval_family(sieve(), 4, 3, 6817);
  CHECK(ok.status == Status::verified);
  CHECK(ok.failures.empty());
  CHECK(ok.witnesses_complete);
  CHECK(ok.witnesses.size() == 6815);
  CHECK(ok.convention == "open");
  const auto two = verify_interval_family(sieve(), 4, 2, 2);
  CHECK(two.status == Status::failed);
  CHECK(two.failures == std::vector<std::int64_t>{2});
  const auto four = verify_interval_family(sieve(), 8, 4, 4);
  CHECK(four.failures == std::vector<std::int64_t>{4});
  CHECK_THROWS_AS(verify_interval_family(Sieve(100), 4, 1, 100), CoverageError);
}

TEST_CASE("interval witnesses are the least prime above kn") {
  for (std::int64_t k : {1, 4, 8, 519}) {
    const auto c = verify_interval_family(sieve(), k, 1, 2'000);
    std::vector<std::int64_t> want_fail;
    for (std::int64_t n = 1; n <= 2'000; ++n)
      if (open_count(k * n, (k + 1) * n) == 0) want_fail.push_back(n);
    CHECK(c.failures == want_fail);
    for (const auto& w : c.witnesses) {
      std::uint64_t q = static_cast<std::uint64_t>(k * w.n) + 1;
      while (!ref()[q]) ++q;
      REQUIRE(w.prime == q);
    }
  }
}

TEST_CASE("ratio family examples") {
  const auto big = verify_ratio_family(sieve(), 520, 519, 31409, 1'000'000);
  CHECK(big.status == Status::verified);
  CHECK(big.params.at("family") == "ratio");
  const auto one = verify_ratio_family(sieve(), 520, 519, 31408, 31408);
  CHECK(one.failures == std::vector<std::int64_t>{31408});
  CHECK(sieve().next_prime(31408) == 31469);
  CHECK(519 * 31469 > 520 * 31408);
  CHECK(verify_ratio_family(sieve(), 2, 1, 2, 1'000).status == Status::verified);
}

TEST_CASE("gap reduction equals the per-n check") {
  const auto c = verify_ratio_family(sieve(), 520, 519, 31409, 41409);
  CHECK(c.failures == naive_failures(520, 0, 519, 31409, 41409));
  CHECK(c.failures == affine_failures_naive(sieve(), 520, 0, 519, 31409, 41409));
  CHECK(c.failures.empty());
  const auto below = verify_ratio_family(sieve(), 520, 519, 20'000, 31409);
  CHECK(below.failures == naive_failures(520, 0, 519, 20'000, 31409));
  CHECK(below.failures.back() == 31408);

  std::mt19937_64 rng(9);
  for (int t = 0; t < 60; ++t) {
    const std::int64_t den = 1 + static_cast<std::int64_t>(rng() % 40);
    const std::int64_t num = den + 1 + static_cast<std::int64_t>(rng() % 5);
    const std::int64_t add = static_cast<std::int64_t>(rng() % 80);
    const std::int64_t lo = 1 + static_cast<std::int64_t>(rng() % 3'000);
    const std::int64_t hi = lo + static_cast<std::int64_t>(rng() % 5'000);
    CAPTURE(num);
    CAPTURE(add);
    CAPTURE(den);
    const auto cert = verify_affine_family(sieve(), num, add, den, lo, hi);
    REQUIRE(cert.failures == naive_failures(num, add, den, lo, hi));
    for (const auto& w : cert.witnesses) {
      REQUIRE(static_cast<std::int64_t>(w.prime) > w.n);
      REQUIRE(den * static_cast<std::int64_t>(w.prime) < num * w.n + add);
    }
  }
}

TEST_CASE("count family examples and conventions") {
  const auto a = verify_count_family(sieve(), 5, 4, 3, 10'000);
  CHECK(a.status == Status::verified);
  REQUIRE(a.witnesses.front().n == 3);
  CHECK(a.witnesses.front().count == 4u);
  CHECK(a.witnesses.front().prime == 13);
  const auto b = verify_count_family(sieve(), 5, 7, 6, 10'000);
  CHECK(b.status == Status::verified);
  CHECK(b.witnesses.front().count == 7u);
  CHECK(b.witnesses.front().prime == 29);
  const auto open = verify_count_family(sieve(), 9, 8, 3, 1'000);
  CHECK(open.failures == std::vector<std::int64_t>{3});
  const auto closed = verify_count_family(sieve(), 9, 8, 3, 1'000, {}, CountConvention::left_closed);
  CHECK(closed.status == Status::verified);
  CHECK(closed.convention == "left-closed");
  CHECK(closed.witnesses.front().count == 8u);
  for (const auto& w : verify_count_family(sieve(), 7, 3, 1, 3'000).witnesses)
    REQUIRE(*w.count == open_count(static_cast<std::uint64_t>(w.n), static_cast<std::uint64_t>(7 * w.n)));
  CHECK(verify_count_family(sieve(), 520, 519, 8, 31'408).status == Status::verified);
}

TEST_CASE("legendre window top rounds down") {
  CHECK(legendre_window_top("1.0", 1) == 7);
  CHECK(legendre_window_top("1", 9) == 999);
  mpfr_t e, x, y;
  mpfr_inits2(600, e, x, y, static_cast<mpfr_ptr>(nullptr));
  for (const char* eps : {"0.00011516865557559264", "0.000001", "0.5"})
    for (std::uint64_t n : {1ull, 2ull, 14ull, 4407ull, 99'999ull, 26'014'595ull}) {
      mpfr_set_str(e, eps, 10, MPFR_RNDN);
      mpfr_add_ui(e, e, 2, MPFR_RNDN);
      mpfr_set_ui(x, n + 1, MPFR_RNDN);
      mpfr_pow(y, x, e, MPFR_RNDN);
      const std::uint64_t top = legendre_window_top(eps, n);
      // top < (n+1)^(2+eps) <= top + 1
      CHECK(mpfr_cmp_ui(y, top) > 0);
      CHECK(mpfr_cmp_ui(y, top + 1) <= 0);
    }
  mpfr_clears(e, x, y, static_cast<mpfr_ptr>(nullptr));
}

TEST_CASE("legendre windows") {
  const auto a = verify_legendre("0.00011516865557559264", 1, 4407);
  CHECK(a.status == Status::verified);
  for (const auto& w : a.witnesses) {
    const auto n = static_cast<std::uint64_t>(w.n);
    REQUIRE(w.prime > n * n);
    REQUIRE(w.prime <= legendre_window_top("0.00011516865557559264", n));
    for (std::uint64_t x = n * n + 1; x < w.prime; ++x) REQUIRE_FALSE(sieve().is_prime(x));
  }
  CHECK(verify_legendre("1.0", 1, 10).status == Status::verified);
  CHECK(verify_legendre("0.000001", 1, 20'000).status == Status::verified);
}

TEST_CASE("checkpointed legendre job resumes") {
  const auto path = std::filesystem::temp_directory_path() / "bertrand_test_checkpoint.json";
  std::filesystem::remove(path);
  CheckpointOptions opt;
  opt.path = path.string();
  opt.block = 3'000;
  int blocks = 0;
  opt.progress = [&](const Certificate&) { return ++blocks < 2; };
  const auto first = verify_legendre_checkpointed("0.000001", 1, 20'000, opt);
  CHECK(first.status == Status::partial);
  REQUIRE(first.cursor);
  CHECK(*first.cursor == 6'000);
  CHECK(std::filesystem::exists(path));
  opt.progress = nullptr;
  const auto done = verify_legendre_checkpointed("0.000001", 1, 20'000, opt);
  CHECK(done.status == Status::verified);
  CHECK(done.lo == 1);
  CHECK(done.hi == 20'000);
  const auto direct = verify_legendre("0.000001", 1, 20'000);
  CHECK(done.failures == direct.failures);
  CHECK(done.details.at("tightest") == direct.details.at("tightest"));
  std::filesystem::remove(path);
}

TEST_CASE("power intervals") {
  const auto a = verify_power_interval(sieve(), 8, 1);
  CHECK(a.status == Status::verified);
  CHECK(a.witnesses.front().count == 14u);
  const auto b = verify_power_interval(sieve(), 8, 2);
  CHECK(b.witnesses.front().count == 79u);
  CHECK(b.details.at("required").get<double>() == doctest::Approx(std::pow(8.0, 2 - std::log(2.0) / 2)));
  const auto c = verify_power_interval(sieve(), 10, 2);
  CHECK(c.witnesses.front().count == 143u);
  CHECK(c.status == Status::verified);
}

TEST_CASE("affine iteration") {
  const AffineMap five{mpq_class(5, 4), mpq_class(15, 4)};
  CHECK(iterate_f(five, 1, 1) == 5);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 100; ++t) {
    const AffineMap f{mpq_class(static_cast<long>(rng() % 50 + 1), static_cast<long>(rng() % 40 + 1)),
                      mpq_class(static_cast<long>(rng() % 90), static_cast<long>(rng() % 9 + 1))};
    const std::int64_t m = static_cast<std::int64_t>(rng() % 30 + 1);
    const mpq_class n(static_cast<long>(rng() % 1000 + 1));
    mpq_class want = n;
    mpq_class a = f.a, b = f.b;
    a.canonicalize();
    b.canonicalize();
    for (std::int64_t i = 0; i < m; ++i) want = a * want + b;
    REQUIRE(iterate_f(f, m, n) == want);
    REQUIRE(iterate_f_closed(f, m, n) == want);
  }
  const auto t5 = iterate_threshold(five, 7, 5);
  REQUIRE(t5);
  CHECK(*t5 <= 245);
  CHECK(*t5 > 244);
  CHECK(iterate_f_checked(five, 7, 245) <= 5 * 245);
  CHECK(iterate_f_checked(five, 7, 244) > 5 * 244);
  CHECK_FALSE(iterate_threshold(five, 8, 5));
  const AffineMap nine{mpq_class(9, 8), mpq_class(63, 8)};
  const auto t9 = iterate_threshold(nine, 18, 9);
  REQUIRE(t9);
  CHECK(*t9 <= 692);
  CHECK(*t9 > 691);
  CHECK(iterate_f_checked(nine, 18, 692) <= 9 * 692);
  const AffineMap ratio{mpq_class(520, 519), 0};
  CHECK(iterate_f_checked(ratio, 3248, 1) < mpq_class(51914, 100));
  CHECK(iterate_f_checked(ratio, 3248, 1) > 519);
}

TEST_CASE("division-algorithm containment") {
  const auto a = check_shift_containment(5, 4, 15, 3, 1, 20'000);
  CHECK(a.ok());
  CHECK(a.pairs > 0);
  const auto b = check_shift_containment(9, 8, 63, 5, 1, 20'000);
  CHECK(b.ok());
  for (std::int64_t c : {5, 6, 7}) {
    // the reduction needs n past the directly verified base range
    const auto small = check_corollary_containment(c, 1, 64);
    CHECK_FALSE(small.ok());
    for (const auto& v : small.violations) CHECK(v.first <= 55);
    const auto r = check_corollary_containment(c, 56, 20'000);
    CHECK(r.ok());
    CHECK(r.inapplicable.empty());
  }
  CHECK(to_json(a).contains("pairs"));
}

TEST_CASE("certificates are deterministic and independent of the worker count") {
  const VerifyOptions one{1}, four{4};
  CHECK(canonical_dump(verify_interval_family(sieve(), 8, 1, 200'000, one)) ==
        canonical_dump(verify_interval_family(sieve(), 8, 1, 200'000, four)));
  CHECK(canonical_dump(verify_ratio_family(sieve(), 520, 519, 1, 2'000'000, one)) ==
        canonical_dump(verify_ratio_family(sieve(), 520, 519, 1, 2'000'000, four)));
  CHECK(canonical_dump(verify_count_family(sieve(), 9, 18, 9, 150'000, one)) ==
        canonical_dump(verify_count_family(sieve(), 9, 18, 9, 150'000, four)));
  CHECK(canonical_dump(verify_legendre("0.000001", 1, 30'000, one)) ==
        canonical_dump(verify_legendre("0.000001", 1, 30'000, four)));
  CHECK(canonical_dump(verify_interval_family(sieve(), 4, 3, 6817)) ==
        canonical_dump(verify_interval_family(sieve(), 4, 3, 6817)));
}

TEST_CASE("certificate json round trip") {
  auto c = verify_count_family(sieve(), 9, 8, 3, 500);
  c.parts.push_back(verify_interval_family(sieve(), 4, 1, 50));
  c.cursor = 17;
  const auto back = certificate_from_json(to_json(c));
  CHECK(canonical_dump(back) == canonical_dump(c));
  CHECK(back.witnesses == c.witnesses);
  CHECK_THROWS_AS(certificate_from_json(nlohmann::json{{"theorem_id", "x"}}), DomainError);
  CHECK_THROWS_AS(parse_status("done"), DomainError);
}

TEST_CASE("witnesses are prime and failures fail again") {
  const Certificate certs[] = {verify_interval_family(sieve(), 4, 1, 6817), verify_interval_family(sieve(), 519, 1, 5'000),
                               verify_ratio_family(sieve(), 520, 519, 1, 40'000),
                               verify_count_family(sieve(), 9, 8, 1, 3'000),
                               verify_legendre("0.000001", 1, 5'000)};
  for (const auto& c : certs) {
    for (const auto& w : c.witnesses) REQUIRE(is_prime_64(w.prime));
    const auto r = recheck(c, 1.0);
    CHECK(r.ok());
    CHECK(r.failures_checked == c.failures.size());
    CHECK(r.witnesses_checked == c.witnesses.size());
  }
}

TEST_CASE("recheck catches tampering") {
  auto c = verify_interval_family(sieve(), 4, 3, 100);
  c.witnesses[5].prime += 2;
  CHECK_FALSE(recheck(c, 1.0).ok());
  auto d = verify_interval_family(sieve(), 4, 3, 100);
  d.failures.push_back(50);
  CHECK_FALSE(recheck(d, 1.0).ok());
  auto e = verify_count_family(sieve(), 5, 4, 3, 100);
  *e.witnesses[0].count += 1;
  CHECK_FALSE(recheck(e, 1.0).ok());
  CHECK_THROWS_AS(recheck(c, 0.0), DomainError);
}

TEST_CASE("theorem drivers") {
  CHECK_THROWS_AS(theorem_driver("thm-9.9.9"), UnknownIdError);
  for (const auto& d : theorem_drivers()) {
    if (d.long_only) continue;
    CAPTURE(d.id);
    const auto c = run_theorem(d.id);
    CHECK(driver_outcome_ok(d, c));
    CHECK(c.theorem_id == d.id);
    CHECK(c.version == kToolkitVersion);
    CHECK(recheck(c).ok());
    if (!d.finding) CHECK(c.status == Status::verified);
  }
  const auto t = run_theorem("thm-2.3.3");
  const auto& floor_case = t.details.at("below_floor");
  CHECK(floor_case.at("n") == 14);
  CHECK(floor_case.at("primes_inside") == 0);
  CHECK(!first_prime_in_window(7267, 7279).witness);
  const auto cor = run_theorem("cor-2.3.5");
  CHECK(cor.status == Status::failed);
  for (const auto& p : cor.parts)
    for (const auto n : p.failures) CHECK(n < 31409);
  DriverOptions narrow;
  narrow.from = 31408;
  narrow.to = 31408;
  CHECK(run_theorem("thm-2.3.1", narrow).failures == std::vector<std::int64_t>{31408});
}
