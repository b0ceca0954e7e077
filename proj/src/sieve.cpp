#include "bertrand/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "bertrand/errors.hpp"

namespace bertrand {
namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<std::uint32_t> small_primes(std::uint64_t limit) {
  std::vector<char> composite(limit + 1, 0);
  std::vector<std::uint32_t> primes;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
  }
  return primes;
}

// Clears composite bits in one segment covering odd indices [seg_lo, seg_hi).
void sieve_segment(std::vector<std::uint64_t>& bits, std::uint64_t seg_lo, std::uint64_t seg_hi,
                   std::span<const std::uint32_t> base) {
  for (std::uint32_t p32 : base) {
    const std::uint64_t p = p32;
    if (p == 2) continue;
    // Odd multiples of p start at p*p (index (p*p-1)/2) and advance by p indices.
    std::uint64_t start = (p * p - 1) / 2;
    if (start >= seg_hi) break;
    if (start < seg_lo) {
      const std::uint64_t offset = (seg_lo - start + p - 1) / p;
      start += offset * p;
    }
    for (std::uint64_t i = start; i < seg_hi; i += p) bits[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }
}

}  // namespace

Sieve::Sieve(std::uint64_t limit, SieveOptions options)
    : limit_(limit), index_(std::make_unique<CountIndex>()) {
  if (limit < 2) throw DomainError("sieve limit must be at least 2, got " + std::to_string(limit));
  if (limit > options.budget)
    throw ResourceError("sieve limit " + std::to_string(limit) + " exceeds the configured budget of " +
                        std::to_string(options.budget));

  base_primes_ = small_primes(isqrt(limit));

  const std::uint64_t odd_count = (limit - 1) / 2 + 1;  // indices 0..(limit-1)/2
  bits_.assign((odd_count + 63) / 64, ~std::uint64_t{0});
  bits_[0] &= ~std::uint64_t{1};  // 1 is not prime
  if (odd_count % 64) bits_.back() &= (std::uint64_t{1} << (odd_count % 64)) - 1;

  const std::uint64_t segments = (odd_count + kSegmentOdds - 1) / kSegmentOdds;
  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(segments)));
  auto run = [&](unsigned worker) {
    for (std::uint64_t s = worker; s < segments; s += jobs) {
      const std::uint64_t lo = s * kSegmentOdds;
      const std::uint64_t hi = std::min(odd_count, lo + kSegmentOdds);
      sieve_segment(bits_, lo, hi, base_primes_);
    }
  };
  if (jobs == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < jobs; ++w) threads.emplace_back(run, w);
    for (auto& t : threads) t.join();
  }
}

void Sieve::require_covered(std::uint64_t x, const char* what) const {
  if (x > limit_)
    throw CoverageError(std::string(what) + ": " + std::to_string(x) + " is beyond sieve limit " +
                        std::to_string(limit_));
}

bool Sieve::is_prime(std::uint64_t n) const {
  require_covered(n, "is_prime");
  if (n < 2) return false;
  if (n == 2) return true;
  if ((n & 1) == 0) return false;
  const std::uint64_t i = n / 2;
  return (bits_[i >> 6] >> (i & 63)) & 1;
}

const Sieve::CountIndex& Sieve::count_index() const {
  std::call_once(index_->once, [this] {
    auto& prefix = index_->prefix;
    const std::uint64_t blocks = (bits_.size() + kBlockWords - 1) / kBlockWords;
    prefix.assign(blocks + 1, 0);
    for (std::uint64_t b = 0; b < blocks; ++b) {
      std::uint64_t c = 0;
      const std::uint64_t end = std::min<std::uint64_t>(bits_.size(), (b + 1) * kBlockWords);
      for (std::uint64_t w = b * kBlockWords; w < end; ++w) c += __builtin_popcountll(bits_[w]);
      prefix[b + 1] = prefix[b] + c;
    }
  });
  return *index_;
}

std::uint64_t Sieve::count_odd_bits_through(std::uint64_t index) const {
  const auto& idx = count_index();
  const std::uint64_t word = index >> 6;
  const std::uint64_t block = word / kBlockWords;
  std::uint64_t c = idx.prefix[block];
  for (std::uint64_t w = block * kBlockWords; w < word; ++w) c += __builtin_popcountll(bits_[w]);
  const unsigned bit = index & 63;
  const std::uint64_t mask = bit == 63 ? ~std::uint64_t{0} : (std::uint64_t{1} << (bit + 1)) - 1;
  return c + __builtin_popcountll(bits_[word] & mask);
}

std::uint64_t Sieve::pi(std::uint64_t x) const {
  require_covered(x, "pi");
  if (x < 2) return 0;
  if (x == 2) return 1;
  return 1 + count_odd_bits_through((x - 1) / 2);
}

PrimeWindow Sieve::primes_in(std::uint64_t lo, std::uint64_t hi) const {
  if (lo > hi) throw DomainError("primes_in: lo " + std::to_string(lo) + " exceeds hi " + std::to_string(hi));
  require_covered(hi, "primes_in");
  PrimeWindow w{lo, hi, {}};
  for_each_prime(lo, hi, [&](std::uint64_t p) { w.primes.push_back(p); });
  return w;
}

std::uint64_t Sieve::next_prime(std::uint64_t n) const {
  if (n < 2) {
    require_covered(2, "next_prime");
    return 2;
  }
  std::uint64_t i = (n + 1) / 2;  // index of the first odd > n
  const std::uint64_t last = (limit_ - 1) / 2;
  while (i <= last) {
    std::uint64_t w = bits_[i >> 6] & (~std::uint64_t{0} << (i & 63));
    if (w) {
      const std::uint64_t found = (i & ~std::uint64_t{63}) + static_cast<std::uint64_t>(__builtin_ctzll(w));
      if (found > last) break;
      return 2 * found + 1;
    }
    i = (i | 63) + 1;
  }
  throw CoverageError("next_prime: no prime in (" + std::to_string(n) + ", " + std::to_string(limit_) + "]");
}

std::uint64_t Sieve::prev_prime(std::uint64_t n) const {
  require_covered(n, "prev_prime");
  if (n < 2) return 0;
  if (n < 3) return 2;
  std::uint64_t i = (n - 1) / 2;  // index of the largest odd <= n
  for (;;) {
    const unsigned bit = i & 63;
    const std::uint64_t mask = bit == 63 ? ~std::uint64_t{0} : (std::uint64_t{1} << (bit + 1)) - 1;
    const std::uint64_t w = bits_[i >> 6] & mask;
    if (w) return 2 * ((i & ~std::uint64_t{63}) + 63 - static_cast<std::uint64_t>(__builtin_clzll(w))) + 1;
    if (i < 64) return 2;
    i = (i & ~std::uint64_t{63}) - 1;
  }
}

}  // namespace bertrand
