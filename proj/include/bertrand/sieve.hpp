#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace bertrand {

struct SieveOptions {
  // Largest limit a caller may request; building beyond it is a ResourceError.
  std::uint64_t budget = 1'000'000'000;
  unsigned jobs = 1;
};

// Ordered primes in the closed range [lo, hi].
struct PrimeWindow {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::vector<std::uint64_t> primes;

  bool empty() const { return primes.empty(); }
  friend bool operator==(const PrimeWindow&, const PrimeWindow&) = default;
};

// Segmented sieve of Eratosthenes over the odd numbers up to `limit`.
//
// Bit i of the store is set when 2i+1 is prime; 2 is handled separately.
// The handle is immutable once constructed; the prefix-count index used by
// pi() is built on first use behind a once_flag, so every query is safe to
// call concurrently.
class Sieve {
 public:
  static constexpr std::uint64_t kSegmentOdds = std::uint64_t{1} << 20;

  explicit Sieve(std::uint64_t limit, SieveOptions options = {});

  Sieve(Sieve&&) noexcept = default;
  Sieve& operator=(Sieve&&) noexcept = default;

  std::uint64_t limit() const { return limit_; }
  std::span<const std::uint32_t> base_primes() const { return base_primes_; }

  bool is_prime(std::uint64_t n) const;

  // Number of primes <= x.
  std::uint64_t pi(std::uint64_t x) const;

  PrimeWindow primes_in(std::uint64_t lo, std::uint64_t hi) const;

  // Smallest prime strictly greater than n.
  std::uint64_t next_prime(std::uint64_t n) const;

  // Largest prime <= n, or 0 when n < 2.
  std::uint64_t prev_prime(std::uint64_t n) const;

  // Calls f(p) for every prime p in [lo, hi], ascending.
  template <class F>
  void for_each_prime(std::uint64_t lo, std::uint64_t hi, F&& f) const;

 private:
  struct CountIndex {
    std::once_flag once;
    std::vector<std::uint64_t> prefix;  // primes among odd bits before block b
  };
  static constexpr std::uint64_t kBlockWords = 8;

  void require_covered(std::uint64_t x, const char* what) const;
  const CountIndex& count_index() const;
  std::uint64_t count_odd_bits_through(std::uint64_t index) const;

  std::uint64_t limit_;
  std::vector<std::uint32_t> base_primes_;
  std::vector<std::uint64_t> bits_;
  std::unique_ptr<CountIndex> index_;
};

template <class F>
void Sieve::for_each_prime(std::uint64_t lo, std::uint64_t hi, F&& f) const {
  require_covered(hi, "for_each_prime");
  if (hi < lo || hi < 2) return;
  if (lo <= 2) {
    f(std::uint64_t{2});
    lo = 3;
  }
  if (hi < lo) return;
  const std::uint64_t first = lo / 2;  // index of the smallest odd >= lo
  const std::uint64_t last = (hi - 1) / 2;
  if (first > last) return;
  std::uint64_t word = first / 64;
  const std::uint64_t last_word = last / 64;
  for (; word <= last_word; ++word) {
    std::uint64_t w = bits_[word];
    if (word == first / 64) w &= ~std::uint64_t{0} << (first % 64);
    if (word == last_word && last % 64 != 63) w &= (std::uint64_t{1} << (last % 64 + 1)) - 1;
    while (w) {
      const int bit = __builtin_ctzll(w);
      f(2 * (word * 64 + static_cast<std::uint64_t>(bit)) + 1);
      w &= w - 1;
    }
  }
}

}  // namespace bertrand
