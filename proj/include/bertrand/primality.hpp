#pragma once

#include <cstdint>
#include <optional>

namespace bertrand {

// Deterministic for every 64-bit input: trial division by the primes below 64,
// then a strong-probable-prime test to the seven bases of Sinclair's set.
bool is_prime_64(std::uint64_t n);

// Result of scanning [lo, hi] (closed) upward for the first prime.
struct WindowSearchResult {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::optional<std::uint64_t> witness;
  // Integers of the window examined before stopping (all of them when no
  // witness exists).
  std::uint64_t tested_count = 0;
  // Candidates that survived the mod-30 wheel and needed a strong test.
  std::uint64_t strong_tests = 0;
};

WindowSearchResult first_prime_in_window(std::uint64_t lo, std::uint64_t hi);

}  // namespace bertrand
