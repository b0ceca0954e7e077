#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace bertrand {

struct Chunk {
  std::uint64_t lo;
  std::uint64_t hi;  // inclusive
};

// Splits [lo, hi] into at most `parts` contiguous, ordered chunks.
inline std::vector<Chunk> split_range(std::uint64_t lo, std::uint64_t hi, unsigned parts) {
  std::vector<Chunk> out;
  if (hi < lo) return out;
  const std::uint64_t total = hi - lo + 1;
  const std::uint64_t count = std::max<std::uint64_t>(1, std::min<std::uint64_t>(parts, total));
  const std::uint64_t base = total / count;
  const std::uint64_t extra = total % count;
  std::uint64_t cursor = lo;
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t len = base + (i < extra ? 1 : 0);
    out.push_back({cursor, cursor + len - 1});
    cursor += len;
  }
  return out;
}

// Runs `work(chunk)` on each chunk of [lo, hi] using up to `jobs` threads and
// returns the per-chunk results in range order, so any left fold over them is
// independent of the worker count.
template <class Work>
auto map_chunks(std::uint64_t lo, std::uint64_t hi, unsigned jobs, Work work)
    -> std::vector<decltype(work(Chunk{}))> {
  using Result = decltype(work(Chunk{}));
  const auto chunks = split_range(lo, hi, std::max(1u, jobs));
  std::vector<Result> results(chunks.size());
  if (chunks.size() <= 1) {
    for (std::size_t i = 0; i < chunks.size(); ++i) results[i] = work(chunks[i]);
    return results;
  }
  std::vector<std::exception_ptr> errors(chunks.size());
  std::vector<std::thread> threads;
  threads.reserve(chunks.size());
  for (std::size_t i = 0; i < chunks.size(); ++i)
    threads.emplace_back([&, i] {
      try {
        results[i] = work(chunks[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    });
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace bertrand
