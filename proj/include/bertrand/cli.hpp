#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>

#include "bertrand/margin.hpp"

namespace bertrand {

// Exit codes of the command-line tool.
inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitResource = 3;

// Environment variable holding the default largest sieve limit.
inline constexpr const char* kSieveLimitEnv = "BERTRAND_SIEVE_LIMIT";

// "10000", "1e4", "2.5e6" (must be integral).
std::int64_t parse_count(std::string_view text);
// "k=8,n=10000"
Point parse_point(std::string_view text);
// "lo..hi"
std::pair<std::int64_t, std::int64_t> parse_range(std::string_view text);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bertrand
