#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace bertrand {

inline constexpr const char* kToolkitVersion = "bertrand-kit 1.0.0";

enum class Status { verified, failed, partial };

std::string to_string(Status s);
Status parse_status(std::string_view text);

// A prime found for one parameter value. `count` is set by the counting
// families, where `prime` is the largest prime of the interval.
struct Witness {
  std::int64_t n = 0;
  std::uint64_t prime = 0;
  std::optional<std::uint64_t> count;

  friend bool operator==(const Witness&, const Witness&) = default;
};

// Record of a finite verification. `params` always carries a "family" key
// naming the interval rule so the record can be re-tested on its own.
struct Certificate {
  std::string theorem_id;
  nlohmann::json params = nlohmann::json::object();
  std::string convention;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  Status status = Status::partial;
  std::vector<std::int64_t> failures;
  std::vector<Witness> witnesses;
  bool witnesses_complete = false;  // one witness per n, otherwise a sample
  nlohmann::json details = nlohmann::json::object();
  std::vector<Certificate> parts;   // sub-checks of composite drivers
  std::string version = kToolkitVersion;
  std::int64_t elapsed_ms = 0;
  std::optional<std::int64_t> cursor;  // checkpoints only: last n done
};

nlohmann::json to_json(const Certificate& c);
Certificate certificate_from_json(const nlohmann::json& j);

// Serialised form with elapsed_ms removed; equal inputs give equal strings.
std::string canonical_dump(const Certificate& c);

// Full witness lists are kept up to this many values of n.
inline constexpr std::int64_t kFullWitnessLimit = 100'000;

}  // namespace bertrand
