#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace bertrand {

// Exact non-negative rational with 64-bit terms. Used for the real arguments
// of generalized binomials (5n/2, 4n/3, ...) where fractional parts must be
// compared exactly.
class Ratio {
 public:
  constexpr Ratio() = default;
  Ratio(std::int64_t num, std::int64_t den = 1);

  // Accepts "a", "a/b" or a terminating decimal such as "3.25".
  static Ratio parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  std::int64_t floor() const;
  // Fractional part as a Ratio in [0, 1).
  Ratio frac() const;
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_integer() const { return den_ == 1; }
  std::string str() const;

  Ratio operator*(std::int64_t k) const;
  Ratio operator-(const Ratio& other) const;

  friend bool operator==(const Ratio&, const Ratio&) = default;
  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace bertrand
