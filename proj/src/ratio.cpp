#include "bertrand/ratio.hpp"

#include <charconv>
#include <numeric>

#include "bertrand/errors.hpp"

namespace bertrand {
namespace {

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw DomainError("not a rational number: '" + std::string(whole) + "'");
  return v;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw DomainError("rational arithmetic overflow");
  return out;
}

}  // namespace

Ratio::Ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

Ratio Ratio::parse(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos)
    return Ratio(parse_int(text.substr(0, slash), text), parse_int(text.substr(slash + 1), text));
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const std::string_view int_part = text.substr(0, dot);
    const std::string_view frac_part = text.substr(dot + 1);
    if (frac_part.size() > 17) throw DomainError("too many decimals: '" + std::string(text) + "'");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) den *= 10;
    const std::int64_t whole = int_part.empty() ? 0 : parse_int(int_part, text);
    const std::int64_t frac = frac_part.empty() ? 0 : parse_int(frac_part, text);
    const bool negative = !int_part.empty() && int_part.front() == '-';
    const std::int64_t scaled = checked_mul(whole, den);
    return Ratio(negative ? scaled - frac : scaled + frac, den);
  }
  return Ratio(parse_int(text, text));
}

std::int64_t Ratio::floor() const {
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ < 0) --q;
  return q;
}

Ratio Ratio::frac() const { return Ratio(num_ - floor() * den_, den_); }

std::string Ratio::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Ratio Ratio::operator*(std::int64_t k) const {
  const std::int64_t g = std::gcd(k, den_);
  return Ratio(checked_mul(num_, k / g), den_ / g);
}

Ratio Ratio::operator-(const Ratio& other) const {
  const std::int64_t g = std::gcd(den_, other.den_);
  const std::int64_t left = checked_mul(num_, other.den_ / g);
  const std::int64_t right = checked_mul(other.num_, den_ / g);
  return Ratio(left - right, checked_mul(den_ / g, other.den_));
}

std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
  const __int128 l = static_cast<__int128>(a.num_) * b.den_;
  const __int128 r = static_cast<__int128>(b.num_) * a.den_;
  return l <=> r;
}

}  // namespace bertrand
