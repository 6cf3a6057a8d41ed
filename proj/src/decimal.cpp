#include "hmiv/decimal.hpp"

#include <cstdlib>

namespace hmiv {

std::string Decimal::to_string() const {
  const bool neg = value_ < 0;
  // Avoid overflow on INT64_MIN by working in unsigned.
  const std::uint64_t mag = neg ? 0 - static_cast<std::uint64_t>(value_) : static_cast<std::uint64_t>(value_);
  std::string frac = std::to_string(mag % 100);
  if (frac.size() < 2) frac.insert(0, "0");
  return (neg ? "-" : "") + std::to_string(mag / 100) + "." + frac;
}

std::optional<Decimal> Decimal::parse(std::string_view text) {
  bool neg = false;
  if (!text.empty() && text.front() == '-') {
    neg = true;
    text.remove_prefix(1);
  }
  if (text.empty()) return std::nullopt;
  __int128 whole = 0;
  std::size_t i = 0;
  std::size_t digits = 0;
  for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i, ++digits) {
    whole = whole * 10 + (text[i] - '0');
    if (whole > INT64_MAX) return std::nullopt;
  }
  if (digits == 0) return std::nullopt;
  __int128 frac = 0;
  if (i < text.size()) {
    if (text[i] != '.') return std::nullopt;
    ++i;
    std::size_t fd = 0;
    for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i, ++fd) frac = frac * 10 + (text[i] - '0');
    if (fd == 0 || fd > 2 || i != text.size()) return std::nullopt;
    if (fd == 1) frac *= 10;
  }
  __int128 total = whole * 100 + frac;
  if (neg) total = -total;
  if (total > INT64_MAX || total < INT64_MIN) return std::nullopt;
  return Decimal(static_cast<std::int64_t>(total));
}

Decimal Decimal::from_entry(std::string_view text) {
  __int128 whole = 0;
  std::size_t i = 0;
  for (; i < text.size() && text[i] != '.'; ++i) {
    if (text[i] >= '0' && text[i] <= '9') {
      whole = whole * 10 + (text[i] - '0');
      if (whole > INT64_MAX / 100) throw ArithmeticOverflow();
    }
  }
  // Fractional digits: first two kept, third decides half-up rounding.
  int kept = 0;
  __int128 frac = 0;
  bool round_up = false;
  int seen = 0;
  for (++i; i < text.size(); ++i) {
    const char c = text[i];
    if (c < '0' || c > '9') continue;
    if (seen < 2) {
      frac = frac * 10 + (c - '0');
      ++kept;
    } else if (seen == 2) {
      round_up = c >= '5';
    }
    ++seen;
  }
  for (; kept < 2; ++kept) frac *= 10;
  __int128 total = whole * 100 + frac + (round_up ? 1 : 0);
  return Decimal(checked(total));
}

}  // namespace hmiv
