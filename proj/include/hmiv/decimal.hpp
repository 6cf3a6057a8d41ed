#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "hmiv/error.hpp"

namespace hmiv {

// Exact signed decimal with two fractional digits, stored as an integer
// count of hundredths. Multiplication and division truncate toward zero.
class Decimal {
 public:
  constexpr Decimal() = default;

  static constexpr Decimal from_hundredths(std::int64_t h) { return Decimal(h); }
  static Decimal from_whole(std::int64_t whole) { return Decimal(checked(static_cast<__int128>(whole) * 100)); }

  constexpr std::int64_t hundredths() const { return value_; }

  friend constexpr auto operator<=>(Decimal, Decimal) = default;

  friend Decimal operator+(Decimal a, Decimal b) {
    return Decimal(checked(static_cast<__int128>(a.value_) + b.value_));
  }
  friend Decimal operator-(Decimal a, Decimal b) {
    return Decimal(checked(static_cast<__int128>(a.value_) - b.value_));
  }
  friend Decimal operator*(Decimal a, Decimal b) {
    return Decimal(checked(static_cast<__int128>(a.value_) * b.value_ / 100));
  }
  friend Decimal operator/(Decimal a, Decimal b) {
    if (b.value_ == 0) throw DivisionByZero();
    return Decimal(checked(static_cast<__int128>(a.value_) * 100 / b.value_));
  }
  Decimal operator-() const { return Decimal(checked(-static_cast<__int128>(value_))); }

  // Canonical text: optional '-', integer part, '.', exactly two digits.
  std::string to_string() const;

  // Strict literal syntax: [-]digits[.d[d]]. More than two fractional
  // digits is rejected.
  static std::optional<Decimal> parse(std::string_view text);

  // Total conversion used for keypad entry buffers: digits before the first
  // '.', fractional digits after it (further dots ignored), rounded half-up
  // to hundredths. "" and "." are zero.
  static Decimal from_entry(std::string_view text);

 private:
  constexpr explicit Decimal(std::int64_t h) : value_(h) {}

  static std::int64_t checked(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw ArithmeticOverflow();
    return static_cast<std::int64_t>(v);
  }

  std::int64_t value_ = 0;
};

inline constexpr Decimal operator""_hd(unsigned long long h) {
  return Decimal::from_hundredths(static_cast<std::int64_t>(h));
}

}  // namespace hmiv
