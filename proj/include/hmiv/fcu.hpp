#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "hmiv/decimal.hpp"

// Barometer data entry of the FCU EFIS control panel: units, valid ranges,
// conversion, keypad processing and display rendering.
namespace hmiv::fcu {

enum class Units { inHg, hPa };

const char* to_string(Units u);
std::optional<Units> parse_units(std::string_view s);

struct PressureValue {
  Decimal value;
  Units units = Units::hPa;
  bool operator==(const PressureValue&) const = default;
};

struct Range {
  Decimal lo;
  Decimal hi;
};

// inHg [22.00, 32.48], hPa [745.00, 1100.00]
Range valid_range(Units u);

// 1 inHg = 33.8639 hPa
inline constexpr std::int64_t kHpaPerInhgE4 = 338639;

Decimal clamp_to_range(Decimal v, Units u);

// Exact scaled-integer conversion, half-up to hundredths, then clamped to
// the target unit's range.
Decimal inhg_to_hpa(Decimal v);
Decimal hpa_to_inhg(Decimal v);

// Unclamped conversions (used by the round-trip and monotonicity checks).
Decimal inhg_to_hpa_unclamped(Decimal v);
Decimal hpa_to_inhg_unclamped(Decimal v);

Decimal convert(Decimal v, Units from, Units to);

inline constexpr std::size_t kBufferCapacity = 5;

struct EntryBuffer {
  std::string digits;
  PressureValue pre_edit;
  bool operator==(const EntryBuffer&) const = default;
};

enum class KeyKind { digit, decimal_point, clr, esc, ent };

struct Key {
  KeyKind kind = KeyKind::digit;
  int digit = 0;

  static Key make_digit(int d) { return Key{KeyKind::digit, d}; }
  static Key point() { return Key{KeyKind::decimal_point, 0}; }
  static Key clr() { return Key{KeyKind::clr, 0}; }
  static Key esc() { return Key{KeyKind::esc, 0}; }
  static Key ent() { return Key{KeyKind::ent, 0}; }
};

struct KeyResult {
  EntryBuffer buffer;
  std::optional<PressureValue> commit;
  bool cancel = false;
};

// Keypad processing. Appends obey the 5-character capacity and the
// single-dot rule (violating keystrokes are ignored). CLR drops the last
// character, or cancels on an empty buffer. ESC cancels. ENT commits the
// clamped parsed buffer, or pre_edit when the buffer is empty. Commit and
// cancel both clear the buffer; pre_edit is never modified.
KeyResult process_key(const EntryBuffer& buf, Key key, Units u);

Decimal parse_entry(std::string_view digits);

enum class DisplayMode { STD, QNH, EDIT_PRESSURE };

// STD -> "STD"; QNH -> "1013 hPa" / "29.92 inHg"; EDIT_PRESSURE -> buffer
// followed by a '_' cursor.
std::string render_display(const PressureValue& p, DisplayMode mode, const EntryBuffer* buf = nullptr);

}  // namespace hmiv::fcu
