#include "hmiv/fcu.hpp"

#include <algorithm>

namespace hmiv::fcu {

const char* to_string(Units u) { return u == Units::inHg ? "inHg" : "hPa"; }

std::optional<Units> parse_units(std::string_view s) {
  if (s == "inHg") return Units::inHg;
  if (s == "hPa") return Units::hPa;
  return std::nullopt;
}

Range valid_range(Units u) {
  if (u == Units::inHg) return {Decimal::from_hundredths(2200), Decimal::from_hundredths(3248)};
  return {Decimal::from_hundredths(74500), Decimal::from_hundredths(110000)};
}

Decimal clamp_to_range(Decimal v, Units u) {
  const Range r = valid_range(u);
  return std::clamp(v, r.lo, r.hi);
}

namespace {

// floor((2 * num + den) / (2 * den)), i.e. num/den rounded half-up.
std::int64_t div_half_up(__int128 num, __int128 den) {
  __int128 n = 2 * num + den;
  __int128 d = 2 * den;
  __int128 q = n / d;
  if ((n % d != 0) && ((n < 0) != (d < 0))) --q;
  if (q > INT64_MAX || q < INT64_MIN) throw ArithmeticOverflow();
  return static_cast<std::int64_t>(q);
}

}  // namespace

Decimal inhg_to_hpa_unclamped(Decimal v) {
  return Decimal::from_hundredths(div_half_up(static_cast<__int128>(v.hundredths()) * kHpaPerInhgE4, 10000));
}

Decimal hpa_to_inhg_unclamped(Decimal v) {
  return Decimal::from_hundredths(div_half_up(static_cast<__int128>(v.hundredths()) * 10000, kHpaPerInhgE4));
}

Decimal inhg_to_hpa(Decimal v) { return clamp_to_range(inhg_to_hpa_unclamped(v), Units::hPa); }

Decimal hpa_to_inhg(Decimal v) { return clamp_to_range(hpa_to_inhg_unclamped(v), Units::inHg); }

Decimal convert(Decimal v, Units from, Units to) {
  if (from == to) return v;
  return from == Units::inHg ? inhg_to_hpa(v) : hpa_to_inhg(v);
}

Decimal parse_entry(std::string_view digits) { return Decimal::from_entry(digits); }

KeyResult process_key(const EntryBuffer& buf, Key key, Units u) {
  KeyResult r{buf, std::nullopt, false};
  switch (key.kind) {
    case KeyKind::digit:
      if (buf.digits.size() < kBufferCapacity) r.buffer.digits.push_back(static_cast<char>('0' + key.digit));
      break;
    case KeyKind::decimal_point:
      if (buf.digits.size() < kBufferCapacity && buf.digits.find('.') == std::string::npos)
        r.buffer.digits.push_back('.');
      break;
    case KeyKind::clr:
      if (buf.digits.empty())
        r.cancel = true;
      else
        r.buffer.digits.pop_back();
      break;
    case KeyKind::esc:
      r.cancel = true;
      r.buffer.digits.clear();
      break;
    case KeyKind::ent:
      if (buf.digits.empty())
        r.commit = buf.pre_edit;
      else
        r.commit = PressureValue{clamp_to_range(parse_entry(buf.digits), u), u};
      r.buffer.digits.clear();
      break;
  }
  return r;
}

std::string render_display(const PressureValue& p, DisplayMode mode, const EntryBuffer* buf) {
  switch (mode) {
    case DisplayMode::STD:
      return "STD";
    case DisplayMode::EDIT_PRESSURE:
      return (buf ? buf->digits : std::string{}) + "_";
    case DisplayMode::QNH:
      break;
  }
  if (p.units == Units::hPa) {
    const std::int64_t whole = div_half_up(p.value.hundredths(), 100);
    return std::to_string(whole) + " hPa";
  }
  return p.value.to_string() + " inHg";
}

}  // namespace hmiv::fcu
