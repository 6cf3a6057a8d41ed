#include <gtest/gtest.h>

#include <random>

#include <boost/multiprecision/cpp_int.hpp>

#include "hmiv/export.hpp"
#include "hmiv/fcu.hpp"
#include "test_support.hpp"

using namespace hmiv;
using namespace hmiv::fcu;
using boost::multiprecision::cpp_int;

namespace {

std::int64_t half_up(const cpp_int& num, const cpp_int& den) {
  return static_cast<std::int64_t>((2 * num + den) / (2 * den));
}

// v * 33.8639 and v / 33.8639 on hundredths, half-up, then clamped.
std::int64_t oracle_to_hpa(std::int64_t v) {
  return std::clamp<std::int64_t>(half_up(cpp_int(v) * 338639, 10000), 74500, 110000);
}
std::int64_t oracle_to_inhg(std::int64_t v) {
  return std::clamp<std::int64_t>(half_up(cpp_int(v) * 10000, 338639), 2200, 3248);
}

Decimal d(const char* s) { return *Decimal::parse(s); }

}  // namespace

TEST(Fcu, ConversionExamples) {
  EXPECT_EQ(inhg_to_hpa(d("29.92")), d("1013.21"));
  EXPECT_EQ(inhg_to_hpa(d("22.00")), d("745.01"));
  EXPECT_EQ(inhg_to_hpa(d("33.00")), d("1100.00"));
  EXPECT_EQ(hpa_to_inhg(d("1013.00")), d("29.91"));
  EXPECT_EQ(hpa_to_inhg(d("745.00")), d("22.00"));
  EXPECT_EQ(hpa_to_inhg(d("1100.00")), d("32.48"));
}

TEST(Fcu, ConversionMatchesOracleOnGrid) {
  for (std::int64_t v = 0; v <= 4000; ++v)
    ASSERT_EQ(inhg_to_hpa(Decimal::from_hundredths(v)).hundredths(), oracle_to_hpa(v)) << v;
  for (std::int64_t v = 0; v <= 120000; ++v)
    ASSERT_EQ(hpa_to_inhg(Decimal::from_hundredths(v)).hundredths(), oracle_to_inhg(v)) << v;
}

TEST(Fcu, RoundTripWithinOneHundredth) {
  int n = 0;
  for (std::int64_t v = 2200; v <= 3248; ++v, ++n) {
    const auto back = hpa_to_inhg(inhg_to_hpa(Decimal::from_hundredths(v))).hundredths();
    ASSERT_LE(std::abs(back - v), 1) << v;
  }
  EXPECT_EQ(n, 1049);
}

TEST(Fcu, Monotone) {
  for (std::int64_t v = 2200; v < 3248; ++v)
    ASSERT_LE(inhg_to_hpa(Decimal::from_hundredths(v)), inhg_to_hpa(Decimal::from_hundredths(v + 1)));
}

TEST(Fcu, Clamp) {
  EXPECT_EQ(clamp_to_range(d("21.99"), Units::inHg), d("22.00"));
  EXPECT_EQ(clamp_to_range(d("33.00"), Units::inHg), d("32.48"));
  EXPECT_EQ(clamp_to_range(d("900.00"), Units::hPa), d("900.00"));
  EXPECT_EQ(clamp_to_range(d("1200.00"), Units::hPa), d("1100.00"));
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10000; ++i) {
    const auto v = Decimal::from_hundredths(static_cast<std::int64_t>(rng() % 300000) - 50000);
    for (Units u : {Units::inHg, Units::hPa}) ASSERT_EQ(clamp_to_range(clamp_to_range(v, u), u), clamp_to_range(v, u));
  }
}

TEST(Fcu, ProcessKeyExamples) {
  EntryBuffer b;
  b = process_key(b, Key::make_digit(9), Units::hPa).buffer;
  EXPECT_EQ(b.digits, "9");
  b.digits = "29.9";
  EXPECT_EQ(process_key(b, Key::point(), Units::inHg).buffer.digits, "29.9");
  b.digits = "12345";
  EXPECT_EQ(process_key(b, Key::make_digit(6), Units::hPa).buffer.digits, "12345");
  b.digits = "1200";
  auto r = process_key(b, Key::ent(), Units::hPa);
  ASSERT_TRUE(r.commit);
  EXPECT_EQ(r.commit->value, d("1100.00"));
  EXPECT_EQ(r.buffer.digits, "");
  b.digits = "";
  b.pre_edit = PressureValue{d("1013.00"), Units::hPa};
  r = process_key(b, Key::ent(), Units::hPa);
  ASSERT_TRUE(r.commit);
  EXPECT_EQ(*r.commit, b.pre_edit);
  EXPECT_TRUE(process_key(b, Key::clr(), Units::hPa).cancel);
  b.digits = "99";
  EXPECT_EQ(process_key(b, Key::clr(), Units::hPa).buffer.digits, "9");
  EXPECT_TRUE(process_key(b, Key::esc(), Units::hPa).cancel);
}

TEST(Fcu, CommitSafetyAndEscReversibility) {
  std::mt19937_64 rng(11);
  for (int seq = 0; seq < 100000; ++seq) {
    const Units u = rng() % 2 ? Units::hPa : Units::inHg;
    EntryBuffer b;
    b.pre_edit = PressureValue{u == Units::hPa ? d("1013.00") : d("29.92"), u};
    const int n = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < n; ++i) {
      const auto k = rng() % 14;
      const Key key = k < 10 ? Key::make_digit(static_cast<int>(k)) : k == 10 ? Key::point() : k == 11 ? Key::clr() : k == 12 ? Key::esc() : Key::ent();
      const auto before = b.pre_edit;
      auto r = process_key(b, key, u);
      ASSERT_EQ(r.buffer.pre_edit, before);
      ASSERT_LE(r.buffer.digits.size(), kBufferCapacity);
      ASSERT_LE(std::count(r.buffer.digits.begin(), r.buffer.digits.end(), '.'), 1);
      if (r.commit) {
        const auto rg = valid_range(u);
        ASSERT_GE(r.commit->value, rg.lo);
        ASSERT_LE(r.commit->value, rg.hi);
        ASSERT_EQ(r.commit->units, u);
      }
      if (r.commit || r.cancel) break;
      b = r.buffer;
    }
  }
}

TEST(Fcu, RenderDisplay) {
  EXPECT_EQ(render_display({d("1013.21"), Units::hPa}, DisplayMode::QNH), "1013 hPa");
  EXPECT_EQ(render_display({d("1013.50"), Units::hPa}, DisplayMode::QNH), "1014 hPa");
  EXPECT_EQ(render_display({d("29.92"), Units::inHg}, DisplayMode::QNH), "29.92 inHg");
  EXPECT_EQ(render_display({d("29.92"), Units::inHg}, DisplayMode::STD), "STD");
  EntryBuffer b;
  b.digits = "99";
  EXPECT_EQ(render_display({d("1013.00"), Units::hPa}, DisplayMode::EDIT_PRESSURE, &b), "99_");
}

namespace {

SystemState run(const StatechartModel& m, std::initializer_list<const char*> events) {
  SystemState s = initial_state(m);
  for (const char* e : events) s = step(m, s, e).state;
  return s;
}

std::string display_value(const StatechartModel& m, const SystemState& s) {
  return plain_value(s.valuation[*m.variable_index("display")]);
}

}  // namespace

TEST(FcuModel, CommitsAreClampedToTheUnitsRange) {
  const auto doc = testkit::load_fixture("fcu.hmi");
  const auto& m = doc.statecharts.front();
  auto low = run(m, {"click_hPa", "qnhClick", "digit_2", "digit_1", "point", "digit_9", "digit_9", "ENT"});
  EXPECT_EQ(display_value(m, low), "22.00");
  auto high = run(m, {"click_hPa", "qnhClick", "digit_3", "digit_3", "point", "digit_0", "digit_0", "ENT"});
  EXPECT_EQ(display_value(m, high), "32.48");
  auto hpa = run(m, {"qnhClick", "digit_1", "digit_2", "digit_0", "digit_0", "ENT"});
  EXPECT_EQ(display_value(m, hpa), "1100.00");
  auto s990 = run(m, {"qnhClick", "digit_9", "digit_9", "digit_0", "ENT"});
  EXPECT_EQ(json::display_text(m, s990), "990 hPa");
  EXPECT_EQ(m.modes[s990.mode], "QNH");
}

TEST(FcuModel, UnitToggleConvertsTheCommittedValue) {
  const auto doc = testkit::load_fixture("fcu.hmi");
  const auto& m = doc.statecharts.front();
  auto s = run(m, {"qnhClick", "click_hPa"});
  EXPECT_EQ(json::display_text(m, s), "29.91 inHg");
  s = step(m, s, "click_hPa").state;
  EXPECT_EQ(json::display_text(m, s), "1013 hPa");
  EXPECT_EQ(display_value(m, s), "1012.87");
}
