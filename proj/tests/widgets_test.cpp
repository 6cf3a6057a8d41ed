#include <gtest/gtest.h>

#include "hmiv/session.hpp"
#include "hmiv/widgets.hpp"
#include "test_support.hpp"

using namespace hmiv;
using namespace hmiv::widgets;
using json::Json;

namespace {

Json shipped_json() { return Json::parse(testkit::read_file(testkit::fixture_path("fcu.widgets.json"))); }

const Document& fcu_doc() {
  static const Document d = testkit::load_fixture("fcu.hmi");
  return d;
}

const DisplayWidget& display(const WidgetConfig& c, const std::string& id) {
  for (const auto& d : c.displays)
    if (d.id == id) return d;
  throw std::runtime_error("no display " + id);
}

}  // namespace

TEST(Widgets, ShippedConfigIsValid) {
  const auto c = parse_config(shipped_json());
  EXPECT_EQ(c.inputs.size(), 15u);
  EXPECT_EQ(c.displays.size(), 4u);
  EXPECT_EQ(c.model, "fcu.hmi");
  const auto* m = fcu_doc().statechart(c.statechart);
  ASSERT_NE(m, nullptr);
  EXPECT_TRUE(validate(c, *m).empty());
  const auto svg = testkit::read_file(testkit::fixture_path(c.image));
  EXPECT_NE(svg.find("viewBox=\"0 0 " + std::to_string(c.width) + " " + std::to_string(c.height) + "\""), std::string::npos);
}

TEST(Widgets, EveryDigitHasAKey) {
  const auto c = parse_config(shipped_json());
  for (int d = 0; d <= 9; ++d) {
    const auto ev = "digit_" + std::to_string(d);
    EXPECT_TRUE(std::any_of(c.inputs.begin(), c.inputs.end(), [&](const InputWidget& w) { return w.event == ev; })) << ev;
  }
}

TEST(Widgets, JsonRoundTrip) {
  const auto c = parse_config(shipped_json());
  EXPECT_EQ(to_json(parse_config(to_json(c))), to_json(c));
}

TEST(Widgets, ValidationFindsProblems) {
  auto c = parse_config(shipped_json());
  const auto& m = *fcu_doc().statechart("FCU");
  c.inputs[0].rect.x = c.width - 5;
  c.inputs[1].event = "nope";
  c.inputs[2].id = c.inputs[3].id;
  c.displays[0].binding = "altitude";
  c.displays[1].format = "check:NOPE";
  c.displays[2].format = "blink";
  const auto issues = validate(c, m);
  ASSERT_EQ(issues.size(), 6u);
  EXPECT_NE(issues[0].find("outside the image"), std::string::npos);
}

TEST(Widgets, EmptyConfigAndMalformedInput) {
  const auto c = parse_config(Json{{"image", "x.svg"}, {"width", 10}, {"height", 10}});
  EXPECT_TRUE(c.inputs.empty());
  EXPECT_TRUE(validate(c, *fcu_doc().statechart("FCU")).empty());
  EXPECT_THROW(parse_config(Json::array()), ConfigError);
  EXPECT_THROW(parse_config(Json{{"image", "x.svg"}, {"width", "10"}, {"height", 10}}), ConfigError);
  EXPECT_THROW(parse_config(Json{{"image", "x.svg"}, {"width", 10}, {"height", 10}, {"inputs", Json::array({Json{{"id", "k"}}})}}),
               ConfigError);
}

TEST(Widgets, RenderingFollowsTheServiceState) {
  service::SessionOptions o;
  o.model_root = HMIV_FIXTURES;
  service::SessionService svc(o);
  const auto c = parse_config(shipped_json());
  const auto id = svc.create(Json{{"model", c.model}, {"statechart", c.statechart}})["id"].get<std::string>();
  auto st = svc.state(id);
  EXPECT_TRUE(validate_bindings(c, st).empty());
  EXPECT_EQ(render(display(c, "std_button"), st), "on");
  EXPECT_EQ(render(display(c, "qnh_button"), st), "off");
  EXPECT_EQ(render(display(c, "baro_editbox"), st), "STD");
  EXPECT_EQ(render(display(c, "units_display"), st), "hPa");

  for (const char* e : {"qnhClick", "digit_9", "digit_9", "digit_0", "ENT"}) svc.post_event(id, e);
  st = svc.state(id);
  EXPECT_EQ(render(display(c, "baro_editbox"), st), st["display"].get<std::string>());
  EXPECT_EQ(render(display(c, "baro_editbox"), st), "990 hPa");
  EXPECT_EQ(render(display(c, "std_button"), st), "off");
  EXPECT_EQ(render(display(c, "qnh_button"), st), "on");

  for (const auto& w : c.inputs) EXPECT_TRUE(fcu_doc().statechart("FCU")->event_index(w.event)) << w.id;
}

TEST(Widgets, MissingBindingIsReported) {
  auto c = parse_config(shipped_json());
  c.displays[3].binding = "altitude";
  const auto issues = validate_bindings(c, Json{{"mode", "STD"}, {"variables", Json{{"units", "hPa"}}}});
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_NE(issues[0].find("altitude"), std::string::npos);
}
