#include "hmiv/widgets.hpp"

#include <set>

namespace hmiv::widgets {

namespace {

using json::Json;

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  return j[key];
}

std::string str(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_string()) throw ConfigError(where + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

int integer(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_number_integer()) throw ConfigError(where + ": '" + key + "' must be an integer");
  return v.get<int>();
}

Rect rect(const Json& j, const std::string& where) {
  const Json& r = field(j, "rect", where);
  return Rect{integer(r, "x", where), integer(r, "y", where), integer(r, "w", where), integer(r, "h", where)};
}

Json rect_json(const Rect& r) { return Json{{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}}; }

bool inside(const Rect& r, int w, int h) {
  return r.w > 0 && r.h > 0 && r.x >= 0 && r.y >= 0 && r.x + r.w <= w && r.y + r.h <= h;
}

}  // namespace

WidgetConfig parse_config(const Json& j) {
  if (!j.is_object()) throw ConfigError("widget configuration must be a JSON object");
  WidgetConfig c;
  c.image = str(j, "image", "config");
  c.width = integer(j, "width", "config");
  c.height = integer(j, "height", "config");
  if (j.contains("model")) c.model = str(j, "model", "config");
  if (j.contains("statechart")) c.statechart = str(j, "statechart", "config");
  if (j.contains("inputs")) {
    if (!j["inputs"].is_array()) throw ConfigError("config: 'inputs' must be an array");
    for (std::size_t i = 0; i < j["inputs"].size(); ++i) {
      const Json& w = j["inputs"][i];
      const std::string where = "inputs[" + std::to_string(i) + "]";
      c.inputs.push_back(InputWidget{str(w, "id", where), rect(w, where), str(w, "event", where),
                                     w.contains("label") ? str(w, "label", where) : std::string{}});
    }
  }
  if (j.contains("displays")) {
    if (!j["displays"].is_array()) throw ConfigError("config: 'displays' must be an array");
    for (std::size_t i = 0; i < j["displays"].size(); ++i) {
      const Json& w = j["displays"][i];
      const std::string where = "displays[" + std::to_string(i) + "]";
      DisplayWidget d;
      d.id = str(w, "id", where);
      d.rect = rect(w, where);
      d.binding = str(w, "binding", where);
      if (w.contains("format")) d.format = str(w, "format", where);
      if (w.contains("event")) d.event = str(w, "event", where);
      c.displays.push_back(std::move(d));
    }
  }
  return c;
}

Json to_json(const WidgetConfig& c) {
  Json j;
  j["image"] = c.image;
  j["width"] = c.width;
  j["height"] = c.height;
  if (!c.model.empty()) j["model"] = c.model;
  if (!c.statechart.empty()) j["statechart"] = c.statechart;
  j["inputs"] = Json::array();
  for (const auto& w : c.inputs)
    j["inputs"].push_back(Json{{"id", w.id}, {"rect", rect_json(w.rect)}, {"event", w.event}, {"label", w.label}});
  j["displays"] = Json::array();
  for (const auto& d : c.displays) {
    Json dj{{"id", d.id}, {"rect", rect_json(d.rect)}, {"binding", d.binding}, {"format", d.format}};
    if (d.event) dj["event"] = *d.event;
    j["displays"].push_back(std::move(dj));
  }
  return j;
}

std::vector<std::string> validate(const WidgetConfig& c, const StatechartModel& model) {
  std::vector<std::string> issues;
  if (c.width <= 0 || c.height <= 0) issues.push_back("image size must be positive");
  std::set<std::string> ids;
  auto check_common = [&](const std::string& id, const Rect& r) {
    if (!ids.insert(id).second) issues.push_back("duplicate widget id '" + id + "'");
    if (!inside(r, c.width, c.height)) issues.push_back("widget '" + id + "' lies outside the image");
  };
  auto check_event = [&](const std::string& id, const std::string& ev) {
    if (!model.event_index(ev)) issues.push_back("widget '" + id + "' sends unknown event '" + ev + "'");
  };
  for (const auto& w : c.inputs) {
    check_common(w.id, w.rect);
    check_event(w.id, w.event);
  }
  for (const auto& d : c.displays) {
    check_common(d.id, d.rect);
    if (d.event) check_event(d.id, *d.event);
    if (d.binding != "mode" && d.binding != "display" && !model.variable_index(d.binding))
      issues.push_back("display '" + d.id + "' binds unknown variable '" + d.binding + "'");
    if (d.format.rfind("check:", 0) == 0) {
      if (!model.mode_index(d.format.substr(6))) issues.push_back("display '" + d.id + "' checks unknown mode '" + d.format.substr(6) + "'");
    } else if (d.format != "text") {
      issues.push_back("display '" + d.id + "' has unknown format '" + d.format + "'");
    }
  }
  return issues;
}

std::vector<std::string> validate_bindings(const WidgetConfig& c, const Json& state) {
  std::vector<std::string> issues;
  const bool has_vars = state.is_object() && state.contains("variables") && state["variables"].is_object();
  for (const auto& d : c.displays) {
    if (d.binding == "mode" || d.binding == "display") continue;
    if (!has_vars || !state["variables"].contains(d.binding))
      issues.push_back("display '" + d.id + "' binds '" + d.binding + "', absent from the session state");
  }
  return issues;
}

std::string render(const DisplayWidget& d, const Json& state) {
  std::string value;
  if (d.binding == "mode" || d.binding == "display")
    value = state.value(d.binding, std::string{});
  else if (state.contains("variables"))
    value = state["variables"].value(d.binding, std::string{});
  if (d.format.rfind("check:", 0) == 0) return value == d.format.substr(6) ? "on" : "off";
  return value;
}

}  // namespace hmiv::widgets
