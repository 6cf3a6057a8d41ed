#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hmiv/export.hpp"
#include "hmiv/statechart.hpp"

// Prototype widget configuration (see docs/widgets.md): push-button
// hotspots and text displays over a device picture.
namespace hmiv::widgets {

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Natural image pixels.
struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
};

struct InputWidget {
  std::string id;
  Rect rect;
  std::string event;
  std::string label;
};

// binding: a variable name, "mode" or "display". format: "text", or
// "check:<MODE>" for a lit indicator when the mode matches.
struct DisplayWidget {
  std::string id;
  Rect rect;
  std::string binding;
  std::string format = "text";
  std::optional<std::string> event;  // the display is also clickable
};

struct WidgetConfig {
  std::string image;
  int width = 0;
  int height = 0;
  std::string model;
  std::string statechart;
  std::vector<InputWidget> inputs;
  std::vector<DisplayWidget> displays;
};

// Throws ConfigError on a malformed document.
WidgetConfig parse_config(const json::Json& j);
json::Json to_json(const WidgetConfig& c);

// Problems that make the configuration unusable: rectangles outside the
// image, duplicate ids, unknown events, unknown bindings, bad formats.
std::vector<std::string> validate(const WidgetConfig& c, const StatechartModel& model);

// Binding check against a service state document ({mode, variables, ...}).
std::vector<std::string> validate_bindings(const WidgetConfig& c, const json::Json& state);

// Text a display widget shows for a service state document.
std::string render(const DisplayWidget& d, const json::Json& state);

}  // namespace hmiv::widgets
