#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hmiv/diagnostic.hpp"
#include "hmiv/expr.hpp"
#include "hmiv/value.hpp"

namespace hmiv {

struct VariableDecl {
  std::string name;
  Type type;
  Value initial;
  Span span;

  bool operator==(const VariableDecl& o) const {
    return name == o.name && type == o.type && initial == o.initial;
  }
};

struct Assignment {
  std::string target;
  Expr value;
  Span span;
  std::uint32_t slot = 0;

  bool operator==(const Assignment& o) const { return target == o.target && value == o.value; }
};

struct Transition {
  std::string id;
  std::string source;
  std::string target;
  std::string event;
  std::optional<Expr> guard;
  std::vector<Assignment> actions;
  Span span;

  std::uint32_t source_mode = 0;
  std::uint32_t target_mode = 0;
  std::uint32_t event_index = 0;

  bool operator==(const Transition& o) const {
    return id == o.id && source == o.source && target == o.target && event == o.event &&
           guard == o.guard && actions == o.actions;
  }
};

// Inactivity timer: runs while the current mode is in `modes`, emits
// `event` once on reaching `duration_ms`.
struct TimerDecl {
  std::string name;
  std::int64_t duration_ms = 0;
  std::string event;
  std::vector<std::string> modes;
  Span span;

  std::uint32_t event_index = 0;
  std::vector<bool> active_in;  // indexed by mode

  bool operator==(const TimerDecl& o) const {
    return name == o.name && duration_ms == o.duration_ms && event == o.event && modes == o.modes;
  }
};

// (mode, events) pairs the model must respond to under every valuation;
// each yields a coverage obligation.
struct ResponseDecl {
  std::string mode;
  std::vector<std::string> events;
  Span span;

  bool operator==(const ResponseDecl& o) const { return mode == o.mode && events == o.events; }
};

struct StatechartModel {
  std::string name;
  std::vector<std::string> modes;
  std::string initial_mode;
  std::vector<VariableDecl> variables;
  std::vector<Transition> transitions;
  std::vector<TimerDecl> timers;
  std::vector<ResponseDecl> responses;
  std::vector<std::string> declared_events;
  Span span;
  Span initial_span;

  // Derived by resolve_model().
  bool resolved = false;
  std::vector<std::string> events;  // declared, then transition events, then timer events
  std::uint32_t initial_index = 0;
  std::vector<std::vector<std::vector<std::uint32_t>>> outgoing;  // [mode][event] -> transitions

  bool operator==(const StatechartModel& o) const {
    return name == o.name && modes == o.modes && initial_mode == o.initial_mode &&
           variables == o.variables && transitions == o.transitions && timers == o.timers &&
           responses == o.responses && declared_events == o.declared_events;
  }

  std::optional<std::uint32_t> mode_index(std::string_view n) const;
  std::optional<std::uint32_t> event_index(std::string_view n) const;
  std::optional<std::uint32_t> variable_index(std::string_view n) const;
  std::optional<std::uint32_t> transition_index(std::string_view id) const;

  // Scope for resolving expressions against this model.
  Scope scope() const;
};

// Validates invariants, resolves names, type-checks every expression and
// builds the derived tables. The model is usable only if no errors are
// returned.
std::vector<Diagnostic> resolve_model(StatechartModel& model);

struct SystemState {
  std::uint32_t mode = 0;
  std::vector<Value> valuation;
  std::vector<std::int64_t> timer_elapsed;

  bool operator==(const SystemState&) const = default;
};

struct SystemStateHash {
  std::size_t operator()(const SystemState& s) const;
};

struct StepResult {
  SystemState state;
  bool accepted = false;
  std::optional<std::uint32_t> transition;
};

SystemState initial_state(const StatechartModel& model);

// Evaluates an expression against a state (read-only).
Value eval_expr(const Expr& e, const SystemState& s);

std::vector<std::uint32_t> enabled_transition_indices(const StatechartModel& model, const SystemState& s);
std::vector<std::string> enabled_transitions(const StatechartModel& model, const SystemState& s);

// Events with at least one enabled transition, in model event order.
std::vector<std::string> enabled_events(const StatechartModel& model, const SystemState& s);

// One event. A disabled event is a no-op (accepted == false, state equal to
// the input). Right-hand sides read the pre-state; assignments apply in
// declaration order. Accepted events reset every timer.
StepResult step(const StatechartModel& model, const SystemState& s, std::uint32_t event);
StepResult step(const StatechartModel& model, const SystemState& s, std::string_view event);

struct TickResult {
  SystemState state;
  std::vector<std::string> fired;     // expiry events emitted, in order
  std::vector<bool> accepted;         // parallel to fired
};

TickResult tick(const StatechartModel& model, const SystemState& s, std::int64_t dt_ms);

// SystemState invariants: mode in range, every variable in its domain.
bool well_formed(const StatechartModel& model, const SystemState& s);

std::string describe_state(const StatechartModel& model, const SystemState& s);

}  // namespace hmiv
