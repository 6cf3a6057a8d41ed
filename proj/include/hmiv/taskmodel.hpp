#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hmiv/diagnostic.hpp"
#include "hmiv/error.hpp"

namespace hmiv::task {

enum class TaskKind : std::uint8_t {
  abstract,
  interactive_input,
  interactive_output,
  cognitive_analysis,
  cognitive_decision,
  perception,
  motor,
  system,
};

inline constexpr std::size_t kTaskKindCount = 8;

const char* to_string(TaskKind k);
std::optional<TaskKind> parse_task_kind(std::string_view s);

enum class Operator : std::uint8_t {
  none,
  enable,
  choice,
  order_independent,
  concurrent,
  optional_child,
  iterate_child,
};

const char* to_string(Operator op);
std::optional<Operator> parse_operator(std::string_view s);
bool is_unary(Operator op);

struct TaskNode {
  std::string id;
  std::string label;
  TaskKind kind = TaskKind::abstract;
  Operator op = Operator::none;
  std::vector<TaskNode> children;
  std::vector<std::string> produces;
  std::vector<std::string> consumes;
  Span span;

  bool operator==(const TaskNode& o) const {
    return id == o.id && label == o.label && kind == o.kind && op == o.op && children == o.children &&
           produces == o.produces && consumes == o.consumes;
  }
};

struct InfoItem {
  std::string id;
  std::string label;
  Span span;

  bool operator==(const InfoItem& o) const { return id == o.id && label == o.label; }
};

// Preorder-flattened node; the subtree of node i is [i, end).
struct FlatTask {
  std::string id;
  TaskKind kind = TaskKind::abstract;
  Operator op = Operator::none;
  std::int32_t parent = -1;
  std::uint32_t end = 0;
  std::uint32_t position = 0;  // index among the parent's children
  std::vector<std::uint32_t> children;
  std::vector<std::string> produces;
  std::vector<std::string> consumes;
  bool nullable = false;  // a fresh node may complete without executing a leaf
};

struct TaskModel {
  std::string name;
  std::vector<InfoItem> items;
  std::optional<TaskNode> root;
  Span span;

  // Derived by resolve_taskmodel().
  bool resolved = false;
  std::vector<FlatTask> flat;

  bool operator==(const TaskModel& o) const { return name == o.name && items == o.items && root == o.root; }

  std::optional<std::uint32_t> find(std::string_view id) const;
  const TaskNode* node(std::string_view id) const;
};

std::vector<Diagnostic> resolve_taskmodel(TaskModel& tm);

class TaskNotEnabled : public Error {
 public:
  using Error::Error;
};

class UnknownTask : public Error {
 public:
  using Error::Error;
};

enum class TaskStatus { pending, active, done, skipped };
const char* to_string(TaskStatus s);

// Per-node progress of one configuration.
struct NodeState {
  bool started = false;
  std::int32_t aux = -1;  // enable: current child; choice: chosen child; order_independent: active child

  auto operator<=>(const NodeState&) const = default;
};

using Configuration = std::vector<NodeState>;

// Execution state. Iteration can make the same leaf sequence correspond to
// several tree configurations (continue the current iteration or start a
// new one), so the state keeps every configuration consistent with the
// trace, sorted and without duplicates.
struct TaskExecState {
  std::vector<Configuration> configs;
  std::vector<std::string> trace;
  std::set<std::string> produced;

  bool operator==(const TaskExecState&) const = default;
};

TaskExecState initial_exec_state(const TaskModel& tm);

// Enabled leaves as flat indices, in preorder.
std::vector<std::uint32_t> enabled_leaves(const TaskModel& tm, const TaskExecState& es);
std::vector<std::string> enabled_tasks(const TaskModel& tm, const TaskExecState& es);

TaskExecState execute_task(const TaskModel& tm, const TaskExecState& es, std::uint32_t leaf);
TaskExecState execute_task(const TaskModel& tm, const TaskExecState& es, std::string_view id);

// The root may be considered finished after the current trace.
bool completable(const TaskModel& tm, const TaskExecState& es);

// Status in the first configuration.
TaskStatus status(const TaskModel& tm, const TaskExecState& es, std::string_view id);

inline constexpr std::size_t kDefaultScenarioCap = 10000;

struct ScenarioSet {
  std::vector<std::vector<std::string>> scenarios;
  bool complete = true;  // no execution was cut at max_length
};

// Complete executions (traces after which the root is finished) of length
// at most max_length, depth-first with children in preorder. Throws
// ResourceLimit beyond cap scenarios.
ScenarioSet enumerate_scenarios(const TaskModel& tm, std::size_t max_length, std::size_t cap = kDefaultScenarioCap);

struct WorkloadMetrics {
  std::string scope;
  std::array<std::size_t, kTaskKindCount> counts{};  // leaves per kind
  std::size_t leaves = 0;
  std::size_t cognitive = 0;  // cognitive_analysis + cognitive_decision
  std::size_t information_items_to_remember = 0;
  std::vector<std::string> remembered;  // the items counted above

  std::size_t count(TaskKind k) const { return counts[static_cast<std::size_t>(k)]; }
};

// Items count as remembered when produced by a perception or cognitive
// task and consumed by a task later in preorder, both inside the scope.
WorkloadMetrics workload_metrics(const TaskModel& tm, std::string_view scope);

}  // namespace hmiv::task
