#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hmiv/document.hpp"
#include "hmiv/statechart.hpp"
#include "hmiv/taskmodel.hpp"

// Co-execution of a task model with a statechart system model.
namespace hmiv::coexec {

class UnboundInputTask : public Error {
 public:
  using Error::Error;
};

class UnknownEvent : public Error {
 public:
  using Error::Error;
};

class KindMismatch : public Error {
 public:
  using Error::Error;
};

// Validated correspondence, indexed by flat task position. Keeps
// references to the task model and system; both must outlive it.
struct Binding {
  const task::TaskModel* tasks = nullptr;
  const StatechartModel* system = nullptr;
  std::string name;
  std::vector<std::optional<std::uint32_t>> input_event;  // per flat task
  std::vector<std::optional<Expr>> observation;           // per flat task
  std::vector<std::uint32_t> system_inputs;               // event indices, model order
  std::vector<std::string> warnings;                      // unbound output tasks
};

Binding bind(const Correspondence& corr, const task::TaskModel& tm, const StatechartModel& model);

struct CoState {
  task::TaskExecState task;
  SystemState system;

  bool operator==(const CoState&) const = default;
};

CoState initial_costate(const Binding& b);

enum class DivergenceKind { task_allowed_system_disabled, system_allowed_task_forbidden, output_mismatch };
const char* to_string(DivergenceKind k);

struct DivergenceReport {
  DivergenceKind kind = DivergenceKind::task_allowed_system_disabled;
  std::vector<std::string> trace;  // leaves executed; the offending leaf is last for the task-side kinds
  std::string detail;              // offending task or event

  bool operator==(const DivergenceReport&) const = default;
};

struct CostepResult {
  CoState state;
  std::optional<DivergenceReport> divergence;
};

// Executes one enabled leaf. Interactive inputs send their bound event to
// the system; an ignored event is a divergence. Interactive outputs check
// their observation against the system state. Throws TaskNotEnabled.
CostepResult costep(const Binding& b, const CoState& cs, std::string_view leaf);
CostepResult costep(const Binding& b, const CoState& cs, std::uint32_t leaf);

struct DivergenceSearch {
  std::vector<DivergenceReport> divergences;
  std::size_t scenarios = 0;
  bool scenarios_complete = true;
  std::size_t co_states = 0;
};

inline constexpr std::size_t kDefaultCoStateCap = 1000000;

// Direction 1 replays every enumerated scenario. Direction 2 explores every
// co-reachable state within max_length leaves and reports each event of
// binding.system_inputs that the system accepts in some co-reachable state
// while none of its bound tasks is ever enabled; the trace leads to the
// first such state. Throws ResourceLimit past either cap.
DivergenceSearch find_divergences(const Binding& b, std::size_t max_length,
                                  std::size_t scenario_cap = task::kDefaultScenarioCap,
                                  std::size_t state_cap = kDefaultCoStateCap);

struct TestCase {
  std::string name;
  std::vector<std::string> scenario;
  bool passed = true;
  std::optional<DivergenceReport> divergence;
  std::string note;
  CoState final_state;
};

struct TestReport {
  std::string suite;
  std::vector<TestCase> cases;

  std::size_t failures() const;
};

TestReport run_tests(const Binding& b, const std::vector<std::vector<std::string>>& scenarios);

// JUnit-style XML.
std::string to_junit(const TestReport& r, const std::vector<DivergenceReport>& extra = {});

std::string describe(const DivergenceReport& d);

}  // namespace hmiv::coexec
