#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hmiv/diagnostic.hpp"
#include "hmiv/expr.hpp"
#include "hmiv/statechart.hpp"

namespace hmiv::check {

// One member of a property's action class: an event, optionally restricted
// to transitions leaving one mode.
struct ActionRef {
  std::string event;
  std::optional<std::string> mode;
  Span span;

  std::uint32_t event_index = 0;
  std::optional<std::uint32_t> mode_index;

  bool operator==(const ActionRef& o) const { return event == o.event && mode == o.mode; }
};

enum class Relation { equal, not_equal, custom };
const char* to_string(Relation r);

enum class Method { inductive, reachable, both };
const char* to_string(Method m);

// Consistency template instance:
//   for every a in actions: guard(s) => relation(filter_pre(s), filter_post(a(s)))
// or a state predicate (`always`) checked over reachable states.
struct PropertySpec {
  std::string name;
  std::string system;
  std::vector<ActionRef> actions;
  std::optional<Expr> guard;
  std::vector<Expr> filter_pre;
  std::vector<Expr> filter_post;
  Relation relation = Relation::equal;
  std::optional<Expr> custom;  // relation == custom; reads pre(i) / post(i)
  std::optional<Expr> always;
  std::optional<Method> method;  // default: inductive for templates, reachable for predicates
  Span span;

  bool operator==(const PropertySpec& o) const {
    return name == o.name && system == o.system && actions == o.actions && guard == o.guard &&
           filter_pre == o.filter_pre && filter_post == o.filter_post && relation == o.relation &&
           custom == o.custom && always == o.always && method == o.method;
  }

  bool is_template() const { return !always.has_value(); }
  Method effective_method() const { return method.value_or(is_template() ? Method::inductive : Method::reachable); }
};

std::vector<Diagnostic> resolve_property(PropertySpec& p, const StatechartModel& model);

enum class ObligationKind { coverage, disjointness, range_preservation };
const char* to_string(ObligationKind k);

struct Obligation {
  ObligationKind kind = ObligationKind::coverage;
  std::uint32_t mode = 0;
  std::uint32_t event = 0;
  std::optional<std::uint32_t> transition;  // range_preservation
  std::string location;                     // "EDIT_PRESSURE/ENT" or a transition id
  std::string formula;
};

// Disjointness for every (mode, event) with two or more transitions,
// coverage for every declared response, range preservation for every
// transition assigning a range-annotated (decimal range or bounded string)
// variable. Ordered by mode, then event, then transition.
std::vector<Obligation> guard_obligations(const StatechartModel& model);

struct DomainBudget {
  std::uint64_t exhaustive_limit = 1000000;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  bool allow_sampling = true;
};

class ProjectionTooLarge : public Error {
 public:
  using Error::Error;
};

enum class Status { holds, violated, unknown };
const char* to_string(Status s);

enum class VerdictMethod { inductive_exhaustive, inductive_sampled, bounded_reachability };
const char* to_string(VerdictMethod m);

struct Counterexample {
  SystemState pre;
  std::optional<std::uint32_t> event;  // absent for state predicates
  std::optional<SystemState> post;
  std::optional<std::string> transition;
  std::optional<std::vector<std::string>> trace;  // events from the initial state (reachability)
  std::string detail;
};

struct Verdict {
  Status status = Status::holds;
  VerdictMethod method = VerdictMethod::inductive_exhaustive;
  std::optional<Counterexample> counterexample;
  double coverage = 1.0;         // sampled fraction of the projected domain
  std::uint64_t evaluated = 0;   // valuations (inductive) or states (reachability)
  std::size_t depth = 0;         // reachability: deepest BFS level expanded
  std::string note;
};

Verdict check_obligation(const StatechartModel& model, const Obligation& ob, const DomainBudget& budget = {});
Verdict check_template(const StatechartModel& model, const PropertySpec& prop, const DomainBudget& budget = {});

// Visited-state keys: decimals are bucketed by floor(h / decimal_quantum);
// strings over an alphabet containing '.' are entry buffers, keyed by
// (length, has '.', entry value truncated to string_digits significant
// digits); exact keys when `exact` is set.
struct ReachOptions {
  std::size_t max_depth = 25;
  std::size_t max_states = 1000000;
  std::int64_t decimal_quantum = 1000;
  int string_digits = 3;
  bool exact = false;
};

// Breadth-first exploration from the initial state over every accepted
// event. Throws ResourceLimit when more than max_states keys are visited.
Verdict check_reachable(const StatechartModel& model, const PropertySpec& prop, const ReachOptions& opts = {});
Verdict check_reachable(const StatechartModel& model, const Expr& predicate, const ReachOptions& opts = {});

// Replays a violated verdict's counterexample through step() and confirms
// that the property is falsified.
bool confirm_counterexample(const StatechartModel& model, const PropertySpec& prop, const Verdict& v);
bool confirm_obligation_witness(const StatechartModel& model, const Obligation& ob, const Verdict& v);

std::string describe_counterexample(const StatechartModel& model, const Counterexample& c);

}  // namespace hmiv::check
