#include "hmiv/coexec.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_set>

namespace hmiv::coexec {

using task::TaskKind;

const char* to_string(DivergenceKind k) {
  switch (k) {
    case DivergenceKind::task_allowed_system_disabled: return "task_allowed_system_disabled";
    case DivergenceKind::system_allowed_task_forbidden: return "system_allowed_task_forbidden";
    case DivergenceKind::output_mismatch: return "output_mismatch";
  }
  return "?";
}

Binding bind(const Correspondence& corr, const task::TaskModel& tm, const StatechartModel& model) {
  if (!tm.resolved) throw Error("task model '" + tm.name + "' is not resolved");
  if (!model.resolved) throw Error("statechart '" + model.name + "' is not resolved");
  Binding b;
  b.tasks = &tm;
  b.system = &model;
  b.name = corr.name;
  b.input_event.assign(tm.flat.size(), std::nullopt);
  b.observation.assign(tm.flat.size(), std::nullopt);

  auto leaf_of = [&](const std::string& id, TaskKind want) {
    auto i = tm.find(id);
    if (!i) throw task::UnknownTask("unknown task '" + id + "' in correspondence '" + corr.name + "'");
    const auto& f = tm.flat[*i];
    if (f.op != task::Operator::none || f.kind != want)
      throw KindMismatch("task '" + id + "' is " + task::to_string(f.kind) + ", expected a " + task::to_string(want) +
                         " leaf");
    if (b.input_event[*i] || b.observation[*i]) throw KindMismatch("task '" + id + "' is bound twice");
    return *i;
  };
  auto event_of = [&](const std::string& e) {
    auto ev = model.event_index(e);
    if (!ev) throw UnknownEvent("unknown event '" + e + "' in statechart '" + model.name + "'");
    return *ev;
  };

  for (const auto& in : corr.inputs) {
    const auto i = leaf_of(in.task, TaskKind::interactive_input);
    b.input_event[i] = event_of(in.event);
  }
  const Scope scope = model.scope();
  for (const auto& out : corr.outputs) {
    const auto i = leaf_of(out.task, TaskKind::interactive_output);
    Expr e = out.observation;
    std::vector<Diagnostic> diags;
    auto t = resolve(e, scope, diags);
    if (!t || t->kind != TypeKind::boolean)
      throw KindMismatch("observation bound to '" + out.task + "' is not a boolean predicate over '" + model.name + "'");
    b.observation[i] = std::move(e);
  }
  for (std::size_t i = 0; i < tm.flat.size(); ++i) {
    const auto& f = tm.flat[i];
    if (f.op != task::Operator::none) continue;
    if (f.kind == TaskKind::interactive_input && !b.input_event[i])
      throw UnboundInputTask("interactive input task '" + f.id + "' has no binding");
    if (f.kind == TaskKind::interactive_output && !b.observation[i])
      b.warnings.push_back("interactive output task '" + f.id + "' has no binding");
  }

  std::set<std::uint32_t> inputs;
  if (corr.system_inputs) {
    for (const auto& e : *corr.system_inputs) inputs.insert(event_of(e));
  } else {
    for (const auto& ev : b.input_event)
      if (ev) inputs.insert(*ev);
  }
  b.system_inputs.assign(inputs.begin(), inputs.end());
  return b;
}

CoState initial_costate(const Binding& b) { return CoState{task::initial_exec_state(*b.tasks), initial_state(*b.system)}; }

CostepResult costep(const Binding& b, const CoState& cs, std::uint32_t leaf) {
  CostepResult r;
  r.state.task = task::execute_task(*b.tasks, cs.task, leaf);
  r.state.system = cs.system;
  const auto& f = b.tasks->flat[leaf];
  if (b.input_event[leaf]) {
    auto s = step(*b.system, cs.system, *b.input_event[leaf]);
    if (!s.accepted) {
      r.divergence = DivergenceReport{DivergenceKind::task_allowed_system_disabled, r.state.task.trace,
                                      f.id + " -> " + b.system->events[*b.input_event[leaf]]};
      return r;
    }
    r.state.system = std::move(s.state);
  } else if (b.observation[leaf]) {
    if (!std::get<bool>(eval_expr(*b.observation[leaf], cs.system)))
      r.divergence = DivergenceReport{DivergenceKind::output_mismatch, r.state.task.trace,
                                      f.id + " <- " + to_source(*b.observation[leaf])};
  }
  return r;
}

CostepResult costep(const Binding& b, const CoState& cs, std::string_view leaf) {
  auto i = b.tasks->find(leaf);
  if (!i) throw task::UnknownTask("unknown task '" + std::string(leaf) + "'");
  return costep(b, cs, *i);
}

std::size_t TestReport::failures() const {
  return static_cast<std::size_t>(std::count_if(cases.begin(), cases.end(), [](const TestCase& c) { return !c.passed; }));
}

TestReport run_tests(const Binding& b, const std::vector<std::vector<std::string>>& scenarios) {
  TestReport rep;
  rep.suite = b.name;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    TestCase tc;
    tc.name = "scenario_" + std::to_string(i + 1);
    tc.scenario = scenarios[i];
    CoState cs = initial_costate(b);
    for (const auto& leaf : scenarios[i]) {
      try {
        auto r = costep(b, cs, leaf);
        cs = std::move(r.state);
        if (r.divergence) {
          tc.passed = false;
          tc.divergence = std::move(r.divergence);
          break;
        }
      } catch (const Error& e) {
        tc.passed = false;
        tc.note = e.what();
        break;
      }
    }
    tc.final_state = std::move(cs);
    rep.cases.push_back(std::move(tc));
  }
  return rep;
}

namespace {

std::string state_key(const CoState& cs) {
  std::string k;
  for (const auto& cfg : cs.task.configs) {
    for (const auto& n : cfg) {
      k += n.started ? 'S' : 's';
      k += std::to_string(n.aux);
      k += ',';
    }
    k += '|';
  }
  for (const auto& p : cs.task.produced) k += p + ';';
  k += '#' + std::to_string(cs.system.mode);
  for (const auto& v : cs.system.valuation) k += '\x1f' + format_value(v);
  return k;
}

}  // namespace

DivergenceSearch find_divergences(const Binding& b, std::size_t max_length, std::size_t scenario_cap,
                                  std::size_t state_cap) {
  DivergenceSearch out;
  const auto scen = task::enumerate_scenarios(*b.tasks, max_length, scenario_cap);
  out.scenarios = scen.scenarios.size();
  out.scenarios_complete = scen.complete;
  for (const auto& tc : run_tests(b, scen.scenarios).cases)
    if (tc.divergence && std::find(out.divergences.begin(), out.divergences.end(), *tc.divergence) == out.divergences.end())
      out.divergences.push_back(*tc.divergence);

  // Direction 2 over the co-reachable states.
  const StatechartModel& sys = *b.system;
  std::vector<std::optional<std::vector<std::string>>> system_first(sys.events.size());
  std::vector<bool> task_enabled(sys.events.size(), false);
  std::deque<CoState> queue{initial_costate(b)};
  std::unordered_set<std::string> seen{state_key(queue.front())};
  while (!queue.empty()) {
    CoState cs = std::move(queue.front());
    queue.pop_front();
    for (auto e : b.system_inputs)
      if (!system_first[e] && step(sys, cs.system, e).accepted) system_first[e] = cs.task.trace;
    const auto leaves = task::enabled_leaves(*b.tasks, cs.task);
    for (auto l : leaves)
      if (b.input_event[l]) task_enabled[*b.input_event[l]] = true;
    if (cs.task.trace.size() >= max_length) continue;
    for (auto l : leaves) {
      auto r = costep(b, cs, l);
      if (r.divergence) continue;
      if (!seen.insert(state_key(r.state)).second) continue;
      if (seen.size() > state_cap)
        throw ResourceLimit("co-execution exceeded " + std::to_string(state_cap) + " co-reachable states");
      queue.push_back(std::move(r.state));
    }
  }
  out.co_states = seen.size();
  for (auto e : b.system_inputs)
    if (system_first[e] && !task_enabled[e])
      out.divergences.push_back(
          DivergenceReport{DivergenceKind::system_allowed_task_forbidden, *system_first[e], sys.events[e]});
  return out;
}

std::string describe(const DivergenceReport& d) {
  std::string s = std::string(to_string(d.kind)) + ": " + d.detail + " after [";
  for (std::size_t i = 0; i < d.trace.size(); ++i) s += (i ? ", " : "") + d.trace[i];
  return s + "]";
}

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string to_junit(const TestReport& r, const std::vector<DivergenceReport>& extra) {
  std::size_t failures = r.failures() + extra.size();
  std::string x = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  x += "<testsuites>\n";
  x += "  <testsuite name=\"" + xml_escape(r.suite) + "\" tests=\"" + std::to_string(r.cases.size() + extra.size()) +
       "\" failures=\"" + std::to_string(failures) + "\" errors=\"0\">\n";
  for (const auto& c : r.cases) {
    std::string trace;
    for (std::size_t i = 0; i < c.scenario.size(); ++i) trace += (i ? " " : "") + c.scenario[i];
    x += "    <testcase classname=\"" + xml_escape(r.suite) + "\" name=\"" + xml_escape(c.name) + "\"";
    if (c.passed) {
      x += ">\n      <system-out>" + xml_escape(trace) + "</system-out>\n    </testcase>\n";
      continue;
    }
    const std::string msg = c.divergence ? describe(*c.divergence) : c.note;
    const std::string type = c.divergence ? to_string(c.divergence->kind) : "TaskNotEnabled";
    x += ">\n      <failure message=\"" + xml_escape(msg) + "\" type=\"" + type + "\">" + xml_escape(trace) +
         "</failure>\n    </testcase>\n";
  }
  for (std::size_t i = 0; i < extra.size(); ++i) {
    x += "    <testcase classname=\"" + xml_escape(r.suite) + "\" name=\"sweep_" + xml_escape(extra[i].detail) +
         "\">\n      <failure message=\"" + xml_escape(describe(extra[i])) + "\" type=\"" + to_string(extra[i].kind) +
         "\"/>\n    </testcase>\n";
  }
  x += "  </testsuite>\n</testsuites>\n";
  return x;
}

}  // namespace hmiv::coexec
