#include "hmiv/taskmodel.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace hmiv::task {

namespace {

constexpr std::array<const char*, kTaskKindCount> kKindNames{
    "abstract", "interactive_input", "interactive_output", "cognitive_analysis",
    "cognitive_decision", "perception", "motor", "system",
};

constexpr std::array<const char*, 7> kOperatorNames{
    "none", "enable", "choice", "order_independent", "concurrent", "optional_child", "iterate_child",
};

}  // namespace

const char* to_string(TaskKind k) { return kKindNames[static_cast<std::size_t>(k)]; }

std::optional<TaskKind> parse_task_kind(std::string_view s) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i)
    if (s == kKindNames[i]) return static_cast<TaskKind>(i);
  return std::nullopt;
}

const char* to_string(Operator op) { return kOperatorNames[static_cast<std::size_t>(op)]; }

std::optional<Operator> parse_operator(std::string_view s) {
  for (std::size_t i = 1; i < kOperatorNames.size(); ++i)
    if (s == kOperatorNames[i]) return static_cast<Operator>(i);
  return std::nullopt;
}

bool is_unary(Operator op) { return op == Operator::optional_child || op == Operator::iterate_child; }

const char* to_string(TaskStatus s) {
  switch (s) {
    case TaskStatus::pending: return "pending";
    case TaskStatus::active: return "active";
    case TaskStatus::done: return "done";
    case TaskStatus::skipped: return "skipped";
  }
  return "?";
}

std::optional<std::uint32_t> TaskModel::find(std::string_view id) const {
  for (std::size_t i = 0; i < flat.size(); ++i)
    if (flat[i].id == id) return static_cast<std::uint32_t>(i);
  return std::nullopt;
}

namespace {

const TaskNode* find_node(const TaskNode& n, std::string_view id) {
  if (n.id == id) return &n;
  for (const auto& c : n.children)
    if (auto* r = find_node(c, id)) return r;
  return nullptr;
}

}  // namespace

const TaskNode* TaskModel::node(std::string_view id) const { return root ? find_node(*root, id) : nullptr; }

// ---------------------------------------------------------------------------
// Validation and flattening

namespace {

struct Flattener {
  std::vector<FlatTask>& out;

  std::uint32_t add(const TaskNode& n, std::int32_t parent, std::uint32_t position) {
    const auto self = static_cast<std::uint32_t>(out.size());
    FlatTask f;
    f.id = n.id;
    f.kind = n.kind;
    f.op = n.op;
    f.parent = parent;
    f.position = position;
    f.produces = n.produces;
    f.consumes = n.consumes;
    out.push_back(std::move(f));
    std::vector<std::uint32_t> kids;
    for (std::size_t i = 0; i < n.children.size(); ++i)
      kids.push_back(add(n.children[i], static_cast<std::int32_t>(self), static_cast<std::uint32_t>(i)));
    FlatTask& me = out[self];
    me.children = std::move(kids);
    me.end = static_cast<std::uint32_t>(out.size());
    auto nullable = [&](std::uint32_t c) { return out[c].nullable; };
    switch (me.op) {
      case Operator::none: me.nullable = false; break;
      case Operator::enable:
      case Operator::order_independent:
      case Operator::concurrent:
        me.nullable = std::all_of(me.children.begin(), me.children.end(), nullable);
        break;
      case Operator::choice:
        me.nullable = std::any_of(me.children.begin(), me.children.end(), nullable);
        break;
      case Operator::optional_child:
      case Operator::iterate_child: me.nullable = true; break;
    }
    return self;
  }
};

void check_node(const TaskNode& n, const std::set<std::string>& items, std::set<std::string>& ids,
                std::vector<Diagnostic>& diags) {
  if (!ids.insert(n.id).second) diags.push_back(make_error(diag::duplicate_name, "duplicate task '" + n.id + "'", n.span));
  if (n.children.empty()) {
    if (n.kind == TaskKind::abstract)
      diags.push_back(make_error(diag::structure, "leaf task '" + n.id + "' must not be abstract", n.span));
    if (n.op != Operator::none)
      diags.push_back(make_error(diag::structure, "task '" + n.id + "' has an operator but no children", n.span));
  } else {
    if (n.op == Operator::none)
      diags.push_back(make_error(diag::structure, "task '" + n.id + "' has children but no operator", n.span));
    if (is_unary(n.op) && n.children.size() != 1)
      diags.push_back(make_error(diag::structure,
                                 std::string("operator '") + to_string(n.op) + "' of task '" + n.id +
                                     "' takes exactly one child",
                                 n.span));
  }
  for (const auto* list : {&n.produces, &n.consumes})
    for (const auto& item : *list)
      if (!items.count(item))
        diags.push_back(make_error(diag::unresolved, "unresolved information item '" + item + "' in task '" + n.id + "'",
                                   n.span));
  for (const auto& c : n.children) check_node(c, items, ids, diags);
}

}  // namespace

std::vector<Diagnostic> resolve_taskmodel(TaskModel& tm) {
  std::vector<Diagnostic> diags;
  tm.resolved = false;
  tm.flat.clear();
  std::set<std::string> items;
  for (const auto& it : tm.items)
    if (!items.insert(it.id).second)
      diags.push_back(make_error(diag::duplicate_name, "duplicate information item '" + it.id + "'", it.span));
  if (!tm.root) {
    diags.push_back(make_error(diag::structure, "task model '" + tm.name + "' has no root task", tm.span));
    return diags;
  }
  std::set<std::string> ids;
  check_node(*tm.root, items, ids, diags);
  if (has_errors(diags)) return diags;
  Flattener{tm.flat}.add(*tm.root, -1, 0);
  tm.resolved = true;
  return diags;
}

// ---------------------------------------------------------------------------
// Execution

namespace {

class Engine {
 public:
  explicit Engine(const TaskModel& tm) : t_(tm.flat) {
    if (!tm.resolved) throw UnknownTask("task model '" + tm.name + "' has not been resolved");
  }

  bool completable(const Configuration& cfg, std::uint32_t n) const {
    const NodeState& st = cfg[n];
    const FlatTask& f = t_[n];
    if (!st.started) return f.nullable;
    switch (f.op) {
      case Operator::none: return true;
      case Operator::enable: {
        const auto cur = static_cast<std::size_t>(st.aux);
        if (!completable(cfg, f.children[cur])) return false;
        for (std::size_t j = cur + 1; j < f.children.size(); ++j)
          if (!t_[f.children[j]].nullable) return false;
        return true;
      }
      case Operator::choice: return completable(cfg, f.children[static_cast<std::size_t>(st.aux)]);
      case Operator::order_independent:
        for (std::size_t k = 0; k < f.children.size(); ++k) {
          const auto c = f.children[k];
          const bool finished = cfg[c].started && static_cast<std::int32_t>(k) != st.aux;
          if (!finished && !completable(cfg, c)) return false;
        }
        return true;
      case Operator::concurrent:
        return std::all_of(f.children.begin(), f.children.end(), [&](auto c) { return completable(cfg, c); });
      case Operator::optional_child:
      case Operator::iterate_child: return completable(cfg, f.children[0]);
    }
    return false;
  }

  void enabled(const Configuration& cfg, std::uint32_t n, std::vector<std::uint32_t>& out) const {
    const NodeState& st = cfg[n];
    const FlatTask& f = t_[n];
    switch (f.op) {
      case Operator::none:
        if (!st.started) out.push_back(n);
        return;
      case Operator::enable:
        for (std::size_t j = st.started ? static_cast<std::size_t>(st.aux) : 0; j < f.children.size(); ++j) {
          enabled(cfg, f.children[j], out);
          if (!completable(cfg, f.children[j])) break;
        }
        return;
      case Operator::choice:
        if (st.started)
          enabled(cfg, f.children[static_cast<std::size_t>(st.aux)], out);
        else
          for (auto c : f.children) enabled(cfg, c, out);
        return;
      case Operator::order_independent: {
        if (!st.started) {
          for (auto c : f.children) enabled(cfg, c, out);
          return;
        }
        const auto active = f.children[static_cast<std::size_t>(st.aux)];
        enabled(cfg, active, out);
        if (completable(cfg, active))
          for (auto c : f.children)
            if (!cfg[c].started) enabled(cfg, c, out);
        return;
      }
      case Operator::concurrent:
        for (auto c : f.children) enabled(cfg, c, out);
        return;
      case Operator::optional_child: enabled(cfg, f.children[0], out); return;
      case Operator::iterate_child: {
        const auto c = f.children[0];
        enabled(cfg, c, out);
        if (cfg[c].started && completable(cfg, c)) fresh_enabled(c, out);
        return;
      }
    }
  }

  std::vector<std::uint32_t> enabled_set(const Configuration& cfg, std::uint32_t n) const {
    std::vector<std::uint32_t> out;
    enabled(cfg, n, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  bool is_enabled(const Configuration& cfg, std::uint32_t n, std::uint32_t leaf) const {
    const auto s = enabled_set(cfg, n);
    return std::binary_search(s.begin(), s.end(), leaf);
  }

  // Applies `leaf` below node n, appending every resulting configuration.
  void execute(Configuration cfg, std::uint32_t n, std::uint32_t leaf, std::vector<Configuration>& out) const {
    const FlatTask& f = t_[n];
    const bool was_started = cfg[n].started;
    cfg[n].started = true;
    if (n == leaf) {
      out.push_back(std::move(cfg));
      return;
    }
    const std::uint32_t c = child_towards(n, leaf);
    const auto k = static_cast<std::int32_t>(t_[c].position);
    switch (f.op) {
      case Operator::enable:
      case Operator::choice:
      case Operator::order_independent:
        cfg[n].aux = k;
        break;
      case Operator::iterate_child:
        if (was_started && cfg[c].started) {
          if (completable(cfg, c) && fresh_contains(c, leaf)) {
            Configuration restart = cfg;
            reset(restart, c);
            execute(std::move(restart), c, leaf, out);
          }
          if (!is_enabled(cfg, c, leaf)) return;
        }
        break;
      default:
        break;
    }
    execute(std::move(cfg), c, leaf, out);
  }

  Configuration fresh() const { return Configuration(t_.size()); }

  const std::vector<FlatTask>& tasks() const { return t_; }

 private:
  std::uint32_t child_towards(std::uint32_t n, std::uint32_t leaf) const {
    for (auto c : t_[n].children)
      if (c <= leaf && leaf < t_[c].end) return c;
    return n;
  }

  void reset(Configuration& cfg, std::uint32_t n) const {
    std::fill(cfg.begin() + n, cfg.begin() + t_[n].end, NodeState{});
  }

  void fresh_enabled(std::uint32_t n, std::vector<std::uint32_t>& out) const {
    Configuration cfg = fresh();
    enabled(cfg, n, out);
  }

  bool fresh_contains(std::uint32_t n, std::uint32_t leaf) const {
    std::vector<std::uint32_t> out;
    fresh_enabled(n, out);
    return std::find(out.begin(), out.end(), leaf) != out.end();
  }

  const std::vector<FlatTask>& t_;
};

}  // namespace

TaskExecState initial_exec_state(const TaskModel& tm) {
  Engine eng(tm);
  TaskExecState es;
  es.configs.push_back(eng.fresh());
  return es;
}

std::vector<std::uint32_t> enabled_leaves(const TaskModel& tm, const TaskExecState& es) {
  Engine eng(tm);
  std::vector<std::uint32_t> out;
  for (const auto& cfg : es.configs) eng.enabled(cfg, 0, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::string> enabled_tasks(const TaskModel& tm, const TaskExecState& es) {
  std::vector<std::string> out;
  for (auto i : enabled_leaves(tm, es)) out.push_back(tm.flat[i].id);
  return out;
}

TaskExecState execute_task(const TaskModel& tm, const TaskExecState& es, std::uint32_t leaf) {
  Engine eng(tm);
  if (leaf >= tm.flat.size()) throw UnknownTask("unknown task index");
  const FlatTask& f = tm.flat[leaf];
  if (f.op != Operator::none) throw TaskNotEnabled("task '" + f.id + "' is not a leaf");
  TaskExecState r;
  for (const auto& cfg : es.configs)
    if (eng.is_enabled(cfg, 0, leaf)) eng.execute(cfg, 0, leaf, r.configs);
  if (r.configs.empty()) throw TaskNotEnabled("task '" + f.id + "' is not enabled");
  std::sort(r.configs.begin(), r.configs.end());
  r.configs.erase(std::unique(r.configs.begin(), r.configs.end()), r.configs.end());
  r.trace = es.trace;
  r.trace.push_back(f.id);
  r.produced = es.produced;
  r.produced.insert(f.produces.begin(), f.produces.end());
  return r;
}

TaskExecState execute_task(const TaskModel& tm, const TaskExecState& es, std::string_view id) {
  auto i = tm.find(id);
  if (!i) throw UnknownTask("unknown task '" + std::string(id) + "'");
  return execute_task(tm, es, *i);
}

bool completable(const TaskModel& tm, const TaskExecState& es) {
  Engine eng(tm);
  return std::any_of(es.configs.begin(), es.configs.end(), [&](const auto& cfg) { return eng.completable(cfg, 0); });
}

TaskStatus status(const TaskModel& tm, const TaskExecState& es, std::string_view id) {
  Engine eng(tm);
  auto idx = tm.find(id);
  if (!idx) throw UnknownTask("unknown task '" + std::string(id) + "'");
  const Configuration& cfg = es.configs.front();
  const auto& t = tm.flat;

  auto finished = [&](std::uint32_t n) {
    return cfg[n].started && eng.completable(cfg, n) && eng.enabled_set(cfg, n).empty();
  };
  // Whether an ancestor has moved past node n.
  bool passed = false;
  for (std::uint32_t n = *idx; t[n].parent >= 0 && !passed; n = static_cast<std::uint32_t>(t[n].parent)) {
    const auto p = static_cast<std::uint32_t>(t[n].parent);
    const auto pos = static_cast<std::int32_t>(t[n].position);
    if (cfg[p].started) {
      switch (t[p].op) {
        case Operator::enable: passed = cfg[p].aux > pos; break;
        case Operator::choice: passed = cfg[p].aux != pos; break;
        case Operator::order_independent: passed = cfg[n].started && cfg[p].aux != pos; break;
        default: break;
      }
    }
    if (!passed && finished(p)) passed = true;
  }
  const NodeState& st = cfg[*idx];
  if (st.started) return passed || finished(*idx) ? TaskStatus::done : TaskStatus::active;
  return passed ? TaskStatus::skipped : TaskStatus::pending;
}

// ---------------------------------------------------------------------------
// Scenarios

namespace {

struct ScenarioSearch {
  const TaskModel& tm;
  std::size_t max_length;
  std::size_t cap;
  ScenarioSet result;

  void run(const TaskExecState& es) {
    if (completable(tm, es)) {
      if (result.scenarios.size() >= cap)
        throw ResourceLimit("scenario enumeration exceeded " + std::to_string(cap) + " scenarios");
      result.scenarios.push_back(es.trace);
    }
    const auto next = enabled_leaves(tm, es);
    if (next.empty()) return;
    if (es.trace.size() >= max_length) {
      result.complete = false;
      return;
    }
    for (auto leaf : next) run(execute_task(tm, es, leaf));
  }
};

}  // namespace

ScenarioSet enumerate_scenarios(const TaskModel& tm, std::size_t max_length, std::size_t cap) {
  ScenarioSearch s{tm, max_length, cap, {}};
  s.run(initial_exec_state(tm));
  return std::move(s.result);
}

// ---------------------------------------------------------------------------
// Workload

WorkloadMetrics workload_metrics(const TaskModel& tm, std::string_view scope) {
  auto s = tm.find(scope);
  if (!s) throw UnknownTask("unknown task '" + std::string(scope) + "'");
  WorkloadMetrics m;
  m.scope = std::string(scope);
  const auto& t = tm.flat;
  const auto end = t[*s].end;
  for (auto i = *s; i < end; ++i) {
    if (t[i].op != Operator::none) continue;
    ++m.counts[static_cast<std::size_t>(t[i].kind)];
    ++m.leaves;
  }
  m.cognitive = m.count(TaskKind::cognitive_analysis) + m.count(TaskKind::cognitive_decision);
  std::set<std::string> remembered;
  for (auto i = *s; i < end; ++i) {
    const auto k = t[i].kind;
    if (k != TaskKind::perception && k != TaskKind::cognitive_analysis && k != TaskKind::cognitive_decision) continue;
    for (const auto& item : t[i].produces) {
      for (auto j = i + 1; j < end; ++j) {
        const auto& c = t[j].consumes;
        if (std::find(c.begin(), c.end(), item) != c.end()) {
          remembered.insert(item);
          break;
        }
      }
    }
  }
  m.remembered.assign(remembered.begin(), remembered.end());
  m.information_items_to_remember = m.remembered.size();
  return m;
}

}  // namespace hmiv::task
