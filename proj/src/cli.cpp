#include "hmiv/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "hmiv/dsl.hpp"
#include "hmiv/export.hpp"
#include "hmiv/server.hpp"

namespace hmiv::cli {

namespace {

using json::Json;

std::optional<Document> load(const std::string& path, std::ostream& err) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    err << "hmiv: cannot read '" << path << "'\n";
    return std::nullopt;
  }
  std::ostringstream ss;
  ss << f.rdbuf();
  auto r = dsl::parse_document(ss.str());
  for (const auto& d : r.diagnostics) err << format_diagnostic(d, path) << "\n";
  if (!r.ok()) return std::nullopt;
  return std::move(r.document);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string join(const std::vector<std::string>& xs, const char* sep = ", ") {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + xs[i];
  return s;
}

void print_indented(std::ostream& out, const std::string& text, const char* indent) {
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out << indent << line << "\n";
}

// ---- check ----

struct CheckFlags {
  std::string file;
  std::string property;
  std::size_t depth = 25;
  std::uint64_t budget = 0;
  bool no_sampling = false;
  bool exact = false;
  bool json = false;
};

struct Tally {
  std::size_t holds = 0;
  std::size_t violated = 0;
  std::size_t unknown = 0;

  void add(check::Status s) {
    switch (s) {
      case check::Status::holds: ++holds; break;
      case check::Status::violated: ++violated; break;
      case check::Status::unknown: ++unknown; break;
    }
  }
  int exit_code() const { return violated ? kViolated : unknown ? kUnknown : kOk; }
};

std::string verdict_text(const check::Verdict& v) {
  std::ostringstream o;
  o << check::to_string(v.status) << " (";
  switch (v.method) {
    case check::VerdictMethod::inductive_exhaustive: o << "inductive_exhaustive, " << v.evaluated << " valuations"; break;
    case check::VerdictMethod::inductive_sampled:
      o << "sampled, coverage " << std::setprecision(4) << v.coverage << ", " << v.evaluated << " samples";
      break;
    case check::VerdictMethod::bounded_reachability:
      o << "bounded_reachability, depth " << v.depth << ", " << v.evaluated << " states";
      break;
  }
  o << ")";
  if (!v.note.empty()) o << "; " << v.note;
  return o.str();
}

template <class F>
check::Verdict guarded(check::VerdictMethod method, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    check::Verdict v;
    v.status = check::Status::unknown;
    v.method = method;
    v.note = e.what();
    return v;
  }
}

int cmd_check(const CheckFlags& fl, std::ostream& out, std::ostream& err) {
  auto doc = load(fl.file, err);
  if (!doc) return kInputError;
  if (!fl.property.empty() && !doc->property(fl.property)) {
    err << "hmiv: no property named '" << fl.property << "'\n";
    return kInputError;
  }

  check::DomainBudget budget;
  budget.allow_sampling = !fl.no_sampling;
  check::ReachOptions reach;
  reach.max_depth = fl.depth;
  reach.exact = fl.exact;
  if (fl.budget) {
    budget.exhaustive_limit = fl.budget;
    reach.max_states = fl.budget;
  }

  Tally tally;
  Json report;
  report["file"] = fl.file;

  if (fl.property.empty()) {
    Json obs = Json::array();
    for (const auto& m : doc->statecharts) {
      const auto list = check::guard_obligations(m);
      if (!fl.json) out << "statechart " << m.name << ": " << list.size() << " guard obligations\n";
      for (const auto& ob : list) {
        auto v = guarded(check::VerdictMethod::inductive_exhaustive,
                         [&] { return check::check_obligation(m, ob, budget); });
        tally.add(v.status);
        Json j = json::obligation(ob);
        j["statechart"] = m.name;
        j["verdict"] = json::verdict(m, v);
        if (!fl.json) out << "  " << check::to_string(ob.kind) << " " << ob.location << ": " << verdict_text(v) << "\n";
        if (v.status == check::Status::violated && v.counterexample) {
          const bool ok = check::confirm_obligation_witness(m, ob, v);
          j["replay_confirmed"] = ok;
          if (!fl.json) {
            out << "    formula: " << ob.formula << "\n";
            print_indented(out, check::describe_counterexample(m, *v.counterexample), "    ");
            out << "    replay: " << (ok ? "confirmed" : "NOT confirmed") << "\n";
          }
        }
        obs.push_back(std::move(j));
      }
    }
    report["obligations"] = std::move(obs);
  }

  Json props = Json::array();
  for (const auto& p : doc->properties) {
    if (!fl.property.empty() && p.name != fl.property) continue;
    const StatechartModel* m = doc->statechart(p.system);
    if (!m) {
      err << "hmiv: property '" << p.name << "' names no statechart\n";
      return kInputError;
    }
    const auto method = p.effective_method();
    std::vector<std::pair<const char*, check::Verdict>> verdicts;
    if (method != check::Method::reachable)
      verdicts.emplace_back("inductive", guarded(check::VerdictMethod::inductive_exhaustive,
                                                 [&] { return check::check_template(*m, p, budget); }));
    if (method != check::Method::inductive)
      verdicts.emplace_back("reachable", guarded(check::VerdictMethod::bounded_reachability,
                                                 [&] { return check::check_reachable(*m, p, reach); }));
    Json pj;
    pj["name"] = p.name;
    pj["system"] = p.system;
    pj["method"] = check::to_string(method);
    Json vs = Json::array();
    for (auto& [label, v] : verdicts) {
      tally.add(v.status);
      Json vj = json::verdict(*m, v);
      if (!fl.json) out << "property " << p.name << " [" << label << "]: " << verdict_text(v) << "\n";
      if (v.status == check::Status::violated && v.counterexample) {
        const bool ok = check::confirm_counterexample(*m, p, v);
        vj["replay_confirmed"] = ok;
        if (!fl.json) {
          out << "  counterexample:\n";
          print_indented(out, check::describe_counterexample(*m, *v.counterexample), "    ");
          out << "  replay: " << (ok ? "confirmed" : "NOT confirmed") << "\n";
        }
      }
      vs.push_back(std::move(vj));
    }
    pj["verdicts"] = std::move(vs);
    props.push_back(std::move(pj));
  }
  report["properties"] = std::move(props);

  if (fl.property.empty()) {
    Json nets = Json::array();
    for (const auto& n : doc->nets) {
      check::Status st = check::Status::holds;
      Json nj;
      try {
        const auto a = petri::analyze(n);
        if (!a.deadlocks.empty())
          st = check::Status::violated;
        else if (a.truncated)
          st = check::Status::unknown;
        nj = json::analysis(n, a);
        if (!fl.json) {
          out << "net " << n.name << ": " << (a.deadlocks.empty() ? "no deadlocks" : "deadlocks found")
              << (a.truncated ? " (state space truncated)" : "") << ", "
              << (a.reinitializable ? "reinitializable" : "not reinitializable") << "\n";
          for (const auto& y : a.p_invariants) out << "  invariant " << petri::format_invariant(n, y) << "\n";
          for (const auto& d : a.deadlocks) out << "  deadlock " << petri::format_marking(n, d) << "\n";
        }
      } catch (const Error& e) {
        st = check::Status::unknown;
        nj["net"] = n.name;
        nj["error"] = e.what();
        if (!fl.json) out << "net " << n.name << ": unknown; " << e.what() << "\n";
      }
      nj["status"] = check::to_string(st);
      tally.add(st);
      nets.push_back(std::move(nj));
    }
    report["nets"] = std::move(nets);
  }

  report["summary"] = Json{{"holds", tally.holds}, {"violated", tally.violated}, {"unknown", tally.unknown}};
  report["exit_code"] = tally.exit_code();
  if (fl.json)
    out << report.dump(2) << "\n";
  else
    out << "summary: " << tally.holds << " hold, " << tally.violated << " violated, " << tally.unknown << " unknown\n";
  return tally.exit_code();
}

// ---- simulate ----

struct ScriptLine {
  bool is_tick = false;
  std::string event;
  std::int64_t ms = 0;
};

// One script line: the first tab-separated column is an event name or
// `tick N`. Blank lines and `#` comments yield nothing.
std::optional<ScriptLine> parse_script_line(const std::string& raw, const StatechartModel& m, std::string& error) {
  std::string line = trim(raw);
  if (line.empty() || line[0] == '#') return std::nullopt;
  line = trim(line.substr(0, line.find('\t')));
  ScriptLine sl;
  if (line.rfind("tick", 0) == 0 && (line.size() == 4 || line[4] == ' ')) {
    const std::string n = trim(line.substr(4));
    try {
      std::size_t used = 0;
      sl.ms = std::stoll(n, &used);
      if (used != n.size() || sl.ms < 0) throw std::invalid_argument(n);
    } catch (const std::exception&) {
      error = "bad tick duration '" + n + "'";
      return std::nullopt;
    }
    sl.is_tick = true;
    return sl;
  }
  if (!m.event_index(line)) {
    error = "unknown event '" + line + "'";
    return std::nullopt;
  }
  sl.event = line;
  return sl;
}

struct Simulator {
  const StatechartModel& m;
  SystemState s;
  bool json;
  std::ostream& out;
  Json steps = Json::array();

  std::string status_line(const char* tag) const {
    return std::string("# ") + tag + "\t" + m.modes[s.mode] + "\t" + json::display_text(m, s);
  }

  std::string variables_line() const {
    std::string line = "# variables\t";
    for (std::size_t i = 0; i < m.variables.size(); ++i)
      line += (i ? " " : "") + m.variables[i].name + "=" + format_value(s.valuation[i], &m.modes);
    return line;
  }

  void apply(const ScriptLine& sl) {
    if (sl.is_tick) {
      auto r = tick(m, s, sl.ms);
      s = std::move(r.state);
      std::vector<std::string> fired;
      for (std::size_t i = 0; i < r.fired.size(); ++i)
        fired.push_back(r.fired[i] + ":" + (r.accepted[i] ? "accepted" : "ignored"));
      const std::string label = "tick " + std::to_string(sl.ms);
      if (json) {
        steps.push_back(Json{{"input", label}, {"fired", fired}, {"state", json::state(m, s)}});
      } else {
        out << label << "\t" << (fired.empty() ? "-" : join(fired, ",")) << "\t" << m.modes[s.mode] << "\t"
            << json::display_text(m, s) << "\n";
      }
      return;
    }
    auto r = step(m, s, sl.event);
    s = std::move(r.state);
    if (json) {
      steps.push_back(Json{{"input", sl.event}, {"accepted", r.accepted}, {"state", json::state(m, s)}});
    } else {
      out << sl.event << "\t" << (r.accepted ? "accepted" : "ignored") << "\t" << m.modes[s.mode] << "\t"
          << json::display_text(m, s) << "\n";
    }
  }
};

struct SimulateFlags {
  std::string file;
  std::string script;
  bool interactive = false;
  std::string statechart;
  bool json = false;
};

int cmd_simulate(const SimulateFlags& fl, std::ostream& out, std::ostream& err, std::istream& in) {
  auto doc = load(fl.file, err);
  if (!doc) return kInputError;
  const StatechartModel* m = fl.statechart.empty() ? (doc->statecharts.empty() ? nullptr : &doc->statecharts.front())
                                                   : doc->statechart(fl.statechart);
  if (!m) {
    err << "hmiv: " << (fl.statechart.empty() ? "document has no statechart" : "no statechart named '" + fl.statechart + "'")
        << "\n";
    return kInputError;
  }

  Simulator sim{*m, initial_state(*m), fl.json, out};
  const Json initial = json::state(*m, sim.s);

  if (!fl.interactive) {
    std::vector<ScriptLine> script;
    if (!fl.script.empty()) {
      std::ifstream f(fl.script);
      if (!f) {
        err << "hmiv: cannot read script '" << fl.script << "'\n";
        return kInputError;
      }
      std::string line, error;
      for (int no = 1; std::getline(f, line); ++no) {
        auto sl = parse_script_line(line, *m, error);
        if (!error.empty()) {
          err << fl.script << ":" << no << ": " << error << "\n";
          return kInputError;
        }
        if (sl) script.push_back(std::move(*sl));
      }
    }
    if (!fl.json) out << sim.status_line("initial") << "\n";
    try {
      for (const auto& sl : script) sim.apply(sl);
    } catch (const Error& e) {
      err << "hmiv: " << e.what() << "\n";
      return kInputError;
    }
  } else {
    if (!fl.json) out << sim.status_line("initial") << "\n" << std::flush;
    std::string line;
    while (std::getline(in, line)) {
      const std::string cmd = trim(line);
      if (cmd == "quit" || cmd == "exit") break;
      if (cmd == "?" || cmd == "enabled") {
        if (!fl.json) out << "# enabled\t" << join(enabled_events(*m, sim.s), " ") << "\n" << std::flush;
        continue;
      }
      std::string error;
      auto sl = parse_script_line(line, *m, error);
      if (!error.empty()) {
        err << "hmiv: " << error << "\n";
        continue;
      }
      if (!sl) continue;
      try {
        sim.apply(*sl);
      } catch (const Error& e) {
        err << "hmiv: " << e.what() << "\n";
      }
      out << std::flush;
    }
  }

  if (fl.json) {
    out << Json{{"initial", initial}, {"steps", sim.steps}, {"final", json::state(*m, sim.s)}}.dump(2) << "\n";
  } else {
    out << sim.status_line("final") << "\n" << sim.variables_line() << "\n";
  }
  return kOk;
}

// ---- coexec ----

struct CoexecFlags {
  std::string file;
  std::size_t depth = 20;
  std::string junit;
  std::string correspondence;
  bool json = false;
};

int cmd_coexec(const CoexecFlags& fl, std::ostream& out, std::ostream& err) {
  auto doc = load(fl.file, err);
  if (!doc) return kInputError;
  std::vector<const Correspondence*> corrs;
  for (const auto& c : doc->correspondences)
    if (fl.correspondence.empty() || c.name == fl.correspondence) corrs.push_back(&c);
  if (corrs.empty()) {
    err << "hmiv: " << (fl.correspondence.empty() ? "document has no correspondence" : "no correspondence named '" + fl.correspondence + "'")
        << "\n";
    return kInputError;
  }

  std::size_t total = 0;
  Json report = Json::array();
  std::string junit;
  for (const Correspondence* c : corrs) {
    const task::TaskModel* tm = doc->taskmodel(c->task_model);
    const StatechartModel* m = doc->statechart(c->system);
    if (!tm || !m) {
      err << "hmiv: correspondence '" << c->name << "': " << (tm ? "co-execution needs a statechart system" : "missing task model")
          << "\n";
      return kInputError;
    }
    try {
      const coexec::Binding b = coexec::bind(*c, *tm, *m);
      for (const auto& w : b.warnings) err << "warning: " << w << "\n";
      const auto search = coexec::find_divergences(b, fl.depth);
      total += search.divergences.size();

      std::vector<std::string> scope;
      for (auto e : b.system_inputs) scope.push_back(m->events[e]);
      if (!fl.json) {
        out << "correspondence " << c->name << " (task model " << tm->name << ", system " << m->name << ")\n";
        out << "system-side sweep over bound input events: " << join(scope) << "\n";
        out << "scenarios: " << search.scenarios << (search.scenarios_complete ? "" : " (cut at depth)") << "\n";
        out << "co-states explored: " << search.co_states << "\n";
        for (const auto& d : search.divergences) out << "  " << coexec::describe(d) << "\n";
      } else {
        Json ds = Json::array();
        for (const auto& d : search.divergences) ds.push_back(json::divergence(d));
        report.push_back(Json{{"correspondence", c->name},
                              {"task_model", tm->name},
                              {"system", m->name},
                              {"sweep_events", scope},
                              {"scenarios", search.scenarios},
                              {"scenarios_complete", search.scenarios_complete},
                              {"co_states", search.co_states},
                              {"divergences", std::move(ds)}});
      }

      if (!fl.junit.empty()) {
        const auto scen = task::enumerate_scenarios(*tm, fl.depth);
        auto tr = coexec::run_tests(b, scen.scenarios);
        std::vector<coexec::DivergenceReport> extra;
        for (const auto& d : search.divergences)
          if (d.kind == coexec::DivergenceKind::system_allowed_task_forbidden) extra.push_back(d);
        junit += coexec::to_junit(tr, extra);
      }
    } catch (const ResourceLimit& e) {
      err << "hmiv: " << e.what() << "\n";
      return kUnknown;
    } catch (const Error& e) {
      err << "hmiv: correspondence '" << c->name << "': " << e.what() << "\n";
      return kInputError;
    }
  }

  if (!fl.junit.empty()) {
    std::ofstream f(fl.junit, std::ios::binary);
    if (!f || !(f << junit)) {
      err << "hmiv: cannot write '" << fl.junit << "'\n";
      return kInputError;
    }
  }
  if (fl.json)
    out << Json{{"correspondences", report}, {"divergences", total}}.dump(2) << "\n";
  else
    out << total << " divergences\n";
  return total ? kViolated : kOk;
}

// ---- workload ----

struct WorkloadFlags {
  std::string file;
  std::string scope;
  std::string taskmodel;
  bool json = false;
};

int cmd_workload(const WorkloadFlags& fl, std::ostream& out, std::ostream& err) {
  auto doc = load(fl.file, err);
  if (!doc) return kInputError;
  const task::TaskModel* tm = fl.taskmodel.empty() ? (doc->taskmodels.empty() ? nullptr : &doc->taskmodels.front())
                                                   : doc->taskmodel(fl.taskmodel);
  if (!tm || !tm->root) {
    err << "hmiv: " << (fl.taskmodel.empty() ? "document has no task model" : "no task model named '" + fl.taskmodel + "'")
        << "\n";
    return kInputError;
  }
  const std::string scope = fl.scope.empty() ? tm->root->id : fl.scope;
  task::WorkloadMetrics w;
  try {
    w = task::workload_metrics(*tm, scope);
  } catch (const Error& e) {
    err << "hmiv: " << e.what() << "\n";
    return kInputError;
  }
  if (fl.json) {
    Json j = json::workload(w);
    j["task_model"] = tm->name;
    out << j.dump(2) << "\n";
    return kOk;
  }
  out << "task model " << tm->name << ", scope " << w.scope << "\n";
  for (std::size_t k = 0; k < task::kTaskKindCount; ++k)
    out << "  " << std::left << std::setw(20) << task::to_string(static_cast<task::TaskKind>(k)) << w.counts[k] << "\n";
  out << "leaves: " << w.leaves << "\n";
  out << "cognitive tasks: " << w.cognitive << "\n";
  out << "information items to remember: " << w.information_items_to_remember;
  if (!w.remembered.empty()) out << " (" << join(w.remembered) << ")";
  out << "\n";
  return kOk;
}

// ---- petri ----

struct PetriFlags {
  std::string file;
  std::string net;
  std::size_t max_states = petri::kDefaultMaxStates;
  bool json = false;
};

int cmd_petri(const PetriFlags& fl, std::ostream& out, std::ostream& err) {
  auto doc = load(fl.file, err);
  if (!doc) return kInputError;
  std::vector<const petri::PetriNet*> nets;
  for (const auto& n : doc->nets)
    if (fl.net.empty() || n.name == fl.net) nets.push_back(&n);
  if (nets.empty()) {
    err << "hmiv: " << (fl.net.empty() ? "document has no petri net" : "no petri net named '" + fl.net + "'") << "\n";
    return kInputError;
  }
  Json all = Json::array();
  for (const auto* n : nets) {
    petri::AnalysisReport a;
    try {
      a = petri::analyze(*n, fl.max_states);
    } catch (const Error& e) {
      err << "hmiv: net '" << n->name << "': " << e.what() << "\n";
      return kUnknown;
    }
    if (fl.json) {
      all.push_back(json::analysis(*n, a));
      continue;
    }
    out << "net " << n->name << "\n";
    out << "p-invariants:\n";
    for (const auto& y : a.p_invariants) out << "  " << petri::format_invariant(*n, y) << "\n";
    if (a.p_invariants.empty()) out << "  (none)\n";
    out << "explored markings: " << a.explored << (a.truncated ? " (truncated)" : "") << "\n";
    if (a.deadlocks.empty()) {
      out << "deadlocks: none\n";
    } else {
      out << "deadlocks:\n";
      for (const auto& d : a.deadlocks) out << "  " << petri::format_marking(*n, d) << "\n";
    }
    out << "place bounds:\n";
    for (std::size_t p = 0; p < n->places.size(); ++p)
      out << "  " << n->places[p] << " "
          << (a.bound_per_place[p] ? std::to_string(*a.bound_per_place[p]) : std::string("unbounded within horizon")) << "\n";
    out << "event availability:\n";
    for (const auto& [e, av] : a.event_availability) out << "  " << e << " " << petri::to_string(av) << "\n";
    out << "reinitializable: " << (a.reinitializable ? "yes" : "no") << (a.reinitializable_sound ? "" : " (within horizon)")
        << "\n";
    for (const auto& [x, y] : a.mutual_exclusions) out << "mutually exclusive: " << x << ", " << y << "\n";
    for (const auto& w : a.nondeterminism)
      out << "nondeterminism: " << w.event << " at " << petri::format_marking(*n, w.marking) << " enables "
          << join(w.transitions) << "\n";
  }
  if (fl.json) out << Json{{"nets", all}}.dump(2) << "\n";
  return kOk;
}

// ---- serve ----

struct ServeFlags {
  std::string address = "127.0.0.1";
  unsigned short port = 8080;
  std::string root = ".";
  double idle_minutes = 30;
  std::int64_t tick_ms = 100;
  int threads = 1;
  bool frozen_time = false;
};

int cmd_serve(const ServeFlags& fl, std::ostream& out, std::ostream& err) {
  service::ServerOptions o;
  o.address = fl.address;
  o.port = fl.port;
  o.root = fl.root;
  o.threads = fl.threads;
  o.handle_signals = true;
  o.session.idle_timeout = std::chrono::milliseconds(static_cast<std::int64_t>(fl.idle_minutes * 60000));
  o.session.tick_ms = fl.tick_ms;
  o.session.frozen_time = fl.frozen_time;
  try {
    service::Server server(o);
    out << "serving " << fl.root << " on http://" << fl.address << ":" << server.port()
        << (fl.frozen_time ? " (frozen time)" : "") << "\n"
        << std::flush;
    server.run();
  } catch (const service::BindError& e) {
    err << "hmiv: " << e.what() << "\n";
    return kBindError;
  }
  return kOk;
}

// ---- export-json ----

int cmd_export(const std::string& file, const std::string& output, bool compact, std::ostream& out, std::ostream& err) {
  auto doc = load(file, err);
  if (!doc) return kInputError;
  const std::string text = json::document(*doc).dump(compact ? -1 : 2) + "\n";
  if (output.empty() || output == "-") {
    out << text;
    return kOk;
  }
  std::ofstream f(output, std::ios::binary);
  if (!f || !(f << text)) {
    err << "hmiv: cannot write '" << output << "'\n";
    return kInputError;
  }
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in) {
  CLI::App app{"Formal HMI models: check, simulate, co-execute, analyze, serve", "hmiv"};
  app.require_subcommand(1);

  CheckFlags check_fl;
  auto* check = app.add_subcommand("check", "Discharge guard obligations, check properties, analyze nets");
  check->add_option("file", check_fl.file, "Model file (.hmi)")->required();
  check->add_option("--property", check_fl.property, "Check only this property");
  check->add_option("--depth", check_fl.depth, "Reachability depth bound")->capture_default_str();
  check->add_option("--budget", check_fl.budget, "Exhaustive-enumeration limit and reachability state cap");
  check->add_flag("--no-sampling", check_fl.no_sampling, "Report unknown instead of sampling large domains");
  check->add_flag("--exact", check_fl.exact, "Exact reachability keys (no quantization)");
  check->add_flag("--json", check_fl.json, "Structured report");

  SimulateFlags sim_fl;
  auto* sim = app.add_subcommand("simulate", "Replay events through a statechart");
  sim->add_option("file", sim_fl.file, "Model file (.hmi)")->required();
  auto* script_opt = sim->add_option("--script", sim_fl.script, "Script: one event or `tick N` per line");
  sim->add_flag("--interactive", sim_fl.interactive, "Read events from standard input")->excludes(script_opt);
  sim->add_option("--statechart", sim_fl.statechart, "Statechart to simulate (default: the first)");
  sim->add_flag("--json", sim_fl.json, "Structured transcript");

  CoexecFlags co_fl;
  auto* co = app.add_subcommand("coexec", "Co-execute task models with the system model");
  co->add_option("file", co_fl.file, "Model file (.hmi)")->required();
  co->add_option("--depth", co_fl.depth, "Maximum scenario length")->capture_default_str();
  co->add_option("--junit", co_fl.junit, "Write an XML test report");
  co->add_option("--correspondence", co_fl.correspondence, "Only this correspondence");
  co->add_flag("--json", co_fl.json, "Structured report");

  WorkloadFlags wl_fl;
  auto* wl = app.add_subcommand("workload", "Workload metrics of a task subtree");
  wl->add_option("file", wl_fl.file, "Model file (.hmi)")->required();
  wl->add_option("--scope", wl_fl.scope, "Task id (default: the root)");
  wl->add_option("--taskmodel", wl_fl.taskmodel, "Task model (default: the first)");
  wl->add_flag("--json", wl_fl.json, "Structured report");

  PetriFlags pn_fl;
  auto* pn = app.add_subcommand("petri", "Analyze petri nets");
  pn->add_option("file", pn_fl.file, "Model file (.hmi)")->required();
  pn->add_option("--net", pn_fl.net, "Only this net");
  pn->add_option("--max-states", pn_fl.max_states, "Reachability graph cap")->capture_default_str();
  pn->add_flag("--json", pn_fl.json, "Structured report");

  ServeFlags sv_fl;
  auto* sv = app.add_subcommand("serve", "HTTP/WebSocket session service");
  sv->add_option("--port", sv_fl.port, "TCP port (0: any free port)")->capture_default_str();
  sv->add_option("--address", sv_fl.address, "Listen address")->capture_default_str();
  sv->add_option("--root", sv_fl.root, "Static files and model paths")->capture_default_str();
  sv->add_option("--idle", sv_fl.idle_minutes, "Session idle timeout in minutes")->capture_default_str();
  sv->add_option("--tick", sv_fl.tick_ms, "Timer quantum in ms")->capture_default_str()->check(CLI::PositiveNumber);
  sv->add_option("--threads", sv_fl.threads, "I/O threads")->capture_default_str()->check(CLI::PositiveNumber);
  sv->add_flag("--frozen-time", sv_fl.frozen_time, "Disable timers");

  std::string ex_file, ex_out;
  bool ex_compact = false;
  auto* ex = app.add_subcommand("export-json", "Print the document as JSON");
  ex->add_option("file", ex_file, "Model file (.hmi)")->required();
  ex->add_option("-o,--output", ex_out, "Output file (default: stdout)");
  ex->add_flag("--compact", ex_compact, "Single line");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  if (check->parsed()) return cmd_check(check_fl, out, err);
  if (sim->parsed()) return cmd_simulate(sim_fl, out, err, in);
  if (co->parsed()) return cmd_coexec(co_fl, out, err);
  if (wl->parsed()) return cmd_workload(wl_fl, out, err);
  if (pn->parsed()) return cmd_petri(pn_fl, out, err);
  if (sv->parsed()) return cmd_serve(sv_fl, out, err);
  if (ex->parsed()) return cmd_export(ex_file, ex_out, ex_compact, out, err);
  return kInputError;
}

}  // namespace hmiv::cli
