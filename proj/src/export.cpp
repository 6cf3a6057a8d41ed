#include "hmiv/export.hpp"

#include "hmiv/fcu.hpp"

namespace hmiv::json {

namespace {

Json type_json(const Type& t) {
  Json j;
  j["kind"] = to_string(t.kind);
  switch (t.kind) {
    case TypeKind::enumeration: j["literals"] = t.literals; break;
    case TypeKind::decimal:
      if (t.range) {
        j["lo"] = t.range->lo.to_string();
        j["hi"] = t.range->hi.to_string();
      }
      break;
    case TypeKind::string:
      j["max_length"] = t.max_length;
      j["alphabet"] = t.alphabet;
      break;
    default: break;
  }
  return j;
}

Json opt_expr(const std::optional<Expr>& e) { return e ? Json(to_source(*e)) : Json(nullptr); }

Json exprs(const std::vector<Expr>& es) {
  Json a = Json::array();
  for (const auto& e : es) a.push_back(to_source(e));
  return a;
}

Json statechart(const StatechartModel& m) {
  Json j;
  j["name"] = m.name;
  j["modes"] = m.modes;
  j["initial"] = m.initial_mode;
  Json vars = Json::array();
  for (const auto& v : m.variables)
    vars.push_back(Json{{"name", v.name}, {"type", type_json(v.type)}, {"initial", plain_value(v.initial)}});
  j["variables"] = std::move(vars);
  j["events"] = m.resolved ? m.events : m.declared_events;
  Json timers = Json::array();
  for (const auto& t : m.timers)
    timers.push_back(Json{{"name", t.name}, {"duration_ms", t.duration_ms}, {"event", t.event}, {"modes", t.modes}});
  j["timers"] = std::move(timers);
  Json responses = Json::array();
  for (const auto& r : m.responses) responses.push_back(Json{{"mode", r.mode}, {"events", r.events}});
  j["responses"] = std::move(responses);
  Json ts = Json::array();
  for (const auto& t : m.transitions) {
    Json acts = Json::array();
    for (const auto& a : t.actions) acts.push_back(Json{{"target", a.target}, {"value", to_source(a.value)}});
    ts.push_back(Json{{"id", t.id},
                      {"source", t.source},
                      {"target", t.target},
                      {"event", t.event},
                      {"guard", opt_expr(t.guard)},
                      {"actions", std::move(acts)}});
  }
  j["transitions"] = std::move(ts);
  return j;
}

Json arcs(const petri::Weighted& w) {
  Json j = Json::object();
  for (const auto& [p, n] : w) j[p] = n;
  return j;
}

Json net(const petri::PetriNet& n) {
  Json j;
  j["name"] = n.name;
  Json places = Json::array();
  for (std::size_t i = 0; i < n.places.size(); ++i)
    places.push_back(Json{{"name", n.places[i]}, {"initial", i < n.initial.size() ? n.initial[i] : 0}});
  j["places"] = std::move(places);
  Json ts = Json::array();
  for (const auto& t : n.transitions)
    ts.push_back(Json{{"id", t.id},
                      {"inputs", arcs(t.inputs)},
                      {"outputs", arcs(t.outputs)},
                      {"event", t.event ? Json(*t.event) : Json(nullptr)}});
  j["transitions"] = std::move(ts);
  return j;
}

Json task_node(const task::TaskNode& n) {
  Json j;
  j["id"] = n.id;
  j["label"] = n.label;
  j["kind"] = task::to_string(n.kind);
  j["operator"] = n.op == task::Operator::none ? Json(nullptr) : Json(task::to_string(n.op));
  j["produces"] = n.produces;
  j["consumes"] = n.consumes;
  Json cs = Json::array();
  for (const auto& c : n.children) cs.push_back(task_node(c));
  j["children"] = std::move(cs);
  return j;
}

Json taskmodel(const task::TaskModel& tm) {
  Json j;
  j["name"] = tm.name;
  Json items = Json::array();
  for (const auto& it : tm.items) items.push_back(Json{{"id", it.id}, {"label", it.label}});
  j["information_items"] = std::move(items);
  j["root"] = tm.root ? task_node(*tm.root) : Json(nullptr);
  return j;
}

Json correspondence(const Correspondence& c) {
  Json j;
  j["name"] = c.name;
  j["task_model"] = c.task_model;
  j["system"] = c.system;
  Json in = Json::array();
  for (const auto& b : c.inputs) in.push_back(Json{{"task", b.task}, {"event", b.event}});
  j["inputs"] = std::move(in);
  Json out = Json::array();
  for (const auto& b : c.outputs) out.push_back(Json{{"task", b.task}, {"observation", to_source(b.observation)}});
  j["outputs"] = std::move(out);
  j["system_inputs"] = c.system_inputs ? Json(*c.system_inputs) : Json(nullptr);
  return j;
}

Json property(const check::PropertySpec& p) {
  Json j;
  j["name"] = p.name;
  j["system"] = p.system;
  j["kind"] = p.is_template() ? "template" : "always";
  if (p.is_template()) {
    Json acts = Json::array();
    for (const auto& a : p.actions) acts.push_back(Json{{"event", a.event}, {"mode", a.mode ? Json(*a.mode) : Json(nullptr)}});
    j["actions"] = std::move(acts);
    j["guard"] = opt_expr(p.guard);
    j["pre"] = exprs(p.filter_pre);
    j["post"] = exprs(p.filter_post);
    j["relation"] = check::to_string(p.relation);
    j["custom"] = opt_expr(p.custom);
  } else {
    j["always"] = to_source(*p.always);
  }
  j["method"] = check::to_string(p.effective_method());
  return j;
}

}  // namespace

Json document(const Document& doc) {
  Json j;
  j["statecharts"] = Json::array();
  for (const auto& m : doc.statecharts) j["statecharts"].push_back(statechart(m));
  j["nets"] = Json::array();
  for (const auto& n : doc.nets) j["nets"].push_back(net(n));
  j["taskmodels"] = Json::array();
  for (const auto& t : doc.taskmodels) j["taskmodels"].push_back(taskmodel(t));
  j["correspondences"] = Json::array();
  for (const auto& c : doc.correspondences) j["correspondences"].push_back(correspondence(c));
  j["properties"] = Json::array();
  for (const auto& p : doc.properties) j["properties"].push_back(property(p));
  return j;
}

std::string display_text(const StatechartModel& m, const SystemState& s) {
  const std::string& mode = m.modes.at(s.mode);
  auto dv = m.variable_index("display");
  auto uv = m.variable_index("units");
  auto is_mode = [&](const char* n) { return m.mode_index(n).has_value(); };
  if (!dv || !uv || !is_mode("STD") || !is_mode("QNH") || !is_mode("EDIT_PRESSURE")) return mode;
  const auto* d = std::get_if<Decimal>(&s.valuation[*dv]);
  const auto* u = std::get_if<EnumLiteral>(&s.valuation[*uv]);
  if (!d || !u) return mode;
  auto units = fcu::parse_units(u->name);
  if (!units) return mode;
  if (mode != "STD" && mode != "QNH" && mode != "EDIT_PRESSURE") return mode;
  const fcu::DisplayMode dm = mode == "STD"   ? fcu::DisplayMode::STD
                              : mode == "QNH" ? fcu::DisplayMode::QNH
                                              : fcu::DisplayMode::EDIT_PRESSURE;
  fcu::EntryBuffer buf;
  if (auto bv = m.variable_index("buffer"))
    if (const auto* str = std::get_if<std::string>(&s.valuation[*bv])) buf.digits = *str;
  return fcu::render_display(fcu::PressureValue{*d, *units}, dm, &buf);
}

Json state(const StatechartModel& m, const SystemState& s) {
  Json j;
  j["mode"] = m.modes.at(s.mode);
  Json vars = Json::object();
  for (std::size_t i = 0; i < m.variables.size(); ++i) vars[m.variables[i].name] = plain_value(s.valuation[i], &m.modes);
  j["variables"] = std::move(vars);
  j["display"] = display_text(m, s);
  j["enabled"] = enabled_events(m, s);
  return j;
}

Json diagnostic(const Diagnostic& d) {
  return Json{{"severity", d.severity == Severity::error ? "error" : "warning"},
              {"code", d.code},
              {"message", d.message},
              {"line", d.span.begin.line},
              {"column", d.span.begin.column},
              {"end_line", d.span.end.line},
              {"end_column", d.span.end.column}};
}

Json obligation(const check::Obligation& ob) {
  return Json{{"kind", check::to_string(ob.kind)}, {"location", ob.location}, {"formula", ob.formula}};
}

Json verdict(const StatechartModel& m, const check::Verdict& v) {
  Json j;
  j["status"] = check::to_string(v.status);
  j["method"] = check::to_string(v.method);
  j["evaluated"] = v.evaluated;
  if (v.method == check::VerdictMethod::inductive_sampled) j["coverage"] = v.coverage;
  if (v.method == check::VerdictMethod::bounded_reachability) j["depth"] = v.depth;
  if (!v.note.empty()) j["note"] = v.note;
  if (v.counterexample) {
    const auto& c = *v.counterexample;
    Json cj;
    if (c.trace) cj["trace"] = *c.trace;
    cj["state"] = state(m, c.pre);
    if (c.event) cj["event"] = m.events[*c.event];
    if (c.transition) cj["transition"] = *c.transition;
    if (c.post) cj["post"] = state(m, *c.post);
    cj["detail"] = c.detail;
    j["counterexample"] = std::move(cj);
  }
  return j;
}

Json analysis(const petri::PetriNet& n, const petri::AnalysisReport& r) {
  Json j;
  j["net"] = n.name;
  Json inv = Json::array();
  for (const auto& y : r.p_invariants) inv.push_back(Json{{"vector", y}, {"text", petri::format_invariant(n, y)}});
  j["p_invariants"] = std::move(inv);
  Json dead = Json::array();
  for (const auto& mk : r.deadlocks) dead.push_back(petri::format_marking(n, mk));
  j["deadlocks"] = std::move(dead);
  Json bounds = Json::object();
  for (std::size_t p = 0; p < n.places.size(); ++p)
    bounds[n.places[p]] = r.bound_per_place[p] ? Json(*r.bound_per_place[p]) : Json("unbounded within horizon");
  j["bound_per_place"] = std::move(bounds);
  Json avail = Json::object();
  for (const auto& [e, a] : r.event_availability) avail[e] = petri::to_string(a);
  j["event_availability"] = std::move(avail);
  j["reinitializable"] = r.reinitializable;
  j["reinitializable_sound"] = r.reinitializable_sound;
  Json mx = Json::array();
  for (const auto& [a, b] : r.mutual_exclusions) mx.push_back(Json::array({a, b}));
  j["mutual_exclusions"] = std::move(mx);
  Json nd = Json::array();
  for (const auto& w : r.nondeterminism)
    nd.push_back(Json{{"event", w.event}, {"transitions", w.transitions}, {"marking", petri::format_marking(n, w.marking)}});
  j["nondeterminism"] = std::move(nd);
  j["explored"] = r.explored;
  j["truncated"] = r.truncated;
  return j;
}

Json workload(const task::WorkloadMetrics& w) {
  Json j;
  j["scope"] = w.scope;
  Json counts = Json::object();
  for (std::size_t k = 0; k < task::kTaskKindCount; ++k) counts[task::to_string(static_cast<task::TaskKind>(k))] = w.counts[k];
  j["counts"] = std::move(counts);
  j["leaves"] = w.leaves;
  j["cognitive"] = w.cognitive;
  j["information_items_to_remember"] = w.information_items_to_remember;
  j["remembered"] = w.remembered;
  return j;
}

Json divergence(const coexec::DivergenceReport& d) {
  return Json{{"kind", coexec::to_string(d.kind)}, {"trace", d.trace}, {"detail", d.detail}};
}

}  // namespace hmiv::json
