#include "hmiv/dsl.hpp"

namespace hmiv::dsl {

namespace {

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + xs[i];
  return out;
}

std::string braces(const std::vector<std::string>& xs) { return xs.empty() ? "{ }" : "{ " + join(xs) + " }"; }

std::string type_text(const Type& t) {
  switch (t.kind) {
    case TypeKind::boolean: return "bool";
    case TypeKind::enumeration: return "enum " + braces(t.literals);
    case TypeKind::decimal:
      if (!t.range) return "decimal";
      return "decimal [" + t.range->lo.to_string() + ", " + t.range->hi.to_string() + "]";
    case TypeKind::string: return "string(" + std::to_string(t.max_length) + ", " + format_value(Value{t.alphabet}) + ")";
    case TypeKind::mode: return "mode";
  }
  return "?";
}

void write_statechart(const StatechartModel& m, std::string& out) {
  out += "statechart " + m.name + " {\n";
  out += "  modes " + braces(m.modes) + ";\n";
  if (!m.initial_mode.empty()) out += "  initial " + m.initial_mode + ";\n";
  for (const auto& v : m.variables)
    out += "  var " + v.name + " : " + type_text(v.type) + " = " + format_value(v.initial) + ";\n";
  if (!m.declared_events.empty()) out += "  events " + braces(m.declared_events) + ";\n";
  for (const auto& t : m.timers)
    out += "  timer " + t.name + " " + std::to_string(t.duration_ms) + " -> " + t.event + " in " + braces(t.modes) + ";\n";
  for (const auto& r : m.responses) out += "  respond " + r.mode + " on " + braces(r.events) + ";\n";
  for (const auto& t : m.transitions) {
    out += "  transition " + t.id + " : " + t.source + " -> " + t.target + " on " + t.event;
    if (t.guard) out += "\n      when " + to_source(*t.guard);
    if (!t.actions.empty()) {
      out += "\n      do {";
      for (const auto& a : t.actions) out += " " + a.target + " := " + to_source(a.value) + ";";
      out += " }";
    }
    out += ";\n";
  }
  out += "}\n";
}

std::string arcs_text(const petri::Weighted& arcs) {
  std::string out;
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    out += (i ? ", " : "") + arcs[i].first;
    if (arcs[i].second != 1) out += "*" + std::to_string(arcs[i].second);
  }
  return out;
}

void write_net(const petri::PetriNet& n, std::string& out) {
  out += "petrinet " + n.name + " {\n";
  out += "  places {";
  for (std::size_t i = 0; i < n.places.size(); ++i)
    out += (i ? ", " : " ") + n.places[i] + " = " + std::to_string(i < n.initial.size() ? n.initial[i] : 0);
  out += n.places.empty() ? "};\n" : " };\n";
  for (const auto& t : n.transitions) {
    out += "  transition " + t.id + " :";
    if (!t.inputs.empty()) out += " " + arcs_text(t.inputs);
    out += " ->";
    if (!t.outputs.empty()) out += " " + arcs_text(t.outputs);
    if (t.event) out += " on " + *t.event;
    out += ";\n";
  }
  out += "}\n";
}

void write_task(const task::TaskNode& n, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  out += pad + "task " + n.id + " : " + task::to_string(n.kind);
  if (!n.label.empty()) out += " " + format_value(Value{n.label});
  if (!n.produces.empty()) out += " produces " + braces(n.produces);
  if (!n.consumes.empty()) out += " consumes " + braces(n.consumes);
  if (n.children.empty() && n.op == task::Operator::none) {
    out += ";\n";
    return;
  }
  out += std::string(" ") + task::to_string(n.op) + " {\n";
  for (const auto& c : n.children) write_task(c, indent + 2, out);
  out += pad + "}\n";
}

void write_taskmodel(const task::TaskModel& tm, std::string& out) {
  out += "taskmodel " + tm.name + " {\n";
  for (const auto& it : tm.items) {
    out += "  info " + it.id;
    if (!it.label.empty()) out += " " + format_value(Value{it.label});
    out += ";\n";
  }
  if (tm.root) write_task(*tm.root, 2, out);
  out += "}\n";
}

void write_correspondence(const Correspondence& c, std::string& out) {
  out += "correspondence " + c.name + " {\n";
  out += "  tasks " + c.task_model + ";\n";
  out += "  system " + c.system + ";\n";
  for (const auto& b : c.inputs) out += "  input " + b.task + " -> " + b.event + ";\n";
  for (const auto& b : c.outputs) out += "  output " + b.task + " <- " + to_source(b.observation) + ";\n";
  if (c.system_inputs) out += "  inputs " + braces(*c.system_inputs) + ";\n";
  out += "}\n";
}

std::string tuple_text(const std::vector<Expr>& es) {
  std::string out = "(";
  for (std::size_t i = 0; i < es.size(); ++i) out += (i ? ", " : "") + to_source(es[i]);
  return out + ")";
}

void write_property(const check::PropertySpec& p, std::string& out) {
  out += "property " + p.name + " on " + p.system + " {\n";
  if (p.always) {
    out += "  always " + to_source(*p.always) + ";\n";
  } else {
    out += "  actions {";
    for (std::size_t i = 0; i < p.actions.size(); ++i) {
      out += (i ? ", " : " ") + p.actions[i].event;
      if (p.actions[i].mode) out += " in " + *p.actions[i].mode;
    }
    out += p.actions.empty() ? "};\n" : " };\n";
    if (p.guard) out += "  guard " + to_source(*p.guard) + ";\n";
    out += "  pre " + tuple_text(p.filter_pre) + ";\n";
    out += "  post " + tuple_text(p.filter_post) + ";\n";
    if (p.relation == check::Relation::custom && p.custom)
      out += "  relation " + to_source(*p.custom) + ";\n";
    else
      out += std::string("  relation ") + (p.relation == check::Relation::not_equal ? "not_equal" : "equal") + ";\n";
  }
  if (p.method) out += std::string("  method ") + check::to_string(*p.method) + ";\n";
  out += "}\n";
}

}  // namespace

std::string serialize_document(const Document& doc) {
  std::string out;
  auto section = [&](auto&& write, const auto& items) {
    for (const auto& x : items) {
      if (!out.empty()) out += "\n";
      write(x, out);
    }
  };
  section(write_statechart, doc.statecharts);
  section(write_net, doc.nets);
  section(write_taskmodel, doc.taskmodels);
  section(write_correspondence, doc.correspondences);
  section(write_property, doc.properties);
  return out;
}

}  // namespace hmiv::dsl
