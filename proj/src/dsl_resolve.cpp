#include <map>
#include <set>

#include "hmiv/dsl.hpp"

namespace hmiv {

namespace {

template <class T>
const T* by_name(const std::vector<T>& xs, std::string_view name) {
  for (const auto& x : xs)
    if (x.name == name) return &x;
  return nullptr;
}

}  // namespace

const StatechartModel* Document::statechart(std::string_view n) const { return by_name(statecharts, n); }
const petri::PetriNet* Document::net(std::string_view n) const { return by_name(nets, n); }
const task::TaskModel* Document::taskmodel(std::string_view n) const { return by_name(taskmodels, n); }
const Correspondence* Document::correspondence(std::string_view n) const { return by_name(correspondences, n); }
const check::PropertySpec* Document::property(std::string_view n) const { return by_name(properties, n); }

namespace dsl {

namespace {

template <class T>
void unique_names(const std::vector<T>& xs, const char* what, std::vector<Diagnostic>& diags) {
  std::set<std::string> seen;
  for (const auto& x : xs)
    if (!seen.insert(x.name).second)
      diags.push_back(make_error(diag::duplicate_name, std::string("duplicate ") + what + " '" + x.name + "'", x.span));
}

void append(std::vector<Diagnostic>& to, std::vector<Diagnostic> from) {
  to.insert(to.end(), std::make_move_iterator(from.begin()), std::make_move_iterator(from.end()));
}

void check_correspondence(Correspondence& c, const Document& doc, std::vector<Diagnostic>& diags) {
  auto err = [&](const char* code, std::string msg, Span span) { diags.push_back(make_error(code, std::move(msg), span)); };
  const task::TaskModel* tm = doc.taskmodel(c.task_model);
  if (!tm) err(diag::unresolved, "unresolved task model '" + c.task_model + "' in correspondence '" + c.name + "'", c.span);
  const StatechartModel* sc = doc.statechart(c.system);
  const petri::PetriNet* net = doc.net(c.system);
  if (!sc && !net) err(diag::unresolved, "unresolved system '" + c.system + "' in correspondence '" + c.name + "'", c.span);

  auto has_event = [&](const std::string& e) {
    if (sc) return sc->resolved ? sc->event_index(e).has_value() : true;
    if (net) {
      for (const auto& t : net->transitions)
        if (t.event == e) return true;
      return false;
    }
    return true;
  };

  std::set<std::string> bound;
  auto task_of = [&](const std::string& id, task::TaskKind want, Span span, const char* what) {
    if (!tm || !tm->root) return;
    const task::TaskNode* n = tm->node(id);
    if (!n) {
      err(diag::unresolved, "unresolved task '" + id + "' in correspondence '" + c.name + "'", span);
      return;
    }
    if (!n->children.empty() || n->kind != want)
      err(diag::type_error,
          "task '" + id + "' is " + task::to_string(n->kind) + ", " + what + " bindings need " + task::to_string(want) +
              " leaves",
          span);
    if (!bound.insert(id).second) err(diag::duplicate_name, "task '" + id + "' is bound twice", span);
  };

  for (const auto& b : c.inputs) {
    task_of(b.task, task::TaskKind::interactive_input, b.span, "input");
    if (!has_event(b.event)) err(diag::unresolved, "unresolved event '" + b.event + "' in correspondence '" + c.name + "'", b.span);
  }
  for (auto& b : c.outputs) {
    task_of(b.task, task::TaskKind::interactive_output, b.span, "output");
    if (sc && sc->resolved) {
      auto t = resolve(b.observation, sc->scope(), diags);
      if (t && t->kind != TypeKind::boolean)
        err(diag::type_error, "observation bound to '" + b.task + "' is not boolean", b.observation.span);
    } else if (net) {
      err(diag::structure, "output bindings need a statechart system", b.span);
    }
  }
  if (c.system_inputs)
    for (const auto& e : *c.system_inputs)
      if (!has_event(e)) err(diag::unresolved, "unresolved event '" + e + "' in correspondence '" + c.name + "'", c.span);

  if (tm && tm->resolved) {
    for (const auto& f : tm->flat) {
      if (!f.children.empty() || bound.count(f.id)) continue;
      if (f.kind == task::TaskKind::interactive_input)
        err(diag::unbound_input, "interactive input task '" + f.id + "' has no binding in '" + c.name + "'", c.span);
      else if (f.kind == task::TaskKind::interactive_output)
        diags.push_back(Diagnostic{Severity::warning, diag::unbound_output,
                                   "interactive output task '" + f.id + "' has no binding in '" + c.name + "'", c.span});
    }
  }
}

}  // namespace

std::vector<Diagnostic> resolve_document(Document& doc) {
  std::vector<Diagnostic> diags;
  unique_names(doc.statecharts, "statechart", diags);
  unique_names(doc.nets, "petri net", diags);
  unique_names(doc.taskmodels, "task model", diags);
  unique_names(doc.correspondences, "correspondence", diags);
  unique_names(doc.properties, "property", diags);
  for (const auto& n : doc.nets)
    if (doc.statechart(n.name))
      diags.push_back(make_error(diag::duplicate_name, "'" + n.name + "' names both a statechart and a petri net", n.span));

  for (auto& m : doc.statecharts) append(diags, resolve_model(m));
  for (auto& n : doc.nets) append(diags, petri::resolve_net(n));
  for (auto& t : doc.taskmodels) append(diags, task::resolve_taskmodel(t));
  for (auto& p : doc.properties) {
    const StatechartModel* m = doc.statechart(p.system);
    if (!m) {
      diags.push_back(make_error(diag::unresolved, "unresolved statechart '" + p.system + "' in property '" + p.name + "'",
                                 p.span));
      continue;
    }
    if (m->resolved) append(diags, check::resolve_property(p, *m));
  }
  for (auto& c : doc.correspondences) check_correspondence(c, doc, diags);
  return diags;
}

std::vector<Diagnostic> validate_document(const Document& doc) {
  Document copy = doc;
  return resolve_document(copy);
}

}  // namespace dsl

std::string format_diagnostic(const Diagnostic& d, const std::string& file) {
  std::string out;
  if (!file.empty()) out += file + ":";
  out += std::to_string(d.span.begin.line) + ":" + std::to_string(d.span.begin.column) + ": ";
  out += d.severity == Severity::error ? "error" : "warning";
  out += ": " + d.message + " [" + d.code + "]";
  return out;
}

}  // namespace hmiv
