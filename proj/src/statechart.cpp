#include "hmiv/statechart.hpp"

#include <algorithm>
#include <set>

#include "hmiv/error.hpp"

namespace hmiv {

namespace {

template <class Range>
std::optional<std::uint32_t> index_of(const Range& r, std::string_view n) {
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] == n) return static_cast<std::uint32_t>(i);
  return std::nullopt;
}

}  // namespace

std::optional<std::uint32_t> StatechartModel::mode_index(std::string_view n) const { return index_of(modes, n); }

std::optional<std::uint32_t> StatechartModel::event_index(std::string_view n) const { return index_of(events, n); }

std::optional<std::uint32_t> StatechartModel::variable_index(std::string_view n) const {
  for (std::size_t i = 0; i < variables.size(); ++i)
    if (variables[i].name == n) return static_cast<std::uint32_t>(i);
  return std::nullopt;
}

std::optional<std::uint32_t> StatechartModel::transition_index(std::string_view id) const {
  for (std::size_t i = 0; i < transitions.size(); ++i)
    if (transitions[i].id == id) return static_cast<std::uint32_t>(i);
  return std::nullopt;
}

Scope StatechartModel::scope() const {
  Scope s;
  for (const auto& v : variables) {
    s.variables.push_back({v.name, &v.type});
    if (v.type.kind == TypeKind::enumeration)
      for (const auto& l : v.type.literals)
        if (std::find(s.enum_literals.begin(), s.enum_literals.end(), l) == s.enum_literals.end())
          s.enum_literals.push_back(l);
  }
  s.modes = modes;
  return s;
}

std::vector<Diagnostic> resolve_model(StatechartModel& m) {
  std::vector<Diagnostic> diags;
  auto err = [&](const char* code, std::string msg, Span span) { diags.push_back(make_error(code, std::move(msg), span)); };

  m.resolved = false;
  if (m.modes.empty()) err(diag::structure, "statechart '" + m.name + "' declares no modes", m.span);
  {
    std::set<std::string> seen;
    for (const auto& md : m.modes)
      if (!seen.insert(md).second) err(diag::duplicate_name, "duplicate mode '" + md + "'", m.span);
  }
  if (m.initial_mode.empty())
    err(diag::structure, "statechart '" + m.name + "' has no initial mode", m.span);
  else if (auto i = m.mode_index(m.initial_mode))
    m.initial_index = *i;
  else
    err(diag::unresolved, "unresolved mode '" + m.initial_mode + "' in initial declaration", m.initial_span);

  std::set<std::string> var_names;
  std::set<std::string> literals;
  for (const auto& v : m.variables) {
    if (!var_names.insert(v.name).second) err(diag::duplicate_name, "duplicate variable '" + v.name + "'", v.span);
    if (v.name == "mode") err(diag::duplicate_name, "'mode' is reserved", v.span);
    if (m.mode_index(v.name)) err(diag::duplicate_name, "variable '" + v.name + "' shadows a mode", v.span);
    const Type& t = v.type;
    switch (t.kind) {
      case TypeKind::enumeration: {
        if (t.literals.empty()) err(diag::invalid_value, "enum of '" + v.name + "' has no literals", v.span);
        std::set<std::string> lits(t.literals.begin(), t.literals.end());
        if (lits.size() != t.literals.size())
          err(diag::duplicate_name, "duplicate enum literal in '" + v.name + "'", v.span);
        for (const auto& l : t.literals) {
          literals.insert(l);
          if (m.mode_index(l)) err(diag::duplicate_name, "enum literal '" + l + "' shadows a mode", v.span);
        }
        break;
      }
      case TypeKind::decimal:
        if (t.range && t.range->lo > t.range->hi)
          err(diag::invalid_value, "empty range for '" + v.name + "'", v.span);
        break;
      case TypeKind::string:
        if (t.alphabet.empty()) err(diag::invalid_value, "empty alphabet for '" + v.name + "'", v.span);
        break;
      case TypeKind::boolean:
      case TypeKind::mode:
        break;
    }
    if (!in_domain(v.initial, t))
      err(diag::invalid_value, "initial value " + format_value(v.initial) + " of '" + v.name + "' is outside its type",
          v.span);
  }
  for (const auto& v : m.variables)
    if (literals.count(v.name)) err(diag::duplicate_name, "variable '" + v.name + "' shadows an enum literal", v.span);

  // Event table: declared, then transition events, then timer events.
  m.events.clear();
  auto add_event = [&](const std::string& e) {
    if (!m.event_index(e)) m.events.push_back(e);
  };
  for (const auto& e : m.declared_events) add_event(e);
  for (const auto& t : m.transitions) add_event(t.event);
  for (const auto& t : m.timers) add_event(t.event);

  const Scope scope = m.scope();
  std::set<std::string> ids;
  for (auto& t : m.transitions) {
    if (!ids.insert(t.id).second) err(diag::duplicate_name, "duplicate transition id '" + t.id + "'", t.span);
    if (auto i = m.mode_index(t.source))
      t.source_mode = *i;
    else
      err(diag::unresolved, "unresolved mode '" + t.source + "' in transition '" + t.id + "'", t.span);
    if (auto i = m.mode_index(t.target))
      t.target_mode = *i;
    else
      err(diag::unresolved, "unresolved mode '" + t.target + "' in transition '" + t.id + "'", t.span);
    t.event_index = *m.event_index(t.event);
    if (t.guard) {
      auto ty = resolve(*t.guard, scope, diags);
      if (ty && ty->kind != TypeKind::boolean)
        err(diag::type_error, "guard of '" + t.id + "' is not boolean", t.guard->span);
    }
    for (auto& a : t.actions) {
      auto slot = m.variable_index(a.target);
      if (!slot) {
        err(diag::unresolved, "assignment to undeclared variable '" + a.target + "'", a.span);
        resolve(a.value, scope, diags);
        continue;
      }
      a.slot = *slot;
      auto ty = resolve(a.value, scope, diags);
      const Type& vt = m.variables[*slot].type;
      if (ty && ty->kind != vt.kind) {
        err(diag::type_error,
            "cannot assign " + std::string(to_string(ty->kind)) + " to " + to_string(vt.kind) + " variable '" +
                a.target + "'",
            a.span);
      } else if (ty && vt.kind == TypeKind::enumeration) {
        if (ty->literals && *ty->literals != vt.literals)
          err(diag::type_error, "enum type mismatch in assignment to '" + a.target + "'", a.span);
        if (a.value.kind == ExprKind::name && a.value.ref == NameRef::enum_literal &&
            std::find(vt.literals.begin(), vt.literals.end(), a.value.name) == vt.literals.end())
          err(diag::type_error, "'" + a.value.name + "' is not a literal of '" + a.target + "'", a.span);
      }
    }
  }

  std::set<std::string> timer_names;
  for (auto& tm : m.timers) {
    if (!timer_names.insert(tm.name).second) err(diag::duplicate_name, "duplicate timer '" + tm.name + "'", tm.span);
    if (tm.duration_ms <= 0) err(diag::invalid_value, "timer '" + tm.name + "' needs a positive duration", tm.span);
    tm.event_index = *m.event_index(tm.event);
    tm.active_in.assign(m.modes.size(), false);
    for (const auto& md : tm.modes) {
      if (auto i = m.mode_index(md))
        tm.active_in[*i] = true;
      else
        err(diag::unresolved, "unresolved mode '" + md + "' in timer '" + tm.name + "'", tm.span);
    }
  }

  for (const auto& r : m.responses) {
    if (!m.mode_index(r.mode)) err(diag::unresolved, "unresolved mode '" + r.mode + "' in respond", r.span);
    for (const auto& e : r.events)
      if (!m.event_index(e)) err(diag::unresolved, "unresolved event '" + e + "' in respond", r.span);
  }

  if (has_errors(diags)) return diags;

  m.outgoing.assign(m.modes.size(), std::vector<std::vector<std::uint32_t>>(m.events.size()));
  for (std::size_t i = 0; i < m.transitions.size(); ++i) {
    const auto& t = m.transitions[i];
    m.outgoing[t.source_mode][t.event_index].push_back(static_cast<std::uint32_t>(i));
  }
  m.resolved = true;
  return diags;
}

std::size_t SystemStateHash::operator()(const SystemState& s) const {
  std::size_t h = s.mode * 0x9e3779b97f4a7c15ULL;
  for (const auto& v : s.valuation) h = (h ^ hash_value(v)) * 0x100000001b3ULL;
  for (auto t : s.timer_elapsed) h = (h ^ static_cast<std::size_t>(t)) * 0x100000001b3ULL;
  return h;
}

SystemState initial_state(const StatechartModel& m) {
  SystemState s;
  s.mode = m.initial_index;
  s.valuation.reserve(m.variables.size());
  for (const auto& v : m.variables) s.valuation.push_back(v.initial);
  s.timer_elapsed.assign(m.timers.size(), 0);
  return s;
}

Value eval_expr(const Expr& e, const SystemState& s) { return evaluate(e, EvalContext{s.valuation, s.mode, {}, {}}); }

std::vector<std::uint32_t> enabled_transition_indices(const StatechartModel& m, const SystemState& s) {
  std::vector<std::uint32_t> out;
  const EvalContext ctx{s.valuation, s.mode, {}, {}};
  for (std::size_t i = 0; i < m.transitions.size(); ++i) {
    const auto& t = m.transitions[i];
    if (t.source_mode != s.mode) continue;
    if (!t.guard || evaluate_bool(*t.guard, ctx)) out.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

std::vector<std::string> enabled_transitions(const StatechartModel& m, const SystemState& s) {
  std::vector<std::string> out;
  for (auto i : enabled_transition_indices(m, s)) out.push_back(m.transitions[i].id);
  return out;
}

std::vector<std::string> enabled_events(const StatechartModel& m, const SystemState& s) {
  std::vector<bool> on(m.events.size(), false);
  for (auto i : enabled_transition_indices(m, s)) on[m.transitions[i].event_index] = true;
  std::vector<std::string> out;
  for (std::size_t e = 0; e < m.events.size(); ++e)
    if (on[e]) out.push_back(m.events[e]);
  return out;
}

StepResult step(const StatechartModel& m, const SystemState& s, std::uint32_t event) {
  if (!m.resolved) throw TypeMismatch("model '" + m.name + "' has not been resolved");
  if (event >= m.events.size()) throw UnknownName("unknown event index");
  const EvalContext ctx{s.valuation, s.mode, {}, {}};
  std::optional<std::uint32_t> chosen;
  for (auto ti : m.outgoing[s.mode][event]) {
    const auto& t = m.transitions[ti];
    if (t.guard && !evaluate_bool(*t.guard, ctx)) continue;
    if (chosen) throw NondeterminismError(m.transitions[*chosen].id, t.id);
    chosen = ti;
  }
  if (!chosen) return StepResult{s, false, std::nullopt};

  const auto& t = m.transitions[*chosen];
  StepResult r{s, true, chosen};
  r.state.mode = t.target_mode;
  for (const auto& a : t.actions) {
    Value v = evaluate(a.value, ctx);
    if (!in_domain(v, m.variables[a.slot].type))
      throw DomainError("transition '" + t.id + "' assigns " + format_value(v) + " to '" + a.target +
                        "', outside its declared domain");
    r.state.valuation[a.slot] = std::move(v);
  }
  std::fill(r.state.timer_elapsed.begin(), r.state.timer_elapsed.end(), 0);
  return r;
}

StepResult step(const StatechartModel& m, const SystemState& s, std::string_view event) {
  auto e = m.event_index(event);
  if (!e) throw UnknownName("unknown event '" + std::string(event) + "' for statechart '" + m.name + "'");
  return step(m, s, *e);
}

TickResult tick(const StatechartModel& m, const SystemState& s, std::int64_t dt) {
  TickResult r{s, {}, {}};
  std::int64_t remaining = dt;
  while (remaining > 0) {
    SystemState& st = r.state;
    std::optional<std::int64_t> next;
    for (std::size_t i = 0; i < m.timers.size(); ++i) {
      const auto& tm = m.timers[i];
      if (!tm.active_in[st.mode] || st.timer_elapsed[i] >= tm.duration_ms) continue;
      const auto left = tm.duration_ms - st.timer_elapsed[i];
      if (!next || left < *next) next = left;
    }
    const std::int64_t advance = next ? std::min(*next, remaining) : remaining;
    std::vector<std::size_t> expired;
    for (std::size_t i = 0; i < m.timers.size(); ++i) {
      const auto& tm = m.timers[i];
      if (!tm.active_in[st.mode]) continue;
      const bool was_running = st.timer_elapsed[i] < tm.duration_ms;
      st.timer_elapsed[i] = std::min(st.timer_elapsed[i] + advance, tm.duration_ms);
      if (was_running && st.timer_elapsed[i] == tm.duration_ms) expired.push_back(i);
    }
    remaining -= advance;

    // Each expiry fires once, in declaration order, until one is accepted
    // (an accepted step resets every timer).
    for (auto i : expired) {
      auto res = step(m, st, m.timers[i].event_index);
      r.fired.push_back(m.timers[i].event);
      r.accepted.push_back(res.accepted);
      if (res.accepted) {
        st = std::move(res.state);
        break;
      }
    }
    if (!next) break;
  }
  return r;
}

bool well_formed(const StatechartModel& m, const SystemState& s) {
  if (s.mode >= m.modes.size()) return false;
  if (s.valuation.size() != m.variables.size() || s.timer_elapsed.size() != m.timers.size()) return false;
  for (std::size_t i = 0; i < m.variables.size(); ++i)
    if (!in_domain(s.valuation[i], m.variables[i].type)) return false;
  for (std::size_t i = 0; i < m.timers.size(); ++i)
    if (s.timer_elapsed[i] < 0 || s.timer_elapsed[i] > m.timers[i].duration_ms) return false;
  return true;
}

std::string describe_state(const StatechartModel& m, const SystemState& s) {
  std::string out = s.mode < m.modes.size() ? m.modes[s.mode] : "?";
  out += " {";
  for (std::size_t i = 0; i < m.variables.size() && i < s.valuation.size(); ++i) {
    if (i) out += ", ";
    out += m.variables[i].name + "=" + format_value(s.valuation[i], &m.modes);
  }
  return out + "}";
}

}  // namespace hmiv
