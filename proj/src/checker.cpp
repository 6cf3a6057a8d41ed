#include "hmiv/checker.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <random>
#include <unordered_map>

namespace hmiv::check {

const char* to_string(Relation r) {
  switch (r) {
    case Relation::equal: return "equal";
    case Relation::not_equal: return "not_equal";
    case Relation::custom: return "custom";
  }
  return "?";
}

const char* to_string(Method m) {
  switch (m) {
    case Method::inductive: return "inductive";
    case Method::reachable: return "reachable";
    case Method::both: return "both";
  }
  return "?";
}

const char* to_string(ObligationKind k) {
  switch (k) {
    case ObligationKind::coverage: return "coverage";
    case ObligationKind::disjointness: return "disjointness";
    case ObligationKind::range_preservation: return "range_preservation";
  }
  return "?";
}

const char* to_string(Status s) {
  switch (s) {
    case Status::holds: return "holds";
    case Status::violated: return "violated";
    case Status::unknown: return "unknown";
  }
  return "?";
}

const char* to_string(VerdictMethod m) {
  switch (m) {
    case VerdictMethod::inductive_exhaustive: return "inductive_exhaustive";
    case VerdictMethod::inductive_sampled: return "inductive_sampled";
    case VerdictMethod::bounded_reachability: return "bounded_reachability";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Property resolution

std::vector<Diagnostic> resolve_property(PropertySpec& p, const StatechartModel& m) {
  std::vector<Diagnostic> diags;
  auto err = [&](const char* code, std::string msg, Span span) { diags.push_back(make_error(code, std::move(msg), span)); };
  const Scope scope = m.scope();
  auto boolean = [&](Expr& e, const char* what) {
    auto t = resolve(e, scope, diags);
    if (t && t->kind != TypeKind::boolean)
      err(diag::type_error, std::string(what) + " of property '" + p.name + "' is not boolean", e.span);
  };

  if (!p.is_template()) {
    boolean(*p.always, "predicate");
    return diags;
  }
  if (p.actions.empty()) err(diag::structure, "property '" + p.name + "' has an empty action class", p.span);
  for (auto& a : p.actions) {
    if (auto e = m.event_index(a.event))
      a.event_index = *e;
    else
      err(diag::unresolved, "unresolved event '" + a.event + "' in property '" + p.name + "'", a.span);
    a.mode_index.reset();
    if (a.mode) {
      if (auto md = m.mode_index(*a.mode))
        a.mode_index = *md;
      else
        err(diag::unresolved, "unresolved mode '" + *a.mode + "' in property '" + p.name + "'", a.span);
    }
  }
  if (p.guard) boolean(*p.guard, "guard");
  if (p.filter_pre.size() != p.filter_post.size())
    err(diag::type_error, "filters of property '" + p.name + "' have different arity", p.span);
  if (p.filter_pre.empty() && p.relation != Relation::custom)
    err(diag::structure, "property '" + p.name + "' needs pre and post filters", p.span);
  std::vector<StaticType> pre, post;
  for (auto& e : p.filter_pre)
    if (auto t = resolve(e, scope, diags)) pre.push_back(*t);
  for (auto& e : p.filter_post)
    if (auto t = resolve(e, scope, diags)) post.push_back(*t);
  if (pre.size() == p.filter_pre.size() && post.size() == p.filter_post.size() && pre.size() == post.size()) {
    for (std::size_t i = 0; i < pre.size(); ++i) {
      const bool mismatch = pre[i].kind != post[i].kind ||
                            (pre[i].literals && post[i].literals && *pre[i].literals != *post[i].literals);
      if (mismatch)
        err(diag::type_error, "filter component " + std::to_string(i) + " of property '" + p.name + "' differs in type",
            p.filter_post[i].span);
    }
  }
  if (p.relation == Relation::custom) {
    if (!p.custom) {
      err(diag::structure, "property '" + p.name + "' has no relation expression", p.span);
    } else {
      Scope rs = scope;
      rs.variables.clear();
      rs.pre = pre;
      rs.post = post;
      rs.allow_projections = true;
      auto t = resolve(*p.custom, rs, diags);
      if (t && t->kind != TypeKind::boolean)
        err(diag::type_error, "relation of property '" + p.name + "' is not boolean", p.custom->span);
    }
  }
  return diags;
}

// ---------------------------------------------------------------------------
// Obligations

namespace {

bool range_annotated(const Type& t) {
  return (t.kind == TypeKind::decimal && t.range) || t.kind == TypeKind::string;
}

std::string guard_text(const Transition& t) { return t.guard ? to_source(*t.guard) : "true"; }

std::string domain_text(const Type& t) {
  if (t.kind == TypeKind::decimal) return "[" + t.range->lo.to_string() + ", " + t.range->hi.to_string() + "]";
  return "string(" + std::to_string(t.max_length) + ", " + format_value(Value{t.alphabet}) + ")";
}

}  // namespace

std::vector<Obligation> guard_obligations(const StatechartModel& m) {
  std::vector<Obligation> out;
  std::vector<std::vector<bool>> must(m.modes.size(), std::vector<bool>(m.events.size(), false));
  for (const auto& r : m.responses)
    for (const auto& e : r.events) must[*m.mode_index(r.mode)][*m.event_index(e)] = true;

  for (std::uint32_t md = 0; md < m.modes.size(); ++md) {
    for (std::uint32_t ev = 0; ev < m.events.size(); ++ev) {
      const auto& ts = m.outgoing[md][ev];
      const std::string loc = m.modes[md] + "/" + m.events[ev];
      if (ts.size() >= 2) {
        std::string f = "at most one of";
        for (std::size_t i = 0; i < ts.size(); ++i)
          f += (i ? "; " : " ") + m.transitions[ts[i]].id + ": " + guard_text(m.transitions[ts[i]]);
        out.push_back({ObligationKind::disjointness, md, ev, std::nullopt, loc, f});
      }
      if (must[md][ev]) {
        std::string f;
        for (std::size_t i = 0; i < ts.size(); ++i) f += (i ? " or " : "") + ("(" + guard_text(m.transitions[ts[i]]) + ")");
        if (ts.empty()) f = "false";
        out.push_back({ObligationKind::coverage, md, ev, std::nullopt, loc, f});
      }
    }
  }
  for (std::uint32_t ti = 0; ti < m.transitions.size(); ++ti) {
    const auto& t = m.transitions[ti];
    std::string f;
    for (const auto& a : t.actions) {
      const Type& ty = m.variables[a.slot].type;
      if (!range_annotated(ty)) continue;
      if (!f.empty()) f += "; ";
      f += to_source(a.value) + " in " + domain_text(ty);
    }
    if (f.empty()) continue;
    out.push_back({ObligationKind::range_preservation, t.source_mode, t.event_index, ti, t.id,
                   guard_text(t) + " => " + f});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Domain enumeration

namespace {

constexpr std::int64_t kUnboundedWindow = 100000000;  // hundredths either side of zero

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > std::numeric_limits<std::uint64_t>::max() / b) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

// Values of one variable type in ascending order: false < true, enum
// literals in declaration order, decimals ascending, strings in shortlex
// order over the byte-sorted alphabet.
class Domain {
 public:
  explicit Domain(const Type& t) : type_(t) {
    switch (t.kind) {
      case TypeKind::boolean: size_ = 2; break;
      case TypeKind::enumeration: size_ = t.literals.size(); break;
      case TypeKind::decimal:
        if (t.range) {
          lo_ = t.range->lo.hundredths();
          size_ = static_cast<std::uint64_t>(t.range->hi.hundredths() - lo_) + 1;
        } else {
          lo_ = -kUnboundedWindow;
          size_ = 2 * static_cast<std::uint64_t>(kUnboundedWindow) + 1;
        }
        break;
      case TypeKind::string: {
        alphabet_ = t.alphabet;
        std::sort(alphabet_.begin(), alphabet_.end());
        alphabet_.erase(std::unique(alphabet_.begin(), alphabet_.end()), alphabet_.end());
        std::uint64_t layer = 1;
        for (std::size_t k = 0; k <= t.max_length; ++k) {
          layers_.push_back(layer);
          size_ = sat_add(size_, layer);
          layer = sat_mul(layer, alphabet_.size());
        }
        break;
      }
      case TypeKind::mode: size_ = 1; break;
    }
  }

  std::uint64_t size() const { return size_; }

  Value at(std::uint64_t i) const {
    switch (type_.kind) {
      case TypeKind::boolean: return i != 0;
      case TypeKind::enumeration: return EnumLiteral{type_.literals[i]};
      case TypeKind::decimal: return Decimal::from_hundredths(lo_ + static_cast<std::int64_t>(i));
      case TypeKind::string: {
        std::size_t k = 0;
        while (i >= layers_[k]) i -= layers_[k++];
        std::string s(k, ' ');
        for (std::size_t pos = k; pos-- > 0;) {
          s[pos] = alphabet_[i % alphabet_.size()];
          i /= alphabet_.size();
        }
        return s;
      }
      case TypeKind::mode: return ModeId{0};
    }
    return false;
  }

 private:
  const Type& type_;
  std::uint64_t size_ = 0;
  std::int64_t lo_ = 0;
  std::string alphabet_;
  std::vector<std::uint64_t> layers_;
};

struct SweepResult {
  VerdictMethod method = VerdictMethod::inductive_exhaustive;
  double coverage = 1.0;
  std::uint64_t evaluated = 0;
  std::optional<std::vector<Value>> witness;
  std::string detail;
};

// Calls visit on valuations of the projected slots (other slots keep their
// initial values) until it reports a violation.
template <class Visit>
SweepResult sweep(const StatechartModel& m, const std::vector<bool>& reads, const DomainBudget& budget, Visit visit,
                  const std::vector<Value>* base = nullptr) {
  std::vector<Value> val;
  if (base)
    val = *base;
  else
    for (const auto& v : m.variables) val.push_back(v.initial);
  std::vector<std::uint32_t> slots;
  std::vector<Domain> doms;
  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < m.variables.size(); ++i) {
    if (i >= reads.size() || !reads[i]) continue;
    slots.push_back(i);
    doms.emplace_back(m.variables[i].type);
    total = sat_mul(total, doms.back().size());
  }

  SweepResult r;
  auto check = [&]() {
    ++r.evaluated;
    std::optional<std::string> bad;
    try {
      bad = visit(val);
    } catch (const Error& e) {
      bad = std::string("evaluation error: ") + e.what();
    }
    if (bad) {
      r.witness = val;
      r.detail = std::move(*bad);
      return true;
    }
    return false;
  };

  if (total <= budget.exhaustive_limit) {
    if (total == 0) return r;
    std::vector<std::uint64_t> digit(slots.size(), 0);
    for (std::size_t k = 0; k < slots.size(); ++k) val[slots[k]] = doms[k].at(0);
    for (;;) {
      if (check()) return r;
      // Odometer with the first declared variable most significant.
      std::size_t k = slots.size();
      while (k > 0) {
        --k;
        if (++digit[k] < doms[k].size()) {
          val[slots[k]] = doms[k].at(digit[k]);
          break;
        }
        digit[k] = 0;
        val[slots[k]] = doms[k].at(0);
        if (k == 0) return r;
      }
      if (slots.empty()) return r;
    }
  }
  if (!budget.allow_sampling)
    throw ProjectionTooLarge("projected domain of " + std::to_string(total) + " valuations exceeds the budget of " +
                             std::to_string(budget.exhaustive_limit));
  r.method = VerdictMethod::inductive_sampled;
  r.coverage = std::min(1.0, static_cast<double>(budget.samples) / static_cast<double>(total));
  std::mt19937_64 rng(budget.seed);
  for (std::uint64_t s = 0; s < budget.samples; ++s) {
    for (std::size_t k = 0; k < slots.size(); ++k) {
      std::uniform_int_distribution<std::uint64_t> pick(0, doms[k].size() - 1);
      val[slots[k]] = doms[k].at(pick(rng));
    }
    if (check()) return r;
  }
  return r;
}

void reads_of(const std::optional<Expr>& e, std::vector<bool>& reads) {
  if (e) collect_reads(*e, reads);
}

SystemState make_state(const StatechartModel& m, std::uint32_t mode, std::vector<Value> val) {
  SystemState s;
  s.mode = mode;
  s.valuation = std::move(val);
  s.timer_elapsed.assign(m.timers.size(), 0);
  return s;
}

Verdict from_sweep(const StatechartModel& m, SweepResult r, std::uint32_t mode, std::optional<std::uint32_t> event) {
  Verdict v;
  v.method = r.method;
  v.coverage = r.coverage;
  v.evaluated = r.evaluated;
  if (r.witness) {
    v.status = Status::violated;
    Counterexample c;
    c.pre = make_state(m, mode, std::move(*r.witness));
    c.event = event;
    c.detail = std::move(r.detail);
    v.counterexample = std::move(c);
  }
  return v;
}

bool guard_holds(const Transition& t, const EvalContext& ctx) { return !t.guard || evaluate_bool(*t.guard, ctx); }

std::uint64_t projected_size(const StatechartModel& m, const std::vector<bool>& reads) {
  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < m.variables.size(); ++i)
    if (reads[i]) total = sat_mul(total, Domain(m.variables[i].type).size());
  return total;
}

}  // namespace

Verdict check_obligation(const StatechartModel& m, const Obligation& ob, const DomainBudget& budget) {
  std::vector<bool> reads(m.variables.size(), false);
  switch (ob.kind) {
    case ObligationKind::disjointness:
    case ObligationKind::coverage: {
      const auto& ts = m.outgoing[ob.mode][ob.event];
      for (auto ti : ts) reads_of(m.transitions[ti].guard, reads);
      const bool disjoint = ob.kind == ObligationKind::disjointness;
      auto r = sweep(m, reads, budget, [&](const std::vector<Value>& val) -> std::optional<std::string> {
        const EvalContext ctx{val, ob.mode, {}, {}};
        std::vector<std::string> on;
        for (auto ti : ts)
          if (guard_holds(m.transitions[ti], ctx)) on.push_back(m.transitions[ti].id);
        if (disjoint && on.size() >= 2) return "transitions '" + on[0] + "' and '" + on[1] + "' are both enabled";
        if (!disjoint && on.empty()) return std::string("no transition responds");
        return std::nullopt;
      });
      return from_sweep(m, std::move(r), ob.mode, ob.event);
    }
    case ObligationKind::range_preservation: {
      const Transition& t = m.transitions[*ob.transition];
      std::vector<bool> greads(m.variables.size(), false);
      reads_of(t.guard, greads);
      for (const auto& a : t.actions)
        if (range_annotated(m.variables[a.slot].type)) collect_reads(a.value, reads);
      auto in_range = [&](const EvalContext& ctx) -> std::optional<std::string> {
        for (const auto& a : t.actions) {
          const Type& ty = m.variables[a.slot].type;
          if (!range_annotated(ty)) continue;
          Value v = evaluate(a.value, ctx);
          if (!in_domain(v, ty)) return "'" + a.target + "' := " + format_value(v) + " leaves " + domain_text(ty);
        }
        return std::nullopt;
      };
      bool overlap = false;
      for (std::size_t i = 0; i < reads.size(); ++i) overlap = overlap || (reads[i] && greads[i]);
      std::vector<bool> all = reads;
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = all[i] || greads[i];

      // guard(G) => ok(R) with G and R disjoint splits into a search for one
      // guard valuation followed by a sweep of R.
      if (!overlap && projected_size(m, all) > budget.exhaustive_limit &&
          projected_size(m, greads) <= budget.exhaustive_limit && projected_size(m, reads) <= budget.exhaustive_limit) {
        bool guard_error = false;
        auto g = sweep(m, greads, budget, [&](const std::vector<Value>& val) -> std::optional<std::string> {
          try {
            if (guard_holds(t, EvalContext{val, t.source_mode, {}, {}})) return std::string();
          } catch (const Error& e) {
            guard_error = true;
            return std::string("evaluation error: ") + e.what();
          }
          return std::nullopt;
        });
        if (!g.witness || guard_error) {
          auto v = from_sweep(m, std::move(g), ob.mode, ob.event);
          if (v.counterexample) v.counterexample->transition = t.id;
          return v;
        }
        auto r = sweep(
            m, reads, budget,
            [&](const std::vector<Value>& val) { return in_range(EvalContext{val, t.source_mode, {}, {}}); },
            &*g.witness);
        r.evaluated += g.evaluated;
        auto v = from_sweep(m, std::move(r), ob.mode, ob.event);
        v.note = "guard and actions read disjoint variables; swept separately";
        if (v.counterexample) v.counterexample->transition = t.id;
        return v;
      }

      auto r = sweep(m, all, budget, [&](const std::vector<Value>& val) -> std::optional<std::string> {
        const EvalContext ctx{val, t.source_mode, {}, {}};
        if (!guard_holds(t, ctx)) return std::nullopt;
        return in_range(ctx);
      });
      auto v = from_sweep(m, std::move(r), ob.mode, ob.event);
      if (v.counterexample) v.counterexample->transition = t.id;
      return v;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Templates

namespace {

std::vector<Value> project(const std::vector<Expr>& filters, const EvalContext& ctx) {
  std::vector<Value> out;
  out.reserve(filters.size());
  for (const auto& f : filters) out.push_back(evaluate(f, ctx));
  return out;
}

bool related(const PropertySpec& p, const std::vector<Value>& pre, const std::vector<Value>& post) {
  switch (p.relation) {
    case Relation::equal: return pre == post;
    case Relation::not_equal: return pre != post;
    case Relation::custom: return evaluate_bool(*p.custom, EvalContext{{}, 0, pre, post});
  }
  return false;
}

std::string tuple_text(const StatechartModel& m, const std::vector<Value>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_value(v[i], &m.modes);
  return s + ")";
}

bool in_class(const PropertySpec& p, std::uint32_t event, std::uint32_t mode) {
  return std::any_of(p.actions.begin(), p.actions.end(), [&](const ActionRef& a) {
    return a.event_index == event && (!a.mode_index || *a.mode_index == mode);
  });
}

// Evaluates the template on one (pre, post) pair; returns a description
// when it is falsified.
std::optional<std::string> falsifies(const StatechartModel& m, const PropertySpec& p, const SystemState& pre,
                                     const SystemState& post) {
  const EvalContext before{pre.valuation, pre.mode, {}, {}};
  if (p.guard && !evaluate_bool(*p.guard, before)) return std::nullopt;
  auto a = project(p.filter_pre, before);
  auto b = project(p.filter_post, EvalContext{post.valuation, post.mode, {}, {}});
  if (related(p, a, b)) return std::nullopt;
  return "pre " + tuple_text(m, a) + " and post " + tuple_text(m, b) + " violate relation " + to_string(p.relation);
}

}  // namespace

Verdict check_template(const StatechartModel& m, const PropertySpec& p, const DomainBudget& budget) {
  Verdict total;
  if (!p.is_template()) {
    total.status = Status::unknown;
    total.note = "state predicates are checked by reachability";
    return total;
  }
  std::size_t matched = 0;
  for (std::uint32_t ti = 0; ti < m.transitions.size(); ++ti) {
    const Transition& t = m.transitions[ti];
    if (!in_class(p, t.event_index, t.source_mode)) continue;
    ++matched;
    std::vector<bool> reads(m.variables.size(), false);
    reads_of(t.guard, reads);
    reads_of(p.guard, reads);
    for (const auto& f : p.filter_pre) collect_reads(f, reads);
    std::vector<bool> post_reads(m.variables.size(), false);
    for (const auto& f : p.filter_post) collect_reads(f, post_reads);
    for (std::uint32_t v = 0; v < m.variables.size(); ++v) {
      if (!post_reads[v]) continue;
      const Assignment* last = nullptr;
      for (const auto& a : t.actions)
        if (a.slot == v) last = &a;
      if (last)
        collect_reads(last->value, reads);
      else
        reads[v] = true;
    }

    auto r = sweep(m, reads, budget, [&](const std::vector<Value>& val) -> std::optional<std::string> {
      const EvalContext ctx{val, t.source_mode, {}, {}};
      if (!guard_holds(t, ctx)) return std::nullopt;
      if (p.guard && !evaluate_bool(*p.guard, ctx)) return std::nullopt;
      SystemState pre = make_state(m, t.source_mode, val);
      SystemState post = pre;
      post.mode = t.target_mode;
      for (const auto& a : t.actions)
        if (post_reads[a.slot]) post.valuation[a.slot] = evaluate(a.value, ctx);
      return falsifies(m, p, pre, post);
    });
    total.evaluated += r.evaluated;
    if (r.method == VerdictMethod::inductive_sampled) {
      total.method = VerdictMethod::inductive_sampled;
      total.coverage = std::min(total.coverage, r.coverage);
    }
    if (r.witness) {
      total.status = Status::violated;
      Counterexample c;
      c.pre = make_state(m, t.source_mode, std::move(*r.witness));
      c.event = t.event_index;
      c.transition = t.id;
      c.detail = std::move(r.detail);
      try {
        auto res = step(m, c.pre, t.event_index);
        if (res.accepted) c.post = std::move(res.state);
      } catch (const Error& e) {
        c.detail += std::string("; replay failed: ") + e.what();
      }
      total.counterexample = std::move(c);
      return total;
    }
  }
  if (matched == 0) total.note = "no transition matches the action class";
  return total;
}

// ---------------------------------------------------------------------------
// Reachability

namespace {

std::int64_t bucket(std::int64_t h, std::int64_t q) {
  if (q <= 1) return h;
  return h >= 0 ? h / q : -((-h + q - 1) / q);
}

// Truncates to the leading `digits` significant decimal digits.
std::int64_t significant(std::int64_t h, int digits) {
  if (digits <= 0) return h;
  std::int64_t scale = 1;
  for (std::int64_t a = h < 0 ? -h : h; a >= scale * 10 && scale <= INT64_MAX / 10; scale *= 10) {
  }
  std::int64_t keep = 1;
  for (int i = 1; i < digits; ++i) keep *= 10;
  if (scale <= keep) return h;
  const std::int64_t unit = scale / keep;
  return h / unit * unit;
}

template <class T>
void put(std::string& key, T v) {
  key.append(reinterpret_cast<const char*>(&v), sizeof v);
}

class KeyMaker {
 public:
  KeyMaker(const StatechartModel& m, const ReachOptions& o) : m_(m), o_(o) {}

  std::string operator()(const SystemState& s) const {
    std::string key;
    put(key, s.mode);
    for (std::size_t i = 0; i < s.valuation.size(); ++i) {
      const Value& v = s.valuation[i];
      const Type& t = m_.variables[i].type;
      switch (t.kind) {
        case TypeKind::boolean: put(key, static_cast<char>(std::get<bool>(v))); break;
        case TypeKind::enumeration: {
          const auto& lits = t.literals;
          auto it = std::find(lits.begin(), lits.end(), std::get<EnumLiteral>(v).name);
          put(key, static_cast<std::uint32_t>(it - lits.begin()));
          break;
        }
        case TypeKind::decimal:
          put(key, o_.exact ? std::get<Decimal>(v).hundredths()
                            : bucket(std::get<Decimal>(v).hundredths(), o_.decimal_quantum));
          break;
        case TypeKind::string: {
          const auto& str = std::get<std::string>(v);
          if (o_.exact || t.alphabet.find('.') == std::string::npos) {
            put(key, static_cast<std::uint32_t>(str.size()));
            key += str;
          } else {
            put(key, static_cast<std::uint32_t>(str.size()));
            put(key, static_cast<char>(str.find('.') != std::string::npos));
            put(key, significant(Decimal::from_entry(str).hundredths(), o_.string_digits));
          }
          break;
        }
        case TypeKind::mode: put(key, std::get<ModeId>(v).index); break;
      }
    }
    return key;
  }

 private:
  const StatechartModel& m_;
  const ReachOptions& o_;
};

struct Node {
  SystemState state;
  std::int64_t parent;
  std::uint32_t event;
  std::size_t depth;
};

std::vector<std::string> trace_to(const StatechartModel& m, const std::vector<Node>& nodes, std::size_t n) {
  std::vector<std::string> out;
  for (auto i = static_cast<std::int64_t>(n); nodes[static_cast<std::size_t>(i)].parent >= 0;
       i = nodes[static_cast<std::size_t>(i)].parent)
    out.push_back(m.events[nodes[static_cast<std::size_t>(i)].event]);
  std::reverse(out.begin(), out.end());
  return out;
}

// Generic search. `at_state` checks a newly visited state, `at_step` an
// accepted (pre, event, post) step; each returns a description on failure.
template <class AtState, class AtStep>
Verdict explore(const StatechartModel& m, const ReachOptions& o, AtState at_state, AtStep at_step) {
  Verdict v;
  v.method = VerdictMethod::bounded_reachability;
  const KeyMaker key(m, o);
  std::vector<Node> nodes;
  std::unordered_map<std::string, std::size_t> seen;

  auto violated = [&](std::size_t n, std::optional<std::uint32_t> event, std::optional<SystemState> post,
                      std::string detail) {
    v.status = Status::violated;
    Counterexample c;
    c.pre = nodes[n].state;
    c.event = event;
    c.post = std::move(post);
    c.trace = trace_to(m, nodes, n);
    c.detail = std::move(detail);
    v.counterexample = std::move(c);
    v.evaluated = nodes.size();
  };

  nodes.push_back({initial_state(m), -1, 0, 0});
  seen.emplace(key(nodes[0].state), 0);
  if (auto bad = at_state(nodes[0].state)) {
    violated(0, std::nullopt, std::nullopt, std::move(*bad));
    return v;
  }
  bool truncated = false;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const SystemState cur = nodes[i].state;
    const std::size_t depth = nodes[i].depth;
    v.depth = std::max(v.depth, depth);
    for (std::uint32_t e = 0; e < m.events.size(); ++e) {
      auto r = step(m, cur, e);
      if (!r.accepted) continue;
      if (auto bad = at_step(cur, e, r.state)) {
        violated(i, e, std::move(r.state), std::move(*bad));
        return v;
      }
      std::string k = key(r.state);
      if (seen.count(k)) continue;
      if (depth >= o.max_depth) {
        truncated = true;
        continue;
      }
      if (nodes.size() >= o.max_states)
        throw ResourceLimit("reachability exceeded " + std::to_string(o.max_states) + " states");
      seen.emplace(std::move(k), nodes.size());
      nodes.push_back({std::move(r.state), static_cast<std::int64_t>(i), e, depth + 1});
      if (auto bad = at_state(nodes.back().state)) {
        violated(nodes.size() - 1, std::nullopt, std::nullopt, std::move(*bad));
        return v;
      }
    }
  }
  v.evaluated = nodes.size();
  if (truncated) {
    v.status = Status::unknown;
    v.note = "depth bound " + std::to_string(o.max_depth) + " reached with unexplored states";
  }
  return v;
}

}  // namespace

Verdict check_reachable(const StatechartModel& m, const Expr& predicate, const ReachOptions& o) {
  return explore(
      m, o,
      [&](const SystemState& s) -> std::optional<std::string> {
        if (evaluate_bool(predicate, EvalContext{s.valuation, s.mode, {}, {}})) return std::nullopt;
        return "predicate " + to_source(predicate) + " is false";
      },
      [](const SystemState&, std::uint32_t, const SystemState&) -> std::optional<std::string> { return std::nullopt; });
}

Verdict check_reachable(const StatechartModel& m, const PropertySpec& p, const ReachOptions& o) {
  if (!p.is_template()) return check_reachable(m, *p.always, o);
  return explore(
      m, o, [](const SystemState&) -> std::optional<std::string> { return std::nullopt; },
      [&](const SystemState& pre, std::uint32_t e, const SystemState& post) -> std::optional<std::string> {
        if (!in_class(p, e, pre.mode)) return std::nullopt;
        return falsifies(m, p, pre, post);
      });
}

// ---------------------------------------------------------------------------
// Replay

bool confirm_counterexample(const StatechartModel& m, const PropertySpec& p, const Verdict& v) {
  if (v.status != Status::violated || !v.counterexample) return false;
  const Counterexample& c = *v.counterexample;
  try {
    if (c.trace) {
      SystemState s = initial_state(m);
      for (const auto& e : *c.trace) {
        auto r = step(m, s, e);
        if (!r.accepted) return false;
        s = std::move(r.state);
      }
      // Reachability keys may merge states; the replayed state must match
      // the reported one exactly.
      if (!(s == c.pre)) return false;
    }
    if (!p.is_template()) return !evaluate_bool(*p.always, EvalContext{c.pre.valuation, c.pre.mode, {}, {}});
    if (!c.event || !in_class(p, *c.event, c.pre.mode)) return false;
    auto r = step(m, c.pre, *c.event);
    if (!r.accepted) return false;
    return falsifies(m, p, c.pre, r.state).has_value();
  } catch (const Error&) {
    return false;
  }
}

bool confirm_obligation_witness(const StatechartModel& m, const Obligation& ob, const Verdict& v) {
  if (v.status != Status::violated || !v.counterexample) return false;
  const SystemState& s = v.counterexample->pre;
  try {
    switch (ob.kind) {
      case ObligationKind::disjointness:
        try {
          step(m, s, ob.event);
        } catch (const NondeterminismError&) {
          return true;
        }
        return false;
      case ObligationKind::coverage:
        return !step(m, s, ob.event).accepted;
      case ObligationKind::range_preservation: {
        const Transition& t = m.transitions[*ob.transition];
        const EvalContext ctx{s.valuation, s.mode, {}, {}};
        if (!guard_holds(t, ctx)) return false;
        for (const auto& a : t.actions)
          if (!in_domain(evaluate(a.value, ctx), m.variables[a.slot].type)) return true;
        return false;
      }
    }
  } catch (const Error&) {
    return ob.kind == ObligationKind::range_preservation;
  }
  return false;
}

std::string describe_counterexample(const StatechartModel& m, const Counterexample& c) {
  std::string out;
  if (c.trace) {
    out += "trace: [";
    for (std::size_t i = 0; i < c.trace->size(); ++i) out += (i ? ", " : "") + (*c.trace)[i];
    out += "]\n";
  }
  out += "state: " + describe_state(m, c.pre) + "\n";
  if (c.event) out += "event: " + m.events[*c.event] + (c.transition ? " (transition " + *c.transition + ")" : "") + "\n";
  if (c.post) out += "post:  " + describe_state(m, *c.post) + "\n";
  if (!c.detail.empty()) out += "why:   " + c.detail + "\n";
  return out;
}

}  // namespace hmiv::check
