#include "hmiv/petri.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace hmiv::petri {

std::optional<std::size_t> PetriNet::place_index(std::string_view p) const {
  for (std::size_t i = 0; i < places.size(); ++i)
    if (places[i] == p) return i;
  return std::nullopt;
}

std::optional<std::size_t> PetriNet::transition_index(std::string_view t) const {
  for (std::size_t i = 0; i < transitions.size(); ++i)
    if (transitions[i].id == t) return i;
  return std::nullopt;
}

std::vector<Diagnostic> resolve_net(PetriNet& net) {
  std::vector<Diagnostic> diags;
  auto err = [&](const char* code, std::string msg, Span span) { diags.push_back(make_error(code, std::move(msg), span)); };
  net.resolved = false;
  std::set<std::string> seen;
  for (const auto& p : net.places)
    if (!seen.insert(p).second) err(diag::duplicate_name, "duplicate place '" + p + "'", net.span);
  if (net.initial.size() != net.places.size())
    err(diag::structure, "initial marking does not cover every place", net.span);
  for (auto v : net.initial)
    if (v < 0) err(diag::invalid_value, "negative initial token count", net.span);
  std::set<std::string> ids;
  for (auto& t : net.transitions) {
    if (!ids.insert(t.id).second) err(diag::duplicate_name, "duplicate transition '" + t.id + "'", t.span);
    if (t.inputs.empty() && t.outputs.empty()) err(diag::structure, "transition '" + t.id + "' has no arcs", t.span);
    t.pre.assign(net.places.size(), 0);
    t.post.assign(net.places.size(), 0);
    auto fill = [&](const Weighted& arcs, std::vector<std::int64_t>& w) {
      for (const auto& [p, weight] : arcs) {
        auto i = net.place_index(p);
        if (!i) {
          err(diag::unresolved, "unresolved place '" + p + "' in transition '" + t.id + "'", t.span);
          continue;
        }
        if (weight < 1) err(diag::invalid_value, "arc weight must be at least 1", t.span);
        w[*i] += weight;
      }
    };
    fill(t.inputs, t.pre);
    fill(t.outputs, t.post);
  }
  net.resolved = !has_errors(diags);
  return diags;
}

Marking initial_marking(const PetriNet& net) { return Marking{net.initial}; }

Marking make_marking(const PetriNet& net, const std::map<std::string, std::int64_t>& tokens) {
  Marking m{std::vector<std::int64_t>(net.places.size(), 0)};
  for (const auto& [p, n] : tokens) {
    auto i = net.place_index(p);
    if (!i) throw UnknownName("unknown place '" + p + "'");
    m.tokens[*i] = n;
  }
  return m;
}

std::string format_marking(const PetriNet& net, const Marking& m) {
  std::string out = "{";
  for (std::size_t i = 0; i < net.places.size(); ++i) {
    if (i) out += ", ";
    out += net.places[i] + ":" + std::to_string(m.tokens[i]);
  }
  return out + "}";
}

bool is_enabled(const PetriNet& net, const Marking& m, std::size_t t) {
  const auto& pre = net.transitions[t].pre;
  for (std::size_t p = 0; p < pre.size(); ++p)
    if (m.tokens[p] < pre[p]) return false;
  return true;
}

std::vector<std::string> enabled(const PetriNet& net, const Marking& m) {
  std::vector<std::string> out;
  for (std::size_t t = 0; t < net.transitions.size(); ++t)
    if (is_enabled(net, m, t)) out.push_back(net.transitions[t].id);
  return out;
}

Marking fire(const PetriNet& net, const Marking& m, std::size_t t) {
  if (!is_enabled(net, m, t)) throw NotEnabled("transition '" + net.transitions[t].id + "' is not enabled");
  Marking r = m;
  const auto& tr = net.transitions[t];
  for (std::size_t p = 0; p < r.tokens.size(); ++p) r.tokens[p] += tr.post[p] - tr.pre[p];
  return r;
}

Marking fire(const PetriNet& net, const Marking& m, std::string_view transition) {
  auto t = net.transition_index(transition);
  if (!t) throw UnknownName("unknown transition '" + std::string(transition) + "'");
  return fire(net, m, *t);
}

IntMatrix incidence_matrix(const PetriNet& net) {
  IntMatrix c(net.places.size(), std::vector<std::int64_t>(net.transitions.size(), 0));
  for (std::size_t t = 0; t < net.transitions.size(); ++t)
    for (std::size_t p = 0; p < net.places.size(); ++p)
      c[p][t] = net.transitions[t].post[p] - net.transitions[t].pre[p];
  return c;
}

// ---------------------------------------------------------------------------
// Farkas elimination

namespace {

// Working row: incidence part (width T) followed by place coefficients (width P).
class RowSet {
 public:
  RowSet(std::size_t t, std::size_t p) : t_(t), p_(p), width_(t + p), words_((p + 63) / 64) {}

  std::size_t size() const { return count_; }
  std::int64_t* row(std::size_t i) { return data_.data() + i * width_; }
  const std::int64_t* row(std::size_t i) const { return data_.data() + i * width_; }
  const std::uint64_t* support(std::size_t i) const { return supp_.data() + i * words_; }

  std::int64_t* push() {
    data_.resize(data_.size() + width_, 0);
    supp_.resize(supp_.size() + words_, 0);
    ++count_;
    return row(count_ - 1);
  }

  // Divides by the gcd and records the support of the coefficient part.
  void finish_last() {
    std::int64_t* r = row(count_ - 1);
    std::int64_t g = 0;
    for (std::size_t k = 0; k < width_; ++k) g = std::gcd(g, r[k]);
    if (g > 1)
      for (std::size_t k = 0; k < width_; ++k) r[k] /= g;
    std::uint64_t* s = supp_.data() + (count_ - 1) * words_;
    for (std::size_t k = 0; k < p_; ++k)
      if (r[t_ + k] != 0) s[k / 64] |= std::uint64_t{1} << (k % 64);
  }

  void pop() {
    data_.resize(data_.size() - width_);
    supp_.resize(supp_.size() - words_);
    --count_;
  }

  std::size_t width() const { return width_; }
  std::size_t words() const { return words_; }
  std::size_t t() const { return t_; }
  std::size_t p() const { return p_; }

 private:
  std::size_t t_, p_, width_, words_;
  std::size_t count_ = 0;
  std::vector<std::int64_t> data_;
  std::vector<std::uint64_t> supp_;
};

bool subset(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  for (std::size_t w = 0; w < words; ++w)
    if ((a[w] & ~b[w]) != 0) return false;
  return true;
}

// Keeps rows whose support is minimal; among rows with equal support keeps
// the first (equal supports of minimal rows imply proportional rows).
RowSet prune(const RowSet& in) {
  RowSet out(in.t(), in.p());
  const std::size_t n = in.size(), words = in.words();
  for (std::size_t i = 0; i < n; ++i) {
    bool keep = true;
    for (std::size_t k = 0; k < n && keep; ++k) {
      if (k == i) continue;
      if (!subset(in.support(k), in.support(i), words)) continue;
      const bool equal = subset(in.support(i), in.support(k), words);
      if (!equal || k < i) keep = false;
    }
    if (!keep) continue;
    std::int64_t* r = out.push();
    std::copy(in.row(i), in.row(i) + in.width(), r);
    out.finish_last();
  }
  return out;
}

std::int64_t checked(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw ArithmeticOverflow();
  return static_cast<std::int64_t>(v);
}

}  // namespace

std::vector<std::vector<std::int64_t>> farkas_invariants(const IntMatrix& c, std::size_t cap) {
  const std::size_t P = c.size();
  if (P == 0) return {};
  const std::size_t T = c[0].size();
  RowSet rows(T, P);
  for (std::size_t p = 0; p < P; ++p) {
    std::int64_t* r = rows.push();
    std::copy(c[p].begin(), c[p].end(), r);
    r[T + p] = 1;
    rows.finish_last();
  }
  for (std::size_t j = 0; j < T && rows.size() > 0; ++j) {
    RowSet next(T, P);
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::int64_t v = rows.row(i)[j];
      if (v == 0) {
        std::int64_t* r = next.push();
        std::copy(rows.row(i), rows.row(i) + rows.width(), r);
        next.finish_last();
      } else {
        (v > 0 ? pos : neg).push_back(i);
      }
    }
    for (auto i : pos) {
      for (auto k : neg) {
        const std::int64_t a = -rows.row(k)[j];
        const std::int64_t b = rows.row(i)[j];
        std::int64_t* r = next.push();
        const std::int64_t* ri = rows.row(i);
        const std::int64_t* rk = rows.row(k);
        for (std::size_t x = 0; x < rows.width(); ++x)
          r[x] = checked(static_cast<__int128>(a) * ri[x] + static_cast<__int128>(b) * rk[x]);
        next.finish_last();
        if (next.size() > cap)
          throw ResourceLimit("Farkas elimination exceeded " + std::to_string(cap) + " intermediate vectors");
      }
    }
    rows = prune(next);
  }
  std::vector<std::vector<std::int64_t>> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out.emplace_back(rows.row(i) + T, rows.row(i) + T + P);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

std::vector<std::vector<std::int64_t>> p_invariants(const PetriNet& net, std::size_t cap) {
  return farkas_invariants(incidence_matrix(net), cap);
}

// ---------------------------------------------------------------------------
// Reachability

ReachabilityGraph reachability_graph(const PetriNet& net, std::size_t max_states) {
  ReachabilityGraph g;
  std::map<Marking, std::size_t> index;
  g.nodes.push_back(initial_marking(net));
  index.emplace(g.nodes[0], 0);
  std::vector<std::size_t> frontier{0};
  if (max_states < 1) max_states = 1;

  while (!frontier.empty()) {
    std::map<Marking, std::vector<std::pair<std::size_t, std::size_t>>> discovered;
    for (auto n : frontier) {
      for (std::size_t t = 0; t < net.transitions.size(); ++t) {
        if (!is_enabled(net, g.nodes[n], t)) continue;
        Marking m = fire(net, g.nodes[n], t);
        if (auto it = index.find(m); it != index.end())
          g.edges.push_back({n, it->second, t});
        else
          discovered[std::move(m)].emplace_back(n, t);
      }
    }
    std::vector<std::size_t> next;
    for (auto& [m, sources] : discovered) {
      if (g.nodes.size() >= max_states) {
        g.truncated = true;
        break;
      }
      const std::size_t id = g.nodes.size();
      g.nodes.push_back(m);
      index.emplace(m, id);
      next.push_back(id);
      for (auto [from, t] : sources) g.edges.push_back({from, id, t});
    }
    if (g.truncated) break;
    frontier = std::move(next);
  }
  std::sort(g.edges.begin(), g.edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.from, a.transition, a.to) < std::tie(b.from, b.transition, b.to);
  });
  return g;
}

const char* to_string(Availability a) {
  switch (a) {
    case Availability::always: return "always";
    case Availability::sometimes: return "sometimes";
    case Availability::never: return "never";
  }
  return "?";
}

AnalysisReport analyze(const PetriNet& net, std::size_t max_states, std::size_t invariant_cap) {
  AnalysisReport r;
  r.p_invariants = p_invariants(net, invariant_cap);
  const ReachabilityGraph g = reachability_graph(net, max_states);
  r.explored = g.nodes.size();
  r.truncated = g.truncated;
  const std::size_t P = net.places.size();

  std::vector<bool> covered(P, false);
  for (const auto& y : r.p_invariants)
    for (std::size_t p = 0; p < P; ++p)
      if (y[p] > 0) covered[p] = true;
  std::vector<std::int64_t> max_tokens(P, 0);
  for (const auto& m : g.nodes)
    for (std::size_t p = 0; p < P; ++p) max_tokens[p] = std::max(max_tokens[p], m.tokens[p]);
  for (std::size_t p = 0; p < P; ++p) {
    if (g.truncated && !covered[p])
      r.bound_per_place.push_back(std::nullopt);
    else
      r.bound_per_place.push_back(max_tokens[p]);
  }

  std::map<std::string, std::size_t> enabled_count;
  for (const auto& t : net.transitions)
    if (t.event) enabled_count.emplace(*t.event, 0);
  for (const auto& m : g.nodes) {
    std::map<std::string, std::vector<std::string>> by_event;
    bool any = false;
    for (std::size_t t = 0; t < net.transitions.size(); ++t) {
      if (!is_enabled(net, m, t)) continue;
      any = true;
      if (net.transitions[t].event) by_event[*net.transitions[t].event].push_back(net.transitions[t].id);
    }
    if (!any && r.deadlocks.size() < kMaxReportedDeadlocks) r.deadlocks.push_back(m);
    for (auto& [ev, ts] : by_event) {
      ++enabled_count[ev];
      if (ts.size() > 1 && r.nondeterminism.size() < kMaxReportedDeadlocks)
        r.nondeterminism.push_back({ev, ts, m});
    }
  }
  for (const auto& [ev, n] : enabled_count) {
    r.event_availability[ev] =
        n == g.nodes.size() ? Availability::always : (n == 0 ? Availability::never : Availability::sometimes);
  }

  // Reinitiability: every explored node reaches the initial marking.
  std::vector<std::vector<std::size_t>> reverse(g.nodes.size());
  for (const auto& e : g.edges) reverse[e.to].push_back(e.from);
  std::vector<bool> reach(g.nodes.size(), false);
  std::vector<std::size_t> stack{0};
  reach[0] = true;
  while (!stack.empty()) {
    auto n = stack.back();
    stack.pop_back();
    for (auto f : reverse[n])
      if (!reach[f]) {
        reach[f] = true;
        stack.push_back(f);
      }
  }
  r.reinitializable = std::all_of(reach.begin(), reach.end(), [](bool b) { return b; });
  r.reinitializable_sound = !g.truncated;

  // Two places are mutually exclusive when some invariant weighs both and
  // their combined weight exceeds the invariant's constant.
  const Marking m0 = initial_marking(net);
  for (std::size_t p = 0; p < P; ++p) {
    for (std::size_t q = p + 1; q < P; ++q) {
      for (const auto& y : r.p_invariants) {
        if (y[p] == 0 || y[q] == 0) continue;
        std::int64_t total = 0;
        for (std::size_t k = 0; k < P; ++k) total += y[k] * m0.tokens[k];
        if (y[p] + y[q] > total) {
          r.mutual_exclusions.emplace_back(net.places[p], net.places[q]);
          break;
        }
      }
    }
  }
  return r;
}

std::string format_invariant(const PetriNet& net, const std::vector<std::int64_t>& y) {
  std::string out;
  std::int64_t total = 0;
  for (std::size_t p = 0; p < y.size(); ++p) {
    if (y[p] == 0) continue;
    if (!out.empty()) out += " + ";
    if (y[p] != 1) out += std::to_string(y[p]) + "*";
    out += net.places[p];
    total += y[p] * net.initial[p];
  }
  return out + " = " + std::to_string(total);
}

}  // namespace hmiv::petri
