#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hmiv/diagnostic.hpp"
#include "hmiv/error.hpp"

namespace hmiv::petri {

using Weighted = std::vector<std::pair<std::string, std::int64_t>>;

struct NetTransition {
  std::string id;
  Weighted inputs;
  Weighted outputs;
  std::optional<std::string> event;
  Span span;

  // Derived by resolve_net(): per-place weights.
  std::vector<std::int64_t> pre;
  std::vector<std::int64_t> post;

  bool operator==(const NetTransition& o) const {
    return id == o.id && inputs == o.inputs && outputs == o.outputs && event == o.event;
  }
};

struct PetriNet {
  std::string name;
  std::vector<std::string> places;
  std::vector<std::int64_t> initial;  // parallel to places
  std::vector<NetTransition> transitions;
  Span span;

  bool resolved = false;

  bool operator==(const PetriNet& o) const {
    return name == o.name && places == o.places && initial == o.initial && transitions == o.transitions;
  }

  std::optional<std::size_t> place_index(std::string_view p) const;
  std::optional<std::size_t> transition_index(std::string_view t) const;
};

std::vector<Diagnostic> resolve_net(PetriNet& net);

// Token counts indexed by place order.
struct Marking {
  std::vector<std::int64_t> tokens;

  auto operator<=>(const Marking&) const = default;
};

Marking initial_marking(const PetriNet& net);
Marking make_marking(const PetriNet& net, const std::map<std::string, std::int64_t>& tokens);
std::string format_marking(const PetriNet& net, const Marking& m);

class NotEnabled : public Error {
 public:
  using Error::Error;
};

bool is_enabled(const PetriNet& net, const Marking& m, std::size_t t);
std::vector<std::string> enabled(const PetriNet& net, const Marking& m);
Marking fire(const PetriNet& net, const Marking& m, std::string_view transition);
Marking fire(const PetriNet& net, const Marking& m, std::size_t t);

using IntMatrix = std::vector<std::vector<std::int64_t>>;

// C[p][t] = post_t(p) - pre_t(p)
IntMatrix incidence_matrix(const PetriNet& net);

inline constexpr std::size_t kDefaultInvariantCap = 100000;

// Minimal-support non-negative integer solutions of y^T C = 0 by Farkas
// elimination, each divided by the gcd of its entries, in descending
// lexicographic order. Throws ResourceLimit when the working set exceeds cap.
std::vector<std::vector<std::int64_t>> farkas_invariants(const IntMatrix& c, std::size_t cap = kDefaultInvariantCap);

std::vector<std::vector<std::int64_t>> p_invariants(const PetriNet& net, std::size_t cap = kDefaultInvariantCap);

struct Edge {
  std::size_t from;
  std::size_t to;
  std::size_t transition;
};

struct ReachabilityGraph {
  std::vector<Marking> nodes;  // nodes[0] is the initial marking
  std::vector<Edge> edges;
  bool truncated = false;
};

inline constexpr std::size_t kDefaultMaxStates = 100000;

// Breadth-first; markings discovered in one frontier are numbered in
// lexicographic order.
ReachabilityGraph reachability_graph(const PetriNet& net, std::size_t max_states = kDefaultMaxStates);

enum class Availability { always, sometimes, never };
const char* to_string(Availability a);

struct NondeterminismWarning {
  std::string event;
  std::vector<std::string> transitions;
  Marking marking;
};

struct AnalysisReport {
  std::vector<std::vector<std::int64_t>> p_invariants;
  std::vector<Marking> deadlocks;
  std::vector<std::optional<std::int64_t>> bound_per_place;  // nullopt: unbounded within horizon
  std::map<std::string, Availability> event_availability;
  bool reinitializable = false;
  bool reinitializable_sound = false;  // false when the graph was truncated
  std::vector<std::pair<std::string, std::string>> mutual_exclusions;
  std::vector<NondeterminismWarning> nondeterminism;
  std::size_t explored = 0;
  bool truncated = false;
};

inline constexpr std::size_t kMaxReportedDeadlocks = 100;

AnalysisReport analyze(const PetriNet& net, std::size_t max_states = kDefaultMaxStates,
                       std::size_t invariant_cap = kDefaultInvariantCap);

std::string format_invariant(const PetriNet& net, const std::vector<std::int64_t>& y);

}  // namespace hmiv::petri
