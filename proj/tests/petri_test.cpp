#include <gtest/gtest.h>

#include <random>
#include <set>

#include "hmiv/petri.hpp"
#include "petri_oracle.hpp"
#include "test_support.hpp"

using namespace hmiv;
using namespace hmiv::petri;
namespace oracle = hmiv::testkit::petri_oracle;

namespace {

const PetriNet& barometer() {
  static const Document doc = testkit::load_fixture("fcu.hmi");
  return doc.nets.front();
}

PetriNet net_from(const char* src) {
  auto doc = testkit::parse_ok(src);
  return doc.nets.front();
}

bool has(const std::vector<std::string>& xs, const char* x) { return std::find(xs.begin(), xs.end(), x) != xs.end(); }

}  // namespace

TEST(Petri, EnabledExamples) {
  const auto& n = barometer();
  const auto en = enabled(n, initial_marking(n));
  EXPECT_TRUE(has(en, "changePressureMode_1"));
  EXPECT_TRUE(has(en, "changePressureMode_4"));
  EXPECT_FALSE(has(en, "changePressureMode_2"));
  EXPECT_FALSE(has(en, "changePressureMode_3"));
  EXPECT_FALSE(has(en, "changePressureValue"));

  auto src = net_from("petrinet N { places { a = 0 }; transition t : a -> ; transition s : -> a; }");
  EXPECT_EQ(enabled(src, initial_marking(src)), std::vector<std::string>{"s"});
}

TEST(Petri, FireExamples) {
  const auto& n = barometer();
  const auto m0 = initial_marking(n);
  const auto m1 = fire(n, m0, "changePressureMode_1");
  EXPECT_EQ(m1, make_marking(n, {{"STD", 0}, {"QNH", 1}, {"HPA", 1}, {"INHG", 0}}));
  EXPECT_EQ(fire(n, m1, "changePressureMode_2"), m1);
  EXPECT_THROW(fire(n, m0, "changePressureMode_3"), NotEnabled);
}

TEST(Petri, IncidenceMatrix) {
  const auto& n = barometer();
  const auto c = incidence_matrix(n);
  const auto t = *n.transition_index("changePressureMode_1");
  EXPECT_EQ(c[*n.place_index("STD")][t], -1);
  EXPECT_EQ(c[*n.place_index("QNH")][t], 1);
  EXPECT_EQ(c[*n.place_index("QNH")][*n.transition_index("changePressureMode_2")], 0);
  auto empty = net_from("petrinet E { places { a = 1 }; }");
  const auto ce = incidence_matrix(empty);
  ASSERT_EQ(ce.size(), 1u);
  EXPECT_TRUE(ce[0].empty());
}

TEST(Petri, InvariantExamples) {
  const auto& n = barometer();
  const auto inv = p_invariants(n);
  std::vector<std::int64_t> mode(n.places.size(), 0);
  mode[*n.place_index("STD")] = 1;
  mode[*n.place_index("QNH")] = 1;
  EXPECT_NE(std::find(inv.begin(), inv.end(), mode), inv.end());
  EXPECT_EQ(format_invariant(n, mode), "STD + QNH = 1");

  auto loop = net_from("petrinet L { places { p = 1 }; transition t : p -> p; }");
  EXPECT_EQ(p_invariants(loop), (std::vector<std::vector<std::int64_t>>{{1}}));

  auto source = net_from("petrinet S { places { p = 0, q = 1, r = 0 }; transition s : -> p; transition t : q -> r; }");
  const auto sinv = p_invariants(source);
  for (const auto& y : sinv) EXPECT_EQ(y[0], 0);
  EXPECT_EQ(oracle::compare(incidence_matrix(source), 3, sinv), "");
}

TEST(Petri, ReachabilityGraph) {
  auto frag = net_from(
      "petrinet F { places { STD = 1, QNH = 0 }; transition m1 : STD -> QNH on qnhClick; "
      "transition m2 : QNH -> QNH on qnhClick; transition m3 : QNH -> STD on stdClick; "
      "transition m4 : STD -> STD on stdClick; }");
  const auto g = reachability_graph(frag);
  EXPECT_EQ(g.nodes.size(), 2u);
  EXPECT_FALSE(g.truncated);
  const auto g2 = reachability_graph(frag);
  EXPECT_EQ(g.nodes, g2.nodes);
  ASSERT_EQ(g.edges.size(), g2.edges.size());
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    EXPECT_EQ(g.edges[i].from, g2.edges[i].from);
    EXPECT_EQ(g.edges[i].to, g2.edges[i].to);
    EXPECT_EQ(g.edges[i].transition, g2.edges[i].transition);
  }

  auto never = net_from("petrinet N { places { a = 0, b = 1 }; transition t : a -> b; }");
  const auto gn = reachability_graph(never);
  EXPECT_EQ(gn.nodes.size(), 1u);
  EXPECT_EQ(analyze(never).deadlocks.size(), 1u);

  auto producer = net_from("petrinet P { places { a = 0 }; transition t : -> a; }");
  EXPECT_TRUE(reachability_graph(producer, 100).truncated);
  const auto rp = analyze(producer, 100);
  EXPECT_TRUE(rp.truncated);
  EXPECT_FALSE(rp.reinitializable_sound);
  EXPECT_FALSE(rp.bound_per_place[0]);
}

TEST(Petri, BarometerAnalysis) {
  const auto& n = barometer();
  const auto r = analyze(n);
  EXPECT_TRUE(r.deadlocks.empty());
  EXPECT_TRUE(r.reinitializable);
  EXPECT_TRUE(r.reinitializable_sound);
  EXPECT_EQ(r.event_availability.at("qnhClick"), Availability::always);
  EXPECT_EQ(r.event_availability.at("stdClick"), Availability::always);
  EXPECT_EQ(r.event_availability.at("click_editbox"), Availability::sometimes);
  // changePressureMode_1 and _2 share qnhClick but never both fire: STD and
  // QNH are mutually exclusive.
  EXPECT_TRUE(r.nondeterminism.empty());
  EXPECT_NE(std::find(r.mutual_exclusions.begin(), r.mutual_exclusions.end(), std::pair<std::string, std::string>{"STD", "QNH"}),
            r.mutual_exclusions.end());
}

TEST(Petri, SinkDeadlockAndNondeterminism) {
  auto sink = net_from("petrinet K { places { a = 1 }; transition eat : a -> ; }");
  const auto r = analyze(sink);
  ASSERT_EQ(r.deadlocks.size(), 1u);
  EXPECT_EQ(format_marking(sink, r.deadlocks[0]), "{a:0}");

  auto nd = net_from("petrinet D { places { a = 1, b = 0 }; transition x : a -> b on e; transition y : a -> a on e; }");
  const auto rn = analyze(nd);
  ASSERT_FALSE(rn.nondeterminism.empty());
  EXPECT_EQ(rn.nondeterminism[0].event, "e");
}

TEST(Petri, FarkasMatchesOracleOnAllSmallIncidenceClasses) {
  std::uint64_t classes = 0;
  for (std::size_t places = 1; places <= 3; ++places)
    oracle::for_each_incidence_class(places, 4, [&](const IntMatrix& c) {
      ++classes;
      const auto f = farkas_invariants(c);
      const auto why = oracle::compare(c, places, f);
      ASSERT_EQ(why, "") << "places " << places << " columns " << c[0].size();
    });
  EXPECT_GT(classes, 1000u);
}

// Nets with arc weights <= 2 and tokens <= 2: p_invariants depends only on
// the incidence directions, every reported invariant is conserved over the
// reachability graph, and the oracle agrees.
TEST(Petri, RandomNetsAgreeWithOracleAndConserveTokens) {
  std::mt19937_64 rng(2024);
  for (int iter = 0; iter < 20000; ++iter) {
    const auto n = oracle::random_net(rng);
    const std::size_t places = n.places.size();
    const auto inv = p_invariants(n);
    const auto c = incidence_matrix(n);
    ASSERT_EQ(oracle::compare(c, places, inv), "") << iter;

    const auto g = reachability_graph(n, 500);
    for (const auto& y : inv) {
      std::int64_t y0 = 0;
      for (std::size_t p = 0; p < places; ++p) y0 += y[p] * n.initial[p];
      for (const auto& m : g.nodes) {
        std::int64_t ym = 0;
        for (std::size_t p = 0; p < places; ++p) {
          ASSERT_GE(m.tokens[p], 0);
          ym += y[p] * m.tokens[p];
        }
        ASSERT_EQ(ym, y0);
      }
    }
  }
}
