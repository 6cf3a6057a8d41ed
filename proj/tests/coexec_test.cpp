#include <gtest/gtest.h>

#include <algorithm>

#include "hmiv/coexec.hpp"
#include "hmiv/dsl.hpp"
#include "test_support.hpp"

using namespace hmiv;
using namespace hmiv::coexec;

namespace {

struct Loaded {
  Document doc;
  Binding binding;
};

Loaded load_text(const std::string& src) {
  Loaded l{testkit::parse_ok(src), {}};
  const auto& c = l.doc.correspondences.front();
  l.binding = bind(c, *l.doc.taskmodel(c.task_model), *l.doc.statechart(c.system));
  return l;
}

Loaded load(const std::string& fixture) { return load_text(testkit::read_file(testkit::fixture_path(fixture))); }

std::string replaced(std::string s, const std::string& from, const std::string& to) {
  const auto at = s.find(from);
  if (at == std::string::npos) throw std::runtime_error("fixture text not found: " + from);
  return s.replace(at, from.size(), to);
}

std::string fcu_text() { return testkit::read_file(testkit::fixture_path("fcu.hmi")); }

Binding bind_first(const Document& d) {
  const auto& c = d.correspondences.front();
  return bind(c, *d.taskmodel(c.task_model), *d.statechart(c.system));
}

const std::vector<std::string> kPrefix = {"obtain_info", "hear_target", "read_current", "interpret",
                                          "decide_change", "check_mode", "reach_qnh", "click_qnh"};

}  // namespace

Document fcu_doc() { return testkit::load_fixture("fcu.hmi"); }

InputBinding& binding_of(Document& d, const std::string& task) {
  for (auto& b : d.correspondences.front().inputs)
    if (b.task == task) return b;
  throw std::runtime_error("no binding " + task);
}

TEST(Bind, RejectsUnknownEvent) {
  auto d = fcu_doc();
  binding_of(d, "press_ent").event = "ENTER";
  EXPECT_THROW(bind_first(d), UnknownEvent);
}

TEST(Bind, RejectsNonInteractiveInput) {
  auto d = fcu_doc();
  d.correspondences.front().inputs.push_back(InputBinding{"reach_qnh", "ENT", {}});
  EXPECT_THROW(bind_first(d), KindMismatch);
}

TEST(Bind, RejectsUnboundInputTask) {
  auto d = fcu_doc();
  auto& in = d.correspondences.front().inputs;
  in.erase(in.begin() + 5);
  EXPECT_THROW(bind_first(d), UnboundInputTask);
}

TEST(Bind, ParserReportsTheSameProblems) {
  auto codes = [](const std::string& src) {
    std::vector<std::string> out;
    for (const auto& d : dsl::parse_document(src).diagnostics) out.push_back(d.code);
    return out;
  };
  auto has = [](const std::vector<std::string>& v, const char* c) { return std::find(v.begin(), v.end(), c) != v.end(); };
  EXPECT_TRUE(has(codes(replaced(fcu_text(), "input press_ent -> ENT;", "input press_ent -> ENTER;")), "unresolved-reference"));
  EXPECT_TRUE(has(codes(replaced(fcu_text(), "input press_ent -> ENT;", "input reach_qnh -> ENT;")), "type-error"));
  EXPECT_TRUE(has(codes(replaced(fcu_text(), "input press_ent -> ENT;", "")), "unbound-input"));
}

TEST(Bind, ShippedBindingIsValid) {
  const auto l = load("fcu.hmi");
  EXPECT_TRUE(l.binding.warnings.empty());
  ASSERT_EQ(l.binding.system_inputs.size(), 5u);
}

TEST(Divergences, NoneForTheShippedModel) {
  const auto l = load("fcu.hmi");
  const auto r = find_divergences(l.binding, 20);
  EXPECT_TRUE(r.divergences.empty());
  EXPECT_EQ(r.scenarios, 2u);
  EXPECT_TRUE(r.scenarios_complete);
  EXPECT_GT(r.co_states, 0u);
}

TEST(Divergences, MissingQnhTransitionIsReported) {
  const auto l = load("fcu-mutant-no-qnh.hmi");
  const auto r = find_divergences(l.binding, 20);
  ASSERT_FALSE(r.divergences.empty());
  const auto& d = r.divergences.front();
  EXPECT_EQ(d.kind, DivergenceKind::task_allowed_system_disabled);
  EXPECT_EQ(d.detail, "click_qnh -> qnhClick");
  EXPECT_EQ(d.trace, kPrefix);
}

TEST(Divergences, MissingUnitBranchIsReported) {
  const auto l = load("fcu-mutant-no-unit-branch.hmi");
  const auto r = find_divergences(l.binding, 20);
  ASSERT_EQ(r.divergences.size(), 1u);
  EXPECT_EQ(r.divergences[0].kind, DivergenceKind::system_allowed_task_forbidden);
  EXPECT_EQ(r.divergences[0].detail, "click_hPa");
  EXPECT_TRUE(r.divergences[0].trace.empty());
}

TEST(Costep, OutputMismatchOnMisbinding) {
  const auto l = load_text(replaced(fcu_text(), "output display_qnh <- mode = QNH;", "output display_qnh <- mode = STD;"));
  CoState cs = initial_costate(l.binding);
  for (const auto& leaf : kPrefix) {
    auto r = costep(l.binding, cs, leaf);
    ASSERT_FALSE(r.divergence) << leaf;
    cs = r.state;
  }
  cs = costep(l.binding, cs, "change_mode").state;
  const auto r = costep(l.binding, cs, "display_qnh");
  ASSERT_TRUE(r.divergence);
  EXPECT_EQ(r.divergence->kind, DivergenceKind::output_mismatch);
  EXPECT_EQ(r.divergence->trace.back(), "display_qnh");
}

TEST(Costep, DisabledLeafThrows) {
  const auto l = load("fcu.hmi");
  EXPECT_THROW(costep(l.binding, initial_costate(l.binding), "click_qnh"), task::TaskNotEnabled);
}

TEST(Costep, TaskAndSystemStayConsistent) {
  // Along every scenario the system state equals the replay of the bound
  // events of the input leaves executed so far.
  const auto l = load("fcu.hmi");
  const auto& tm = *l.binding.tasks;
  const auto& sys = *l.binding.system;
  const auto scen = task::enumerate_scenarios(tm, 20);
  for (const auto& s : scen.scenarios) {
    CoState cs = initial_costate(l.binding);
    SystemState expect = initial_state(sys);
    for (const auto& leaf : s) {
      const auto r = costep(l.binding, cs, leaf);
      ASSERT_FALSE(r.divergence);
      cs = r.state;
      const auto idx = *tm.find(leaf);
      if (l.binding.input_event[idx]) expect = step(sys, expect, *l.binding.input_event[idx]).state;
      EXPECT_EQ(cs.system, expect) << leaf;
      EXPECT_EQ(cs.task.trace.back(), leaf);
    }
    EXPECT_TRUE(task::completable(tm, cs.task));
  }
}

TEST(Tests, ScenariosPassAndReportFailures) {
  const auto l = load("fcu.hmi");
  const auto scen = task::enumerate_scenarios(*l.binding.tasks, 20).scenarios;
  auto rep = run_tests(l.binding, scen);
  ASSERT_EQ(rep.cases.size(), scen.size());
  EXPECT_EQ(rep.failures(), 0u);

  auto bad = scen;
  bad.push_back({"obtain_info", "click_qnh"});
  rep = run_tests(l.binding, bad);
  EXPECT_EQ(rep.failures(), 1u);
  EXPECT_FALSE(rep.cases.back().passed);
  EXPECT_NE(rep.cases.back().note.find("click_qnh"), std::string::npos);

  const auto empty = run_tests(l.binding, {});
  EXPECT_TRUE(empty.cases.empty());
  const auto xml = to_junit(empty);
  EXPECT_NE(xml.find("tests=\"0\""), std::string::npos);
}

TEST(Tests, JunitCarriesFailuresAndExtras) {
  const auto l = load("fcu-mutant-no-qnh.hmi");
  const auto scen = task::enumerate_scenarios(*l.binding.tasks, 20).scenarios;
  const auto rep = run_tests(l.binding, scen);
  EXPECT_EQ(rep.failures(), scen.size());
  const auto xml = to_junit(rep, {DivergenceReport{DivergenceKind::system_allowed_task_forbidden, {}, "click_hPa"}});
  EXPECT_NE(xml.find("<failure"), std::string::npos);
  EXPECT_NE(xml.find("click_hPa"), std::string::npos);
  EXPECT_NE(xml.find("task_allowed_system_disabled"), std::string::npos);
}

TEST(Divergences, TracesReplay) {
  for (const char* f : {"fcu-mutant-no-qnh.hmi", "fcu-mutant-no-unit-branch.hmi"}) {
    const auto l = load(f);
    for (const auto& d : find_divergences(l.binding, 20).divergences) {
      CoState cs = initial_costate(l.binding);
      std::optional<DivergenceReport> last;
      for (const auto& leaf : d.trace) {
        const auto r = costep(l.binding, cs, leaf);
        cs = r.state;
        last = r.divergence;
      }
      if (d.kind == DivergenceKind::task_allowed_system_disabled) {
        ASSERT_TRUE(last);
        EXPECT_EQ(*last, d);
      } else {
        const auto ev = *l.binding.system->event_index(d.detail);
        EXPECT_TRUE(step(*l.binding.system, cs.system, ev).accepted) << f;
      }
    }
  }
}
