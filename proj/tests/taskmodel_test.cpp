#include <gtest/gtest.h>

#include "hmiv/taskmodel.hpp"
#include "task_oracle.hpp"
#include "test_support.hpp"

using namespace hmiv;
using namespace hmiv::task;

namespace {

const TaskModel& fcu_tasks() {
  static const Document d = testkit::load_fixture("fcu.hmi");
  return d.taskmodels.front();
}

TaskExecState run(const std::vector<std::string>& ids) {
  auto es = initial_exec_state(fcu_tasks());
  for (const auto& id : ids) es = execute_task(fcu_tasks(), es, id);
  return es;
}

const std::vector<std::string> kToReach = {"obtain_info", "hear_target", "read_current", "interpret",
                                           "decide_change", "check_mode", "reach_qnh"};

}  // namespace

TEST(TaskModel, InitiallyOnlyTheFirstLeaf) {
  EXPECT_EQ(enabled_tasks(fcu_tasks(), initial_exec_state(fcu_tasks())), std::vector<std::string>{"obtain_info"});
}

TEST(TaskModel, ReachQnhEnablesTheClick) {
  const auto es = run(kToReach);
  EXPECT_EQ(enabled_tasks(fcu_tasks(), es), std::vector<std::string>{"click_qnh"});
  EXPECT_EQ(status(fcu_tasks(), es, "reach_qnh"), TaskStatus::done);
  EXPECT_EQ(status(fcu_tasks(), es, "change_to_qnh"), TaskStatus::active);
  EXPECT_EQ(status(fcu_tasks(), es, "set_value"), TaskStatus::pending);
  EXPECT_THROW(execute_task(fcu_tasks(), es, "press_ent"), TaskNotEnabled);
  EXPECT_THROW(execute_task(fcu_tasks(), es, "nope"), UnknownTask);
}

TEST(TaskModel, OptionalUnitBranch) {
  auto base = kToReach;
  for (const char* t : {"click_qnh", "change_mode", "display_qnh", "check_qnh_mode", "decide_mode_ok", "check_unit"})
    base.push_back(t);
  const auto es = run(base);
  const auto en = enabled_tasks(fcu_tasks(), es);
  EXPECT_EQ(en, (std::vector<std::string>{"click_unit", "type_digit_1"}));
  const auto skipped = execute_task(fcu_tasks(), es, "type_digit_1");
  EXPECT_EQ(status(fcu_tasks(), skipped, "change_unit"), TaskStatus::skipped);
}

TEST(TaskModel, TwoCompleteScenarios) {
  const auto s = enumerate_scenarios(fcu_tasks(), 25);
  ASSERT_EQ(s.scenarios.size(), 2u);
  EXPECT_TRUE(s.complete);
  EXPECT_EQ(s.scenarios[0].size(), 20u);
  EXPECT_EQ(s.scenarios[1].size(), 18u);
  EXPECT_TRUE(completable(fcu_tasks(), run(s.scenarios[1])));
  EXPECT_FALSE(enumerate_scenarios(fcu_tasks(), 17).complete);
}

TEST(TaskModel, WorkloadOfSetBaro) {
  const auto w = workload_metrics(fcu_tasks(), "set_baro");
  EXPECT_EQ(w.leaves, 19u);
  EXPECT_EQ(w.cognitive, 3u);
  EXPECT_EQ(w.information_items_to_remember, 5u);
  EXPECT_EQ(w.count(TaskKind::interactive_input), 6u);
  EXPECT_EQ(w.count(TaskKind::interactive_output), 3u);
  EXPECT_EQ(w.count(TaskKind::perception), 5u);
  EXPECT_EQ(w.count(TaskKind::motor), 1u);
  EXPECT_EQ(w.count(TaskKind::system), 1u);
  EXPECT_EQ(workload_metrics(fcu_tasks(), "descent_prep").leaves, 20u);
  EXPECT_THROW(workload_metrics(fcu_tasks(), "nope"), UnknownTask);
}

TEST(TaskModel, ScenarioCapIsEnforced) {
  EXPECT_THROW(enumerate_scenarios(fcu_tasks(), 25, 1), ResourceLimit);
}

TEST(TaskModel, SetBaroScenariosMatchTheLanguageOracle) {
  TaskModel sub;
  sub.name = "sub";
  sub.items = fcu_tasks().items;
  sub.root = *fcu_tasks().node("set_baro");
  ASSERT_TRUE(resolve_taskmodel(sub).empty());
  const auto got = enumerate_scenarios(sub, 30);
  const auto expected = testkit::task_oracle::language(*sub.root, 30);
  EXPECT_EQ(testkit::task_oracle::Language(got.scenarios.begin(), got.scenarios.end()), expected);
  EXPECT_EQ(got.scenarios.size(), 2u);
}
