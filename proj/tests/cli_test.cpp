#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "hmiv/cli.hpp"
#include "hmiv/server.hpp"
#include "test_support.hpp"

using namespace hmiv;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& input = {}) {
  std::ostringstream out, err;
  std::istringstream in(input);
  Run r;
  r.code = cli::run_cli(args, out, err, in);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string fx(const char* name) { return testkit::fixture_path(name); }

bool has(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

std::string temp_file(const std::string& name, const std::string& content) {
  const auto p = std::filesystem::temp_directory_path() / name;
  testkit::write_file(p.string(), content);
  return p.string();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(Cli, UsageErrorsExitThree) {
  EXPECT_EQ(run({}).code, cli::kInputError);
  EXPECT_EQ(run({"bogus"}).code, cli::kInputError);
  EXPECT_EQ(run({"check", "/nonexistent.hmi"}).code, cli::kInputError);
  EXPECT_EQ(run({"check", fx("fcu.hmi"), "--depth", "x"}).code, cli::kInputError);
  EXPECT_EQ(run({"--help"}).code, cli::kOk);
}

TEST(Cli, InvalidModelPrintsDiagnostics) {
  const auto r = run({"check", temp_file("hmiv_cli_bad.hmi", "statechart S { modes { A }; initial B; }")});
  EXPECT_EQ(r.code, cli::kInputError);
  EXPECT_TRUE(has(r.err, "1:"));
}

TEST(Cli, CheckSingleProperty) {
  auto r = run({"check", fx("fcu.hmi"), "--property", "alwayschgmode"});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_TRUE(has(r.out, "property alwayschgmode [inductive]: holds (inductive_exhaustive"));
  EXPECT_TRUE(has(r.out, "summary: 1 hold, 0 violated, 0 unknown"));

  r = run({"check", fx("fcu-mutant-digit-flips-units.hmi"), "--property", "modeinvariant"});
  EXPECT_EQ(r.code, cli::kViolated);
  EXPECT_TRUE(has(r.out, "event: digit_5"));
  EXPECT_TRUE(has(r.out, "replay: confirmed"));

  r = run({"check", fx("fcu.hmi"), "--property", "nope"});
  EXPECT_EQ(r.code, cli::kInputError);
}

TEST(Cli, CheckJsonIsParseable) {
  const auto r = run({"check", fx("fcu.hmi"), "--property", "alwayschgmode", "--json"});
  EXPECT_EQ(r.code, cli::kOk);
  const auto j = json::Json::parse(r.out);
  EXPECT_TRUE(j.is_object());
}

TEST(Cli, SimulateScriptTranscript) {
  const auto r = run({"simulate", fx("fcu.hmi"), "--script", fx("fcu-990.script")});
  EXPECT_EQ(r.code, cli::kOk);
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 8u);
  EXPECT_EQ(l[0], "# initial\tSTD\tSTD");
  EXPECT_EQ(l[1], "qnhClick\taccepted\tQNH\t1013 hPa");
  EXPECT_EQ(l[5], "ENT\taccepted\tQNH\t990 hPa");
  EXPECT_EQ(l[6], "# final\tQNH\t990 hPa");
}

TEST(Cli, SimulateIsDeterministic) {
  const auto a = run({"simulate", fx("fcu.hmi"), "--script", fx("fcu-990.script")});
  const auto b = run({"simulate", fx("fcu.hmi"), "--script", fx("fcu-990.script")});
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, SimulateEdgeScripts) {
  auto r = run({"simulate", fx("fcu.hmi"), "--script", temp_file("hmiv_cli_empty.script", "# nothing\n\n")});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_EQ(lines(r.out).size(), 3u);

  r = run({"simulate", fx("fcu.hmi"), "--script", temp_file("hmiv_cli_twice.script", "qnhClick\nqnhClick\n")});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_TRUE(has(r.out, "qnhClick\tignored\tQNH\t1013 hPa"));

  r = run({"simulate", fx("fcu.hmi"), "--script", temp_file("hmiv_cli_unknown.script", "qnhClick\nfoo\n")});
  EXPECT_EQ(r.code, cli::kInputError);
  EXPECT_TRUE(has(r.err, "foo"));

  r = run({"simulate", fx("fcu.hmi"), "--script", temp_file("hmiv_cli_tick.script", "qnhClick\ndigit_9\ntick 5000\n")});
  EXPECT_TRUE(has(r.out, "tick 5000\ttimeout:accepted\tQNH\t1013 hPa"));
}

TEST(Cli, SimulateInteractive) {
  const auto r = run({"simulate", fx("fcu.hmi"), "--interactive"}, "qnhClick\n?\nquit\n");
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_TRUE(has(r.out, "qnhClick\taccepted\tQNH\t1013 hPa"));
  EXPECT_TRUE(has(r.out, "digit_9"));
}

TEST(Cli, Coexec) {
  auto r = run({"coexec", fx("fcu.hmi")});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_TRUE(has(r.out, "0 divergences"));

  const auto junit = (std::filesystem::temp_directory_path() / "hmiv_cli_junit.xml").string();
  r = run({"coexec", fx("fcu-mutant-no-qnh.hmi"), "--junit", junit});
  EXPECT_EQ(r.code, cli::kViolated);
  EXPECT_TRUE(has(r.out, "task_allowed_system_disabled: click_qnh -> qnhClick"));
  EXPECT_TRUE(has(testkit::read_file(junit), "<testsuite"));
}

TEST(Cli, Workload) {
  const auto r = run({"workload", fx("fcu.hmi"), "--scope", "set_baro"});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_TRUE(has(r.out, "leaves: 19"));
  EXPECT_TRUE(has(r.out, "cognitive tasks: 3"));
  EXPECT_TRUE(has(r.out, "information items to remember: 5"));
  EXPECT_EQ(run({"workload", fx("fcu.hmi"), "--scope", "nope"}).code, cli::kInputError);
}

TEST(Cli, Petri) {
  const auto r = run({"petri", fx("fcu.hmi")});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_TRUE(has(r.out, "STD + QNH = 1"));
  EXPECT_TRUE(has(r.out, "HPA + INHG = 1"));
  EXPECT_TRUE(has(r.out, "deadlocks: none"));
}

TEST(Cli, ExportJson) {
  const auto r = run({"export-json", fx("fcu.hmi"), "--compact"});
  EXPECT_EQ(r.code, cli::kOk);
  const auto j = json::Json::parse(r.out);
  EXPECT_EQ(j["statecharts"][0]["name"], "FCU");
  EXPECT_EQ(j["nets"][0]["name"], "Barometer");
}

TEST(Cli, ServeOnOccupiedPortExitsFour) {
  service::ServerOptions o;
  o.port = 0;
  service::Server holder(o);
  const auto r = run({"serve", "--port", std::to_string(holder.port()), "--root", HMIV_FIXTURES});
  EXPECT_EQ(r.code, cli::kBindError);
}
