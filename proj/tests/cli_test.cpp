#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(RRPM_CLI) + " " + args + " 2>/dev/null";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
protected:
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("rrpm_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  fs::path write_config(const std::string& extra) {
    const auto p = dir / "scenario.conf";
    std::ofstream(p) << slurp(RRPM_DEFAULT_CONFIG) << extra;
    return p;
  }

  fs::path dir;
  const std::string config = std::string("--config ") + RRPM_DEFAULT_CONFIG;
};

TEST_F(Cli, HelpExitsZero) {
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("sweep --help").code, 0);
}

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("run").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("sweep " + config + " --vary ttl=1:1:2").code, 2);
}

TEST_F(Cli, InvalidScenarioExitsTwo) {
  const auto cfg = write_config("population.participation = 0.01\n");
  // Duplicate key is a parse error before any range check.
  EXPECT_EQ(run("run --config " + cfg.string()).code, 2);
  std::ofstream(dir / "bad.conf") << "population.participation = 0.01\n";
  EXPECT_EQ(run("run --config " + (dir / "bad.conf").string()).code, 2);
  std::ofstream(dir / "unknown.conf") << "population.robots = 3\n";
  EXPECT_EQ(run("run --config " + (dir / "unknown.conf").string()).code, 2);
}

TEST_F(Cli, IoErrorsExitThree) {
  EXPECT_EQ(run("run --config " + (dir / "missing.conf").string()).code, 3);
  EXPECT_EQ(run("run " + config + " --out /nonexistent-dir/r.json").code, 3);
  EXPECT_EQ(run("plot --in " + (dir / "none.csv").string() +
                " --metric delivery --x patients --out " + (dir / "x.svg").string())
                .code,
            3);
}

TEST_F(Cli, RunPrintsResultJson) {
  const auto r = run("run " + config + " --seed 5");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["seed"], 5);
  EXPECT_EQ(j["total_messages"], 10);
  EXPECT_EQ(j["delivered_count"].get<int>() + j["expired_count"].get<int>() +
                j["live_at_end"].get<int>(),
            10);
  EXPECT_EQ(run("run " + config + " --seed 5").out, r.out);
}

TEST_F(Cli, RunWritesTraceAndEvents) {
  const auto trace = dir / "trace.csv", events = dir / "events.csv", out = dir / "r.json";
  ASSERT_EQ(run("run " + config + " --seed 1 --trace " + trace.string() + " --events " +
                events.string() + " --out " + out.string())
                .code,
            0);
  EXPECT_EQ(slurp(trace).rfind("time_min,node_id,class,state,col,row\n", 0), 0u);
  EXPECT_EQ(slurp(events).rfind("time_min,event,node_a,node_b,message_id\n", 0), 0u);
  EXPECT_EQ(nlohmann::json::parse(slurp(out))["seed"], 1);
}

TEST_F(Cli, SweepCsvIsReproducible) {
  const std::string args = "sweep " + config + " --vary participation=0.2:0.2:0.6 --seeds 0:3";
  const auto a = run(args + " --jobs 1");
  const auto b = run(args + " --jobs 4");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  std::istringstream lines(a.out);
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) ++n;
  EXPECT_EQ(n, 4);
}

TEST_F(Cli, SweepWithOneSeedFails) {
  EXPECT_EQ(run("sweep " + config + " --vary patients=2:2:4 --seeds 0:0").code, 2);
}

TEST_F(Cli, SweepOutputsAndPlot) {
  const auto csv = dir / "s.csv", json = dir / "s.json", plots = dir / "plots";
  ASSERT_EQ(run("sweep " + config + " --vary patients=2:4:10 --seeds 0:2 --out " + csv.string() +
                " --json " + json.string() + " --plots " + plots.string())
                .code,
            0);
  EXPECT_EQ(nlohmann::json::parse(slurp(json))["rows"].size(), 3u);
  EXPECT_TRUE(fs::exists(plots / "delivery_vs_patients.svg"));
  EXPECT_TRUE(fs::exists(plots / "latency_vs_patients.svg"));

  const auto svg = dir / "chart.svg";
  ASSERT_EQ(run("plot --in " + csv.string() + " --metric latency --x patients --out " + svg.string())
                .code,
            0);
  EXPECT_EQ(slurp(svg).rfind("<svg", 0), 0u);
  EXPECT_EQ(run("plot --in " + csv.string() + " --metric speed --x patients --out " + svg.string())
                .code,
            2);
}

TEST_F(Cli, RelativeOverrideFiles) {
  std::ofstream(dir / "sites.csv") << "kind,col,row\npoi,1,1\ndestination,5,5\n";
  std::ofstream(dir / "scenario2.conf") << "population.pois = 1\nplacement.sites_csv = sites.csv\n";
  EXPECT_EQ(run("run --config " + (dir / "scenario2.conf").string()).code, 0);
  std::ofstream(dir / "scenario3.conf") << "placement.sites_csv = nope.csv\n";
  EXPECT_EQ(run("run --config " + (dir / "scenario3.conf").string()).code, 3);
}

}  // namespace
