#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <string>

namespace {

std::string g_binary;

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args) {
  const std::string cmd = g_binary + " " + args + " 2>&1";
  std::array<char, 4096> buf{};
  RunResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return result;
  while (fgets(buf.data(), buf.size(), pipe) != nullptr) {
    result.output += buf.data();
  }
  const int status = pclose(pipe);
  result.exit_code = WEXITSTATUS(status);
  return result;
}

std::string strip_timing(std::string text) {
  static const std::regex timing("\"wall_time_ms\": [0-9.e+-]+");
  return std::regex_replace(text, timing, "\"wall_time_ms\": X");
}

TEST(Cli, GammaOnChainPair) {
  const auto r = run("gamma --instance chain --ids 0,3");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("\"gamma\": 4"), std::string::npos);
}

TEST(Cli, GammaOnEmptyIdList) {
  const auto r = run("gamma --instance chain --ids \"\"");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("\"gamma\": 0"), std::string::npos);
}

TEST(Cli, GammaUnionTaskColumn) {
  const auto r = run("gamma --instance chain --ids 2");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("\"gamma\": 1"), std::string::npos);
  EXPECT_NE(r.output.find("\"gamma_union_task\": 2"), std::string::npos);
}

TEST(Cli, EnumerateChainSizes) {
  const auto r = run("enumerate --instance chain --expand-limit 4096");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("\"family_size\": 6"), std::string::npos);
  EXPECT_NE(r.output.find("\"expanded_size\": 12"), std::string::npos);
}

TEST(Cli, SolveChainFullTrust) {
  const auto r = run("solve --instance chain --k-trust 4");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("no_trust_greedy"), std::string::npos);
  EXPECT_NE(r.output.find("\"gamma_value\": 4"), std::string::npos);
}

TEST(Cli, SolveRejectsOutOfRangeTrust) {
  const auto r = run("solve --instance chain --k-trust 9");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find("legal range"), std::string::npos);
}

TEST(Cli, GammaRejectsUnknownIds) {
  EXPECT_EQ(run("gamma --instance chain --ids 0,9").exit_code, 1);
  EXPECT_EQ(run("gamma --instance chain --ids zero").exit_code, 1);
}

TEST(Cli, UsageErrorOnBadFlags) {
  EXPECT_EQ(run("solve --no-such-flag").exit_code, 1);
  EXPECT_EQ(run("").exit_code, 1);
}

TEST(Cli, MissingInstanceFileIsDataError) {
  const auto r = run("solve --instance /nonexistent.json --k-trust 1");
  EXPECT_EQ(r.exit_code, 2);
}

TEST(Cli, ByteIdenticalReportsModuloTiming) {
  for (const std::string args :
       {std::string("enumerate --instance chain"),
        std::string("solve --instance chain --k-trust 3"),
        std::string("solve --instance chain --k-trust 3 --workers 2"),
        std::string("gamma --instance chain --ids 1,2")}) {
    const auto a = run(args);
    const auto b = run(args);
    EXPECT_EQ(a.exit_code, 0) << args;
    EXPECT_EQ(strip_timing(a.output), strip_timing(b.output)) << args;
  }
}

TEST(Cli, CsvSolveHasTheDocumentedHeader) {
  const auto r = run("solve --instance chain --k-trust 2 --format csv");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("regime,cardinality,delta,solution_ids,time_ms"),
            std::string::npos);
  EXPECT_NE(r.output.find("high_trust_exact,1,1,0,"), std::string::npos);
}

TEST(Cli, AltHeuristicRunsInTheHybridRange) {
  const auto r = run("solve --instance chain --k-trust 3 --alt-heuristic");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.output.find("bound_delta"), std::string::npos);
  const auto bad = run("solve --instance chain --k-trust 1 --alt-heuristic");
  EXPECT_EQ(bad.exit_code, 1);
}

TEST(Cli, OutFlagWritesTheReport) {
  const std::string path = "/tmp/iface_cli_test_out.json";
  std::remove(path.c_str());
  const auto r = run("gamma --instance chain --ids 0 --out " + path);
  EXPECT_EQ(r.exit_code, 0);
  std::ifstream f(path);
  ASSERT_TRUE(f.good());
  std::string content((std::istreambuf_iterator<char>(f)),
                      std::istreambuf_iterator<char>());
  EXPECT_NE(content.find("\"gamma\": 3"), std::string::npos);
  std::remove(path.c_str());
}

TEST(Cli, GridInstanceSolveNeedsTrust) {
  const auto r = run("solve --instance grid118:cfg1");
  EXPECT_EQ(r.exit_code, 1);
}

TEST(Cli, LongRunningCellsAreGated) {
  const auto r = run("solve --instance grid118:cfg4 --k-trust 42");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find("--include-long"), std::string::npos);
}

TEST(Cli, GridSingleCellReport) {
  const auto r = run("grid --config 2 --trust high --format csv");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("2,4,high_trust_exact,1,7,1,"), std::string::npos);
}

}  // namespace

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  if (argc > 1) {
    g_binary = argv[1];
  } else {
    g_binary = "./tools/iface";
  }
  return RUN_ALL_TESTS();
}
