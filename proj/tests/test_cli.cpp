#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"

using namespace cyclproj;
using namespace cyclproj::cli;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "cyclproj_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

RunConfig tripod_config(std::size_t n = 100) {
  RunConfig c;
  c.scenario = "tripod";
  c.start = "endpoint";
  c.n = n;
  c.out = "-";
  return c;
}

TEST(Cli, RunTripodReportsUnitSteps) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run(tripod_config(), out, err), kOk) << err.str();
  EXPECT_NE(out.str().find("verdict=NotRegular"), std::string::npos) << out.str();
  EXPECT_NE(out.str().find(" r=1 "), std::string::npos) << out.str();
  const auto line = out.str().substr(out.str().find('\n') + 1);
  const auto j = nlohmann::json::parse(line);
  EXPECT_EQ(j["verdict"], "NotRegular");
  EXPECT_NEAR(j["final_r"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(j["sums"]["r_sq"].get<double>(), 100.0, 1e-9);
}

TEST(Cli, RunWritesCsvTrace) {
  auto c = tripod_config(10);
  c.out = scratch("tripod.csv").string();
  std::ostringstream out, err;
  ASSERT_EQ(cmd_run(c, out, err), kOk);
  std::ifstream in(c.out);
  const auto table = read_csv(in);
  EXPECT_EQ(table.header.size(), 9u);
  EXPECT_EQ(table.n.size(), 11u);
}

TEST(Cli, RunWritesJsonTrace) {
  auto c = tripod_config(4);
  c.format = "json";
  c.out = scratch("tripod.json").string();
  std::ostringstream out, err;
  ASSERT_EQ(cmd_run(c, out, err), kOk);
  std::ifstream in(c.out);
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["trace"].size(), 5u);
  EXPECT_EQ(j["trace"][0]["x"].size(), 4u);
}

TEST(Cli, DefaultOutputUsesEnvironmentDirectory) {
  const auto dir = scratch("envdir");
  ::setenv(kOutputDirEnv, dir.c_str(), 1);
  auto c = tripod_config(3);
  c.out.clear();
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run(c, out, err), kOk);
  EXPECT_TRUE(std::filesystem::exists(dir / "tripod.csv"));
  ::unsetenv(kOutputDirEnv);
}

TEST(Cli, RunExplicitStart) {
  auto c = tripod_config(5);
  c.start.clear();
  c.at = {0, 0.5, 0, 0.5};
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run(c, out, err), kOk);
  const auto j = nlohmann::json::parse(out.str().substr(out.str().find('\n') + 1));
  EXPECT_LT(j["final_r"].get<double>(), 1e-12);
  c.at = {0, 0.5};
  EXPECT_EQ(cmd_run(c, out, err), kUsage);
}

TEST(Cli, UsageErrors) {
  std::ostringstream out, err;
  auto c = tripod_config();
  c.scenario = "nope";
  EXPECT_EQ(cmd_run(c, out, err), kUsage);
  EXPECT_NE(err.str().find("unknown scenario"), std::string::npos);
  c = tripod_config();
  c.start = "nowhere";
  EXPECT_EQ(cmd_run(c, out, err), kUsage);
  c = tripod_config();
  c.params.k = 2;
  EXPECT_EQ(cmd_run(c, out, err), kUsage);
  EXPECT_EQ(cmd_verify("nonsense", out, err), kUsage);
  EXPECT_EQ(cmd_rate(tripod_config(), out, err), kUsage);  // no window
}

TEST(Cli, NumericalFailureExitCode) {
  RunConfig c;
  c.scenario = "plane-two-sets";
  c.params.epsilon = 1.0;
  c.at = {1e300, 0.0};
  c.out = "-";
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run(c, out, err), kNumerical);
  EXPECT_NE(out.str().find("ABORTED"), std::string::npos);
}

TEST(Cli, VerifyCounterexamples) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_verify("counterexamples", out, err), kOk) << out.str();
  EXPECT_NE(out.str().find("PASS counterexamples/tripod-endpoint-swap"), std::string::npos) << out.str();
}

TEST(Cli, RateOnTripodIsFlat) {
  auto c = tripod_config();
  c.window = std::make_pair<std::size_t, std::size_t>(1, 50);
  std::ostringstream out, err;
  ASSERT_EQ(cmd_rate(c, out, err), kOk) << err.str();
  const auto text = out.str();
  const auto pos = text.find("slope=");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_NEAR(std::stod(text.substr(pos + 6)), 0.0, 1e-9);
}

TEST(Cli, RateFromCsvFixture) {
  const auto path = scratch("power.csv");
  {
    std::ofstream f(path);
    f.precision(17);
    f << "n,r\n";
    for (int n = 1; n <= 200; n += 3) f << n << ',' << 2.0 * std::pow(n, -0.75) << '\n';
  }
  std::ostringstream out, err;
  ASSERT_EQ(cmd_rate_csv(path.string(), {1, 200}, out, err), kOk) << err.str();
  const auto text = out.str();
  EXPECT_NEAR(std::stod(text.substr(text.find("slope=") + 6)), -0.75, 1e-12);
  EXPECT_TRUE(err.str().empty()) << err.str();
  EXPECT_EQ(cmd_rate_csv(scratch("missing.csv").string(), {1, 2}, out, err), kUsage);
}

TEST(Cli, EmptySweepIsEmptyArray) {
  RunConfig base;
  base.scenario = "plane-two-lines";
  std::ostringstream out, err;
  EXPECT_EQ(cmd_sweep(base, {}, out, err), kOk);
  EXPECT_EQ(nlohmann::json::parse(out.str()), nlohmann::json::array());
}

TEST(Cli, AlphaSweepMatchesChordLength) {
  RunConfig base;
  base.scenario = "twisted-chain";
  base.n = 200;
  std::ostringstream out, err;
  ASSERT_EQ(cmd_sweep(base, {"alpha=0.5,1,2"}, out, err, 2), kOk) << err.str();
  const auto j = nlohmann::json::parse(out.str());
  ASSERT_EQ(j.size(), 3u);
  const double alphas[] = {0.5, 1.0, 2.0};
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(j[i]["index"], i);
    EXPECT_EQ(j[i]["verdict"], "NotRegular");
    EXPECT_NEAR(j[i]["liminf_r"].get<double>(), 0.2 * std::sin(alphas[i] / 2), 1e-9);
  }
}

TEST(Cli, EpsilonSweepSlopesSteepenWithEpsilon) {
  RunConfig base;
  base.scenario = "plane-two-sets";
  base.n = 20001;
  base.window = std::make_pair<std::size_t, std::size_t>(2000, 20000);
  std::ostringstream out, err;
  ASSERT_EQ(cmd_sweep(base, {"epsilon=0.25,0.5,1"}, out, err), kOk) << err.str();
  const auto j = nlohmann::json::parse(out.str());
  ASSERT_EQ(j.size(), 3u);
  EXPECT_GT(j[0]["slope"].get<double>(), j[1]["slope"].get<double>());
  EXPECT_GT(j[1]["slope"].get<double>(), j[2]["slope"].get<double>());
}

TEST(Cli, SweepIsIndependentOfJobCount) {
  RunConfig base;
  base.scenario = "plane-two-sets";
  base.n = 500;
  const std::vector<std::string> grid{"epsilon=0.25,0.5,0.75,1", "n=100,300"};
  std::ostringstream one, four, err;
  ASSERT_EQ(cmd_sweep(base, grid, one, err, 1), kOk);
  ASSERT_EQ(cmd_sweep(base, grid, four, err, 4), kOk);
  EXPECT_EQ(one.str(), four.str());
  const auto j = nlohmann::json::parse(one.str());
  ASSERT_EQ(j.size(), 8u);
  EXPECT_EQ(j[1]["n"], 300);  // last axis varies fastest
  EXPECT_DOUBLE_EQ(j[2]["params"]["epsilon"].get<double>(), 0.5);
}

TEST(Cli, SweepRejectsUnknownParameter) {
  RunConfig base;
  base.scenario = "tripod";
  std::ostringstream out, err;
  EXPECT_EQ(cmd_sweep(base, {"bogus=1,2"}, out, err), kUsage);
  EXPECT_EQ(cmd_sweep(base, {"k=abc"}, out, err), kUsage);
}

TEST(Cli, ConfigEntriesYieldToFlags) {
  std::istringstream cfg("# defaults\nn = 50\nepsilon=0.25\ngeneric=true\nwindow = 10 40\n");
  const auto kv = read_config(cfg);
  EXPECT_EQ(kv.at("n"), "50");
  const auto args = merge_config({"run", "plane-two-sets", "--n", "7"}, kv, {"generic"});
  const std::vector<std::string> expected{"run", "plane-two-sets", "--n", "7", "--epsilon", "0.25",
                                          "--generic", "--window", "10", "40"};
  EXPECT_EQ(args, expected);
  std::istringstream bad("novalue\n");
  EXPECT_THROW(read_config(bad), UsageError);
}

}  // namespace
