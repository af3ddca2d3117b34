#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cli/commands.hpp"

namespace autocat::cli {
namespace {

namespace fs = std::filesystem;

const fs::path kConfigs = AUTOCAT_TEST_CONFIG_DIR;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "autocat_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

const std::string two_species = (kConfigs / "two_species.json").string();

TEST(Cli, VerifyPassAndFail) {
  EXPECT_EQ(run({"verify", "lumpability", "--config", two_species}).code, kPass);
  EXPECT_EQ(run({"verify", "master-eq", "--config", two_species, "--n-max", "15"}).code, kPass);
  const Outcome drift = run({"verify", "drift", "--config", two_species});
  EXPECT_EQ(drift.code, kPass);
  EXPECT_NE(drift.out.find("\"passed\""), std::string::npos);

  const std::string unequal = (kConfigs / "unequal_outflow.json").string();
  EXPECT_EQ(run({"verify", "lumpability", "--config", unequal}).code, kCheckFailed);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, kUsageError);
  EXPECT_EQ(run({"simulate"}).code, kUsageError);
  EXPECT_EQ(run({"simulate", "--config", "/nonexistent.json"}).code, kUsageError);
  EXPECT_EQ(run({"verify", "nonsense", "--config", two_species}).code, kUsageError);
  EXPECT_EQ(run({"verify", "drift", "--config", two_species, "--format", "csv"}).code, kUsageError);
  const std::string vol = (kConfigs / "volume_d2.json").string();
  EXPECT_EQ(run({"sweep", "--config", vol, "--volumes", ""}).code, kUsageError);
  EXPECT_EQ(run({"sweep", "--config", two_species, "--volumes", "20"}).code, kUsageError);
  EXPECT_EQ(run({"verify", "oracle", "--config", two_species, "--n", "-3"}).code, kUsageError);
}

TEST(Cli, EventCapGivesExitThree) {
  const NetworkConfig config = load_network_config(kConfigs / "two_species.json");
  RunConfig rc;
  rc.config_path = kConfigs / "two_species.json";
  rc.time = 1e6;
  rc.event_cap = 100;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_simulate(rc, config, out, err), kResourceCap);
}

TEST(Cli, SimulateIsByteIdenticalAcrossRuns) {
  const auto args = std::vector<std::string>{"simulate", "--config", two_species, "--seed",
                                             "42",       "--time",   "50"};
  const Outcome a = run(args);
  const Outcome b = run(args);
  ASSERT_EQ(a.code, kPass) << a.err;
  EXPECT_FALSE(a.out.empty());
  EXPECT_EQ(a.out, b.out);
  const auto other = run({"simulate", "--config", two_species, "--seed", "43", "--time", "50"});
  EXPECT_NE(a.out, other.out);
}

TEST(Cli, EnsembleFileAndSidecar) {
  const fs::path first = scratch("ens1.csv");
  const fs::path second = scratch("ens2.csv");
  for (const fs::path& p : {first, second}) {
    const Outcome o = run({"simulate", "--config", two_species, "--seed", "7", "--time", "20",
                           "--trajectories", "50", "--out", p.string()});
    ASSERT_EQ(o.code, kPass) << o.err;
  }
  EXPECT_EQ(slurp(first), slurp(second));
  ASSERT_TRUE(fs::exists(sidecar_path(first)));
  const std::string meta = slurp(sidecar_path(first));
  for (const char* key : {"\"seed\"", "\"version\"", "\"parameters\"", "\"argv\""}) {
    EXPECT_NE(meta.find(key), std::string::npos) << key;
  }
}

TEST(Cli, SweepOutput) {
  const std::string vol = (kConfigs / "volume_d2.json").string();
  const Outcome csv = run({"sweep", "--config", vol, "--volumes", "20,200,2000"});
  ASSERT_EQ(csv.code, kPass) << csv.err;
  EXPECT_NE(csv.out.find("boundary-concentrated"), std::string::npos);
  EXPECT_NE(csv.out.find("flat"), std::string::npos);
  EXPECT_NE(csv.out.find("interior-unimodal"), std::string::npos);
  const Outcome json = run({"sweep", "--config", vol, "--volumes", "20,200", "--format", "json"});
  ASSERT_EQ(json.code, kPass) << json.err;
  EXPECT_EQ(json.out.front(), '{');
}

TEST(Cli, DefaultInitialState) {
  const NetworkConfig config = load_network_config(kConfigs / "two_species.json");
  EXPECT_EQ(default_initial_state(config.network), (State{20, 20}));
  EXPECT_EQ(sidecar_path("a/b.csv"), fs::path("a/b.csv.meta.json"));
}

}  // namespace
}  // namespace autocat::cli
