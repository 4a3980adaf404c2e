#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "btrate/cli.hpp"

using btrate::cli::RunConfig;
using nlohmann::json;

namespace {

const std::string kData = BTRATE_TEST_DATA;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(const RunConfig& cfg) {
  std::ostringstream out, err;
  const int code = btrate::cli::run(cfg, out, err);
  return {code, out.str(), err.str()};
}

RunConfig fit_table1() {
  RunConfig c;
  c.command = "fit";
  c.inputs = {kData + "/table1.csv"};
  c.method = "bt";
  c.normalize = "ref:E";
  return c;
}

RunConfig compare_table2b() {
  RunConfig c;
  c.command = "compare";
  c.inputs = {kData + "/table2b.csv"};
  c.methods = {"bt", "pagerank", "scroogefactor"};
  return c;
}

RunConfig sudden_death() {
  RunConfig c;
  c.command = "simulate";
  c.scenario = "sudden-death";
  c.p = {0.6, 0.5};
  c.r = 2;
  c.n = 100000;
  c.seed = 7;
  return c;
}

std::string shell(const std::string& cmd, int* status) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, got);
  *status = pclose(pipe);
  return out;
}

}  // namespace

TEST(CliGolden, Fit) {
  const auto a = run(fit_table1());
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, slurp(BTRATE_GOLDEN "/fit_table1_bt.tsv"));
  EXPECT_EQ(run(fit_table1()).out, a.out);
}

TEST(CliGolden, Compare) {
  const auto a = run(compare_table2b());
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, slurp(BTRATE_GOLDEN "/compare_table2b.tsv"));
  EXPECT_EQ(run(compare_table2b()).out, a.out);
}

TEST(CliGolden, Simulate) {
  const auto a = run(sudden_death());
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, slurp(BTRATE_GOLDEN "/simulate_sudden_death.tsv"));
  auto j = sudden_death();
  j.format = "json";
  EXPECT_EQ(run(j).out, slurp(BTRATE_GOLDEN "/simulate_sudden_death.json"));
}

TEST(CliJson, FitCarriesEverything) {
  auto cfg = fit_table1();
  cfg.format = "json";
  const auto o = run(cfg);
  ASSERT_EQ(o.code, 0);
  const json j = json::parse(o.out);
  EXPECT_EQ(j["command"], "fit");
  EXPECT_EQ(j["method"], "bt");
  EXPECT_EQ(j["items"], json({"A", "B", "C", "D", "E"}));
  EXPECT_EQ(j["normalization"], "ref:E");
  EXPECT_EQ(j["ranks"][0], "1=");
  const std::vector<double> want{7.57, 7.57, 2.75, 1.00, 1.00};
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(j["ratings"][i].get<double>(), want[i], 0.01);
  EXPECT_EQ(j["diagnostics"]["tol"], 1e-10);
  EXPECT_EQ(j["diagnostics"]["max_iter"], 10000);
  EXPECT_TRUE(j["diagnostics"]["converged"].get<bool>());
  EXPECT_LE(std::abs(j["diagnostics"]["max_abs_residual"].get<double>()), 1e-10);
}

TEST(CliJson, SchemaIsStableAcrossInputs) {
  auto keys = [](const json& j) {
    std::vector<std::string> k;
    for (auto it = j.begin(); it != j.end(); ++it) k.push_back(it.key());
    return k;
  };
  for (const std::string method : {"bt", "pagerank", "wei-kendall", "rpi"}) {
    auto a = fit_table1();
    a.format = "json";
    a.method = method;
    auto b = a;
    b.inputs = {kData + "/table2a_results.csv"};
    b.normalize = "ref";
    const json ja = json::parse(run(a).out), jb = json::parse(run(b).out);
    EXPECT_EQ(keys(ja), keys(jb)) << method;
    EXPECT_EQ(keys(ja["diagnostics"]), keys(jb["diagnostics"])) << method;
  }
}

TEST(CliJson, CompareAllMethods) {
  auto cfg = compare_table2b();
  cfg.inputs = {kData + "/table2a.csv"};
  cfg.methods = {"bt", "pagerank", "scroogefactor", "fair-bets", "cesaro", "wei-kendall", "rpi"};
  cfg.format = "json";
  const auto o = run(cfg);
  ASSERT_EQ(o.code, 0) << o.err;
  const json j = json::parse(o.out);
  ASSERT_EQ(j["methods"].size(), 7u);
  for (std::size_t k : {0u, 2u, 3u, 4u}) {
    EXPECT_NEAR(j["methods"][k]["ratings"][0].get<double>(), 4.0, 1e-6);
    EXPECT_NEAR(j["methods"][k]["ratings"][1].get<double>(), 2.0, 1e-6);
  }
}

TEST(CliExit, InputErrors) {
  auto missing = fit_table1();
  missing.inputs = {kData + "/no_such_file.csv"};
  auto o = run(missing);
  EXPECT_EQ(o.code, 2);
  EXPECT_TRUE(o.out.empty());
  EXPECT_NE(o.err.find("cannot read"), std::string::npos);

  const auto bad = std::filesystem::temp_directory_path() / "btrate_bad.csv";
  std::ofstream(bad) << "winner,loser\nA,B\nA,A\n";
  auto malformed = fit_table1();
  malformed.inputs = {bad.string()};
  o = run(malformed);
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("line 3"), std::string::npos);
  EXPECT_TRUE(o.out.empty());

  auto method = fit_table1();
  method.method = "elo";
  EXPECT_EQ(run(method).code, 2);
  auto tol = fit_table1();
  tol.tol = 0;
  EXPECT_EQ(run(tol).code, 2);
  auto norm = fit_table1();
  norm.normalize = "ref:Z";
  EXPECT_EQ(run(norm).code, 2);
  RunConfig unknown;
  unknown.command = "plot";
  EXPECT_EQ(run(unknown).code, 2);
}

TEST(CliExit, PreconditionAndConvergence) {
  const auto tmp = std::filesystem::temp_directory_path() / "btrate_hierarchy.csv";
  std::ofstream(tmp) << "winner,loser\nA,B\nA,C\nB,C\n";
  auto reducible = fit_table1();
  reducible.inputs = {tmp.string()};
  reducible.normalize = "ref";
  auto o = run(reducible);
  EXPECT_EQ(o.code, 3);
  EXPECT_TRUE(o.out.empty());
  reducible.command = "compare";
  EXPECT_EQ(run(reducible).code, 3);

  auto slow = fit_table1();
  slow.max_iter = 2;
  o = run(slow);
  EXPECT_EQ(o.code, 4);
  EXPECT_TRUE(o.out.empty());
  EXPECT_NE(o.err.find("did not converge"), std::string::npos);
}

TEST(CliOut, WritesFileOnlyOnSuccess) {
  const auto path = std::filesystem::temp_directory_path() / "btrate_out.tsv";
  std::filesystem::remove(path);
  auto cfg = fit_table1();
  cfg.out = path.string();
  const auto o = run(cfg);
  ASSERT_EQ(o.code, 0);
  EXPECT_TRUE(o.out.empty());
  EXPECT_EQ(slurp(path.string()), slurp(BTRATE_GOLDEN "/fit_table1_bt.tsv"));

  std::filesystem::remove(path);
  cfg.max_iter = 1;
  EXPECT_EQ(run(cfg).code, 4);
  EXPECT_FALSE(std::filesystem::exists(path));
}

TEST(CliCheck, Reports) {
  RunConfig cfg;
  cfg.command = "check";
  cfg.inputs = {kData + "/table2a_results.csv"};
  auto o = run(cfg);
  ASSERT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("irreducible\ttrue"), std::string::npos);
  EXPECT_NE(o.out.find("quasi_symmetric\ttrue"), std::string::npos);
  EXPECT_NE(o.out.find("F\t22.000000\t8.000000\t4.000000"), std::string::npos);
  cfg.inputs = {kData + "/table1.csv"};
  cfg.format = "json";
  const json j = json::parse(run(cfg).out);
  EXPECT_FALSE(j["quasi_symmetric"].get<bool>());
  EXPECT_FALSE(j.contains("a"));
}

TEST(CliRace, GeometricRating) {
  RunConfig cfg;
  cfg.command = "race";
  cfg.inputs = {kData + "/races.csv"};
  cfg.format = "json";
  const auto o = run(cfg);
  ASSERT_EQ(o.code, 0) << o.err;
  const json j = json::parse(o.out);
  EXPECT_EQ(j["items"], json({"A", "B", "C", "D"}));
  double norm = 0;
  for (const auto& v : j["ratings"]) norm += v.get<double>() * v.get<double>();
  EXPECT_NEAR(norm, 1.0, 1e-14);
  EXPECT_EQ(j["ranks"][0], "1");
}

TEST(CliSimulate, EveryScenario) {
  std::vector<RunConfig> configs(5);
  for (auto& c : configs) {
    c.command = "simulate";
    c.n = 20000;
    c.format = "json";
  }
  configs[0].scenario = "poisson";
  configs[0].rates = {3, 1};
  configs[1].scenario = "accumulated";
  configs[1].strengths = {2, 1};
  configs[2].scenario = "two-state";
  configs[2].rates = {1, 2};
  configs[3].scenario = "discriminal";
  configs[3].family = "weibull";
  configs[3].shape = 2;
  configs[3].params = {2, 1};
  configs[4].scenario = "barker";
  configs[4].strengths = {3, 2, 1};
  configs[4].n = 200000;
  for (const auto& c : configs) {
    const auto o = run(c);
    ASSERT_EQ(o.code, 0) << c.scenario << ": " << o.err;
    const json j = json::parse(o.out);
    EXPECT_EQ(j["scenario"], c.scenario);
    EXPECT_EQ(j["seed"], 1);
    if (c.scenario == "barker") {
      EXPECT_LT(j["diagnostics"]["max_abs_deviation"].get<double>(), 0.02);
    } else {
      EXPECT_TRUE(j["diagnostics"]["within_4sigma"].get<bool>()) << c.scenario;
    }
  }
}

TEST(CliSimulate, ShardingIsEchoedAndDeterministic) {
  auto cfg = sudden_death();
  cfg.shards = 4;
  const auto a = run(cfg), b = run(cfg);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("shards\t4"), std::string::npos);
}

TEST(CliSimulate, BadScenario) {
  auto cfg = sudden_death();
  cfg.scenario = "penalties";
  EXPECT_EQ(run(cfg).code, 2);
  cfg = sudden_death();
  cfg.p = {0.6};
  EXPECT_EQ(run(cfg).code, 2);
  cfg = sudden_death();
  cfg.n = 0;
  EXPECT_EQ(run(cfg).code, 2);
}

TEST(CliBinary, HelpShowsDefaultsAndExitCodes) {
  int status = 0;
  const std::string help = shell(std::string(BTRATE_EXE) + " fit --help", &status);
  EXPECT_EQ(WEXITSTATUS(status), 0);
  EXPECT_NE(help.find("1e-10"), std::string::npos) << help;
  EXPECT_NE(help.find("10000"), std::string::npos);
  const std::string out =
      shell(std::string(BTRATE_EXE) + " fit " + kData + "/table1.csv --normalize ref:E", &status);
  EXPECT_EQ(WEXITSTATUS(status), 0);
  EXPECT_EQ(out, slurp(BTRATE_GOLDEN "/fit_table1_bt.tsv"));
  shell(std::string(BTRATE_EXE) + " fit --bogus 2>/dev/null", &status);
  EXPECT_EQ(WEXITSTATUS(status), 2);
  shell(std::string(BTRATE_EXE) + " fit " + kData + "/table1.csv --max-iter 1 2>/dev/null",
        &status);
  EXPECT_EQ(WEXITSTATUS(status), 4);
}
