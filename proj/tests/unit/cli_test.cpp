#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "ulamkit/errors.hpp"

using namespace ulamkit;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string problem(const std::string& name) {
  return std::string(ULAMKIT_SOURCE_DIR) + "/problems/" + name + ".json";
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ulamkit_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST(Cli, ExitCodeMapping) {
  EXPECT_EQ(cli::exit_code(Verdict::kStableWithConstant), 0);
  EXPECT_EQ(cli::exit_code(Verdict::kBestConstant), 0);
  EXPECT_EQ(cli::exit_code(Verdict::kInconclusive), 2);
  EXPECT_EQ(cli::exit_code(Verdict::kInstabilityEvidence), 3);
}

TEST(Cli, SolveRhoSpec) {
  const auto s = cli::parse_solve_rho("t0=0.5,rho0=-2");
  EXPECT_DOUBLE_EQ(s.t0, 0.5);
  EXPECT_EQ(s.rho0, Complex(-2.0));
  EXPECT_EQ(cli::parse_solve_rho("t0=1, rho0=0, rho0_im=3").rho0, Complex(0, 3));
  EXPECT_THROW(cli::parse_solve_rho("t0=1"), InvalidInput);
  EXPECT_THROW(cli::parse_solve_rho("t0=x,rho0=1"), InvalidInput);
  EXPECT_THROW(cli::parse_solve_rho("t0=1,rho0=1,zz=2"), InvalidInput);
}

TEST(Cli, AnalyzeVerdicts) {
  Outcome r = run({"analyze", problem("exeq01"), "--best", "--reproducible"});
  EXPECT_EQ(r.code, 0) << r.err;
  json j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "best_constant");
  EXPECT_NEAR(j["constant"]["B"].get<double>(), 0.5, 1e-8);

  r = run({"analyze", problem("exeq02")});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(json::parse(r.out)["verdict"], "instability_evidence");

  r = run({"analyze", problem("exeq02"), "--no-probe"});
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, ReproducibleReportsAreByteIdentical) {
  const Outcome a = run({"analyze", problem("exeq03"), "--best", "--reproducible"});
  const Outcome b = run({"analyze", problem("exeq03"), "--best", "--reproducible"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_FALSE(json::parse(a.out)["provenance"].contains("wall_time_s"));
  const Outcome c = run({"analyze", problem("exeq03"), "--best"});
  EXPECT_TRUE(json::parse(c.out)["provenance"].contains("wall_time_s"));
}

TEST(Cli, FastPath) {
  const Outcome r = run({"analyze", problem("const_2_m2_m4"), "--fast-path", "--best"});
  EXPECT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["case"], "ii");
  EXPECT_NEAR(j["constant"]["B"].get<double>(), 0.25, 1e-14);
  EXPECT_EQ(run({"analyze", problem("exeq01"), "--fast-path"}).code, 1);
}

TEST(Cli, SolveRhoNumerically) {
  const Outcome r = run({"analyze", problem("exeq01"), "--best", "--solve-rho", "t0=0.5,rho0=-2"});
  EXPECT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["diagnostics"]["rho_source"], "numeric");
  EXPECT_NEAR(j["constant"]["B"].get<double>(), 0.5, 1e-6);
}

TEST(Cli, InputErrors) {
  Outcome r = run({"analyze", "/nonexistent.json"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(json::parse(r.err)["error"]["kind"], "InvalidInput");
  EXPECT_EQ(run({"empirical", problem("exeq01"), "--epsilon", "0"}).code, 1);
  EXPECT_EQ(run({"empirical", problem("exeq01"), "--epsilon", "-1"}).code, 1);
  EXPECT_EQ(run({"bogus"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"analyze", problem("exeq01"), "--solve-rho", "t0=2,rho0=0"}).code, 1);
}

TEST(Cli, EmpiricalWritesArtifacts) {
  const fs::path dir = scratch("empirical");
  const Outcome r = run({"empirical", problem("exeq01"), "--trials", "4", "--seed", "3",
                     "--reproducible", "--out", dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  ASSERT_TRUE(fs::exists(dir / "exeq01.report.json"));
  EXPECT_TRUE(fs::exists(dir / "exeq01.extremal.csv"));
  EXPECT_TRUE(fs::exists(dir / "exeq01.random.csv"));
  std::ifstream in(dir / "exeq01.report.json");
  const json j = json::parse(in);
  const json& e = j["empirical"];
  EXPECT_NEAR(e["extremal"]["ratio"].get<double>(), 0.5, 1e-6);
  EXPECT_EQ(e["random"]["trials"], 4);
  EXPECT_EQ(e["random"]["ratios"].size(), 4u);
  EXPECT_LE(e["random"]["max_ratio"].get<double>(), 0.5 * 1.02);
  fs::remove_all(dir);
}

TEST(Cli, EmpiricalWithoutConstant) {
  EXPECT_EQ(run({"empirical", problem("exeq02"), "--trials", "2"}).code, 2);
}

TEST(Cli, ConfigFile) {
  const fs::path dir = scratch("config");
  {
    std::ofstream cfg(dir / "cfg.json");
    cfg << R"json({"best": true, "reproducible": true, "probe": false})json";
  }
  const Outcome a = run({"analyze", problem("exeq01"), "--config", (dir / "cfg.json").string()});
  EXPECT_EQ(a.code, 0) << a.err;
  const json j = json::parse(a.out);
  EXPECT_EQ(j["verdict"], "best_constant");
  const Outcome b = run({"analyze", problem("exeq01"), "--best", "--reproducible"});
  EXPECT_NE(j["provenance"]["config_hash"], json::parse(b.out)["provenance"]["config_hash"]);
  {
    std::ofstream cfg(dir / "bad.json");
    cfg << R"json({"nonsense": 1})json";
  }
  EXPECT_EQ(run({"analyze", problem("exeq01"), "--config", (dir / "bad.json").string()}).code,
            1);
  fs::remove_all(dir);
}

TEST(Cli, CorpusList) {
  const Outcome r = run({"corpus", "list"});
  EXPECT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string line;
  int rows = -1;  // header
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 9);
  const Outcome s = run({"corpus", "list", "--sweeps"});
  EXPECT_NE(s.out.find("exeq04(sigma=1.5)"), std::string::npos);
}

TEST(Cli, RiccatiCheck) {
  Outcome r = run({"riccati-check", problem("exeq04")});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(json::parse(r.out)["passed"].get<bool>());
  r = run({"riccati-check", problem("exeq01"), "--solve-rho", "t0=0.5,rho0=-2"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_FALSE(json::parse(r.out)["upper_blowup"].get<bool>());
}
