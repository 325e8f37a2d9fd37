#include <gtest/gtest.h>

#include <fstream>

#include <json.hpp>

#include "ulamkit/corpus.hpp"
#include "ulamkit/errors.hpp"
#include "ulamkit/problem_io.hpp"
#include "ulamkit/report.hpp"

using namespace ulamkit;
using nlohmann::json;

namespace {

const char* kFirst = R"json({
  "name": "e1",
  "alpha": "t*(1-t)", "beta": "2-t", "gamma": 1, "forcing": "0",
  "interval": {"lower": 0, "upper": 1},
  "rho": "-1/t",
  "tolerances": {"residual": 1e-9, "divergence_tail": 6}
})json";

}  // namespace

TEST(ProblemFile, ParsesAndRoundTrips) {
  const ProblemFile f = parse_problem(kFirst);
  EXPECT_EQ(f.problem.name, "e1");
  EXPECT_EQ(f.problem.gamma_text, "1");
  EXPECT_EQ(f.problem.domain.tau(), 0.0);
  ASSERT_TRUE(f.rho);
  EXPECT_EQ(*f.rho, "-1/t");
  ASSERT_TRUE(f.tolerances.residual);
  EXPECT_DOUBLE_EQ(*f.tolerances.residual, 1e-9);
  EXPECT_EQ(*f.tolerances.divergence_tail, 6u);

  const ProblemFile g = parse_problem(to_json(f));
  EXPECT_EQ(to_json(g), to_json(f));
  EXPECT_EQ(g.problem.alpha_text, "t*(1-t)");

  AnalysisOptions opt;
  f.tolerances.apply(opt);
  EXPECT_DOUBLE_EQ(opt.residual_tol, 1e-9);
  EXPECT_EQ(opt.divergence.tail, 6u);
}

TEST(ProblemFile, InfiniteEndpointsAndParams) {
  const ProblemFile f = parse_problem(R"json({
    "alpha": "t^(1-a)", "beta": "b*t^(-a)", "gamma": "(b-2)*t^(-1-a)",
    "forcing": "-t^(b-2)", "params": {"a": 1, "b": 2},
    "interval": {"lower": "-inf", "upper": "inf"}
  })json", "fallback");
  EXPECT_EQ(f.problem.name, "fallback");
  EXPECT_TRUE(std::isinf(f.problem.domain.tau()));
  EXPECT_EQ(f.problem.params.at("b"), 2.0);
  EXPECT_FALSE(f.rho);
}

TEST(ProblemFile, StructuralErrors) {
  const char* bad[] = {
      R"json([1,2])json",
      R"json({"alpha":"1","beta":"0","gamma":"1","forcing":"0"})json",
      R"json({"alpha":"1","beta":"0","gamma":"1","forcing":"0","interval":{"lower":0,"upper":1},"extra":1})json",
      R"json({"alpha":"1","beta":"0","gamma":"1","interval":{"lower":0,"upper":1}})json",
      R"json({"alpha":"1","beta":"0","gamma":"1","forcing":"0","interval":{"lower":1,"upper":0}})json",
      R"json({"alpha":"1","beta":"0","gamma":"1","forcing":"0","interval":{"lower":0,"upper":"oo"}})json",
      R"json({"alpha":"1","beta":"0","gamma":"1","forcing":"0","interval":{"lower":0,"upper":1},"params":{"t":1}})json",
      R"json({"alpha":"1","beta":"0","gamma":"1","forcing":"0","interval":{"lower":0,"upper":1},"tolerances":{"residual":-1}})json",
      R"json({"alpha":[1],"beta":"0","gamma":"1","forcing":"0","interval":{"lower":0,"upper":1}})json",
      "{not json",
  };
  for (const char* text : bad) EXPECT_THROW(parse_problem(text), InvalidInput) << text;
  EXPECT_THROW(
      parse_problem(R"json({"alpha":"1+","beta":"0","gamma":"1","forcing":"0","interval":{"lower":0,"upper":1}})json"),
      SyntaxError);
  EXPECT_THROW(load_problem("/nonexistent/problem.json"), InvalidInput);
}

TEST(ProblemFile, ShippedProblemsLoad) {
  for (const char* name : {"exeq01", "exeq02", "exeq03", "exeq04", "exeq05", "exeq06",
                           "const_1_3_2", "const_2_m2_m4", "const_1_m3_2"}) {
    const ProblemFile f =
        load_problem(std::string(ULAMKIT_SOURCE_DIR) + "/problems/" + name + ".json");
    EXPECT_EQ(f.problem.name, name);
    EXPECT_TRUE(f.rho) << name;
    EXPECT_TRUE(validate_problem(f.problem).empty()) << name;
  }
}

TEST(Report, DeterministicAndSorted) {
  const StabilityReport r = analyze_entry(example1(), true);
  Provenance prov;
  prov.config_hash = hex64(fnv1a("cfg"));
  const std::string a = report_json(r, prov);
  const std::string b = report_json(analyze_entry(example1(), true), prov);
  EXPECT_EQ(a, b);
  const json j = json::parse(a);
  EXPECT_EQ(j["verdict"], "best_constant");
  EXPECT_EQ(j["case"], "iii");
  EXPECT_NEAR(j["constant"]["B"].get<double>(), 0.5, 1e-8);
  EXPECT_FALSE(j["provenance"].contains("wall_time_s"));
  EXPECT_EQ(j["provenance"]["tool_version"], kVersion);
  std::string prev;
  for (const auto& [k, v] : j.items()) {
    EXPECT_LT(prev, k);
    prev = k;
  }
}

TEST(Report, NonFiniteValuesAreSpelledOut) {
  StabilityReport r;
  r.problem = "x";
  FSup f;
  f.status = FSup::Status::kUnbounded;
  f.value = kInf;
  r.f_sups["f1"] = f;
  const json j = json::parse(report_json(r, {}));
  EXPECT_EQ(j["f_sups"]["f1"]["value"], "inf");
  EXPECT_EQ(j["f_sups"]["f1"]["status"], "unbounded");
  EXPECT_TRUE(j["instability"].is_null());
}

TEST(Report, Hashing) {
  // FNV-1a reference values.
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(hex64(0xabcULL), "0000000000000abc");
}

TEST(Report, TraceCsv) {
  const std::vector<std::pair<double, double>> tr = {{0.5, 1.0}, {1.0, 2.5}};
  EXPECT_EQ(trace_csv(tr), "t,value\n0.5,1\n1,2.5\n");
  const std::vector<double> err = {1e-9, 2e-9};
  EXPECT_EQ(trace_csv(tr, &err), "t,value,error\n0.5,1,1.0000000000000001e-09\n1,2.5,2.0000000000000001e-09\n");
  const json e = json::parse(error_json("InvalidInput", "bad"));
  EXPECT_EQ(e["error"]["kind"], "InvalidInput");
}
