#include <gtest/gtest.h>

#include <cmath>

#include "ulamkit/errors.hpp"
#include "ulamkit/model.hpp"

using namespace ulamkit;

TEST(Interval, Construction) {
  EXPECT_THROW(Interval::open(1, 1), InvalidInput);
  EXPECT_THROW(Interval::open(2, 1), InvalidInput);
  EXPECT_THROW(Interval({-kInf, true}, {0, false}), InvalidInput);
  EXPECT_THROW(Interval::open(NAN, 1), InvalidInput);
  const Interval closed({0, true}, {1, false});
  EXPECT_TRUE(closed.contains(0.0));
  EXPECT_FALSE(closed.contains(1.0));
  EXPECT_FALSE(Interval::open(0, 1).contains(0.0));
}

TEST(Interval, ReferencePoint) {
  EXPECT_DOUBLE_EQ(Interval::open(0, 1).reference_point(), 0.5);
  EXPECT_DOUBLE_EQ(Interval::open(1, kInf).reference_point(), 2.0);
  EXPECT_DOUBLE_EQ(Interval::open(-kInf, 3).reference_point(), 2.0);
  EXPECT_DOUBLE_EQ(Interval::open(-kInf, kInf).reference_point(), 0.0);
  EXPECT_EQ(Interval::open(0, kInf).to_string(), "(0, inf)");
}

TEST(ProbeGrid, InteriorAndCrowdsTowardEnds) {
  const auto g = probe_grid(Interval::open(0, 1));
  ASSERT_EQ(g.size(), 1024u);
  for (double t : g) {
    EXPECT_GT(t, 0.0);
    EXPECT_LT(t, 1.0);
  }
  EXPECT_LT(g.front(), 1e-4);
  EXPECT_GT(g.back(), 1 - 1e-4);
  const auto h = probe_grid(Interval::open(1, kInf));
  EXPECT_GT(h.back(), 1e3);
}

TEST(Validate, AdmissibleProblems) {
  const auto p = OscillatorProblem::from_strings("e1", "t*(1-t)", "2-t", "1", "0",
                                                 Interval::open(0, 1));
  EXPECT_TRUE(validate_problem(p).empty());
  EXPECT_TRUE(coefficients_real(p));
}

TEST(Validate, AlphaSignChangeLocated) {
  const auto p = OscillatorProblem::from_strings("bad", "t-0.3", "1", "1", "0",
                                                 Interval::open(0, 1));
  const auto v = validate_problem(p);
  ASSERT_FALSE(v.empty());
  bool found = false;
  for (const auto& x : v) {
    if (x.what == "alpha changes sign") {
      EXPECT_NEAR(x.t, 0.3, 1e-9);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(Validate, UnboundParameter) {
  const auto p = OscillatorProblem::from_strings("u", "t^(1-a)", "1", "1", "0",
                                                 Interval::open(0, 1));
  const auto v = validate_problem(p);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].what.find("'a'"), std::string::npos);
}

TEST(Validate, ComplexCoefficients) {
  const auto p = OscillatorProblem::from_strings("c", "1", "i", "1", "0",
                                                 Interval::open(0, 1));
  EXPECT_TRUE(validate_problem(p).empty());
  EXPECT_FALSE(coefficients_real(p));
}
