#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "ulamkit/ode.hpp"

using namespace ulamkit::ode;

TEST(Dopri5, ExponentialGrowth) {
  const Result r = dopri5([](double, const State& y, State& d) { d[0] = y[0]; }, 0.0, 2.0,
                          {1.0});
  ASSERT_EQ(r.status, Status::kCompleted);
  EXPECT_NEAR(r.y_last[0], std::exp(2.0), 1e-8 * std::exp(2.0));
  for (double t : {0.13, 0.77, 1.5, 1.999}) {
    EXPECT_NEAR(r.dense.component(t, 0), std::exp(t), 1e-8 * std::exp(t)) << t;
    EXPECT_NEAR(r.dense.derivative(t)[0], std::exp(t), 1e-6 * std::exp(t)) << t;
  }
  EXPECT_TRUE(r.dense.covers(1.0));
  EXPECT_FALSE(r.dense.covers(2.5));
}

TEST(Dopri5, BackwardHarmonicOscillator) {
  auto f = [](double, const State& y, State& d) {
    d[0] = y[1];
    d[1] = -y[0];
  };
  const Result r = dopri5(f, 3.0, -4.0, {std::sin(3.0), std::cos(3.0)});
  ASSERT_EQ(r.status, Status::kCompleted);
  EXPECT_DOUBLE_EQ(r.t_last, -4.0);
  for (double t : {2.0, 0.0, -1.3, -4.0}) {
    EXPECT_NEAR(r.dense.component(t, 0), std::sin(t), 1e-8);
    EXPECT_NEAR(r.dense.component(t, 1), std::cos(t), 1e-8);
  }
}

TEST(Dopri5, BlowUpStops) {
  // y' = y², y(0) = 1 has y = 1/(1 − t).
  Options opt;
  opt.blowup = 1e8;
  const Result r =
      dopri5([](double, const State& y, State& d) { d[0] = y[0] * y[0]; }, 0.0, 2.0, {1.0},
             opt);
  EXPECT_EQ(r.status, Status::kBlowUp);
  EXPECT_EQ(to_string(r.status), "blow_up");
  EXPECT_NEAR(r.t_last, 1.0, 1e-6);
  EXPECT_LT(r.t_last, 1.0);
}

TEST(Dopri5, SingularityWithoutThresholdCollapses) {
  const Result r =
      dopri5([](double, const State& y, State& d) { d[0] = y[0] * y[0]; }, 0.0, 2.0, {1.0});
  EXPECT_NE(r.status, Status::kCompleted);
  EXPECT_LT(r.t_last, 1.0);
}

TEST(Dopri5, RhsFailureIsReported) {
  auto f = [](double t, const State&, State& d) {
    if (t > 0.5) throw std::domain_error("outside");
    d[0] = 1.0;
  };
  const Result r = dopri5(f, 0.0, 1.0, {0.0});
  EXPECT_EQ(r.status, Status::kRhsFailure);
  EXPECT_LE(r.t_last, 0.5);
  EXPECT_NEAR(r.y_last[0], r.t_last, 1e-12);
}

TEST(Dopri5, StepBudget) {
  Options opt;
  opt.max_steps = 5;
  const Result r = dopri5(
      [](double t, const State&, State& d) { d[0] = std::cos(50 * t); }, 0.0, 10.0, {0.0}, opt);
  EXPECT_EQ(r.status, Status::kMaxSteps);
}
