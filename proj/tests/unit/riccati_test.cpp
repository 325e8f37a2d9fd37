#include <gtest/gtest.h>

#include <cmath>

#include "ulamkit/errors.hpp"
#include "ulamkit/riccati.hpp"

using namespace ulamkit;

namespace {

OscillatorProblem first_example() {
  return OscillatorProblem::from_strings("e1", "t*(1-t)", "2-t", "1", "0",
                                         Interval::open(0, 1));
}

}  // namespace

TEST(Residual, ExactSolutionsPass) {
  const auto p = first_example();
  EXPECT_LT(residual_sup(p, expr::parse("-1/t")), 1e-12);
  // A wrong ρ leaves an O(1) residual.
  EXPECT_GT(residual_sup(p, expr::parse("1/t")), 1e-2);
}

TEST(Residual, ParametricSolution) {
  // x'' − a²x = 0 has the constant solutions ρ = ±a.
  auto p = OscillatorProblem::from_strings("c", "1", "0", "-a^2", "0",
                                           Interval::open(-kInf, kInf), {{"a", 1.5}});
  EXPECT_LT(residual_sup(p, expr::parse("a")), 1e-14);
  EXPECT_LT(residual_sup(p, expr::parse("-a")), 1e-14);
  EXPECT_GT(residual_sup(p, expr::parse("2*a")), 0.1);
}

TEST(RiccatiSolution, AnalyticDerivative) {
  const auto s = RiccatiSolution::analytic(expr::parse("-tan(t)-1/t"), {});
  EXPECT_EQ(s.source(), RiccatiSolution::Source::kAnalytic);
  const double t = 0.7;
  EXPECT_NEAR(s(t).real(), -std::tan(t) - 1 / t, 1e-15);
  const double sec = 1 / std::cos(t);
  EXPECT_NEAR(s.derivative(t).real(), -sec * sec + 1 / (t * t), 1e-13);
}

TEST(SolveIvp, RecoversAnalyticSolution) {
  const auto p = first_example();
  const NumericSolution n = solve_ivp(p, 0.5, Complex(-2.0));
  EXPECT_FALSE(n.lower_blowup());
  EXPECT_FALSE(n.upper_blowup());
  for (double t : {0.05, 0.2, 0.5, 0.8, 0.95}) {
    ASSERT_TRUE(n.covers(t));
    EXPECT_NEAR(n.rho(t).real(), -1 / t, 1e-8 / t) << t;
    EXPECT_NEAR(n.rho_prime(t).real(), 1 / (t * t), 1e-6 / (t * t)) << t;
  }
  const auto s = RiccatiSolution::numeric(n);
  EXPECT_LT(residual_sup(p, s), 1e-8);
}

TEST(SolveIvp, DetectsBlowUp) {
  // x'' + x = 0: ρ' = −1 − ρ², ρ(0) = 0 gives ρ = −tan t with a pole at π/2.
  const auto p = OscillatorProblem::from_strings("osc", "1", "0", "1", "0",
                                                 Interval::open(-1, 3));
  const NumericSolution n = solve_ivp(p, 0.0, Complex(0.0));
  EXPECT_TRUE(n.upper_blowup());
  EXPECT_FALSE(n.lower_blowup());
  EXPECT_NEAR(n.upper(), M_PI / 2, 1e-3);
  EXPECT_LT(n.upper(), M_PI / 2);
  EXPECT_THROW((void)n.rho(2.0), CoverageExceeded);
  EXPECT_NEAR(n.rho(0.5).real(), -std::tan(0.5), 1e-9);
}

TEST(SolveIvp, RejectsBadAnchor) {
  const auto p = first_example();
  EXPECT_THROW(solve_ivp(p, 1.5, Complex(0.0)), InvalidInput);
}
