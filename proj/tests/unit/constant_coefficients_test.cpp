#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "ulamkit/errors.hpp"
#include "ulamkit/stability.hpp"

using namespace ulamkit;

namespace {

// Every weighted integral is a pure exponential on ℝ, so the nested kernel
// is 1/(|a0|·|Re λ1|·|Re λ2|) whichever case applies.
double expected_L(Complex a0, Complex a1, Complex a2) {
  const auto [l1, l2] = oracle::roots(a0, a1, a2);
  return 1.0 / (std::abs(a0) * std::abs(l1.real()) * std::abs(l2.real()));
}

}  // namespace

TEST(ConstantCoefficients, RootsMatchSchoolbookFormula) {
  for (auto [a0, a1, a2] : {std::tuple{1.0, 3.0, 2.0}, {2.0, -2.0, -4.0}, {1.0, -3.0, 2.0},
                            {1.0, 2.0, 5.0}, {3.0, 1e4, 1.0}}) {
    const auto r = constant_coefficients(a0, a1, a2);
    const auto [l1, l2] = oracle::roots(a0, a1, a2);
    EXPECT_NEAR(std::abs(r.roots.lambda1 - l1), 0.0, 1e-9 * std::abs(l1));
    // The small root loses digits to cancellation in the schoolbook form.
    EXPECT_NEAR(std::abs(r.roots.lambda2 - l2), 0.0, 1e-6 * std::abs(l2) + 1e-12);
    EXPECT_GE(r.roots.lambda1.real(), r.roots.lambda2.real());
  }
}

TEST(ConstantCoefficients, CasesAndConstants) {
  struct Row {
    double a0, a1, a2;
    Case c;
  };
  for (const Row& row : {Row{1, 3, 2, Case::kIII}, Row{2, -2, -4, Case::kII},
                         Row{1, -3, 2, Case::kI}, Row{4, 4, 1, Case::kIII}}) {
    const auto r = constant_coefficients(row.a0, row.a1, row.a2);
    EXPECT_EQ(r.selected, row.c) << row.a0 << "," << row.a1 << "," << row.a2;
    ASSERT_TRUE(r.L && r.B);
    const double want = expected_L(row.a0, row.a1, row.a2);
    EXPECT_NEAR(*r.L, want, 1e-12 * want);
    EXPECT_NEAR(*r.B, want, 1e-12 * want);
  }
}

TEST(ConstantCoefficients, ComplexRootsHaveNoBestConstant) {
  // λ = −1 ± 2i.
  const auto r = constant_coefficients(1, 2, 5);
  EXPECT_EQ(r.selected, Case::kIII);
  ASSERT_TRUE(r.L);
  EXPECT_NEAR(*r.L, expected_L(1, 2, 5), 1e-12);
  EXPECT_FALSE(r.B);
}

TEST(ConstantCoefficients, PurelyOscillatoryIsNotCovered) {
  const auto r = constant_coefficients(1, 0, 1);
  EXPECT_EQ(r.selected, Case::kNone);
  EXPECT_FALSE(r.L);
  EXPECT_FALSE(r.B);
}

TEST(ConstantCoefficients, DegenerateLeadingCoefficient) {
  EXPECT_THROW(constant_coefficients(0, 1, 1), DegenerateLeadingCoefficient);
}

TEST(ConstantCoefficients, QuadratureAgreesWithClosedForm) {
  for (auto [a0, a1, a2] : {std::tuple{1.0, 3.0, 2.0}, {2.0, -2.0, -4.0}, {1.0, -3.0, 2.0}}) {
    const TruncatedProblem tp = constant_coefficient_problem(a0, a1, a2);
    const auto cc = constant_coefficients(a0, a1, a2);
    const AnalysisContext ctx(tp.problem, RiccatiSolution::analytic(tp.rho, {}));
    EXPECT_EQ(classify(ctx).selected, cc.selected);
    const double want = expected_L(a0, a1, a2);
    EXPECT_NEAR(best_constant(ctx, cc.selected).B, want, 1e-9 * want);
  }
}
