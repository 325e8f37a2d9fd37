#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "ulamkit/corpus.hpp"
#include "ulamkit/dynamics.hpp"
#include "ulamkit/errors.hpp"

using namespace ulamkit;

TEST(Probe, SecondExampleGrowsLikeTheWitness) {
  // ξ = (ε−1)t²/6 has residual exactly ε; the solutions are −t²/6 + c1 + c2/t,
  // so the distance on [1.1, s] is the minimax of εt²/6 over span{1, 1/t}.
  const CorpusEntry e = example2();
  ProbeOptions opt;
  opt.witness = e.witness;
  const InstabilityTrace tr = instability_probe(e.problem, opt);
  EXPECT_NEAR(tr.witness_residual_sup, 1.0, 1e-9);
  ASSERT_EQ(tr.growth.size(), 3u);
  for (const auto& [s, dist] : tr.growth) {
    const double want = oracle::minimax_const_plus([](double t) { return t * t / 6; },
                                                   [](double t) { return 1 / t; }, 1.1, s);
    EXPECT_NEAR(dist, want, 1e-3 * want) << s;
  }
  EXPECT_TRUE(tr.resolved);
  EXPECT_TRUE(tr.evidenced);
  EXPECT_GT(tr.growth_factor, 1e4);
}

TEST(Probe, FifthExampleWitness) {
  const CorpusEntry e = example5();
  ProbeOptions opt;
  opt.witness = e.witness;
  const InstabilityTrace tr = instability_probe(e.problem, opt);
  EXPECT_LE(tr.witness_residual_sup, 1.0 + 1e-6);
  ASSERT_GE(tr.growth.size(), 2u);
  for (std::size_t k = 1; k < tr.growth.size(); ++k) {
    EXPECT_GT(tr.growth[k].second, tr.growth[k - 1].second);
  }
  EXPECT_TRUE(tr.evidenced);
}

TEST(Probe, StableProblemsShowNoGrowth) {
  for (const CorpusEntry& e : {example1(), example3(1.0), example4(1.0)}) {
    const InstabilityTrace tr = instability_probe(e.problem);
    EXPECT_LE(tr.witness_residual_sup, 1.0 + 1e-6) << e.id;
    EXPECT_FALSE(tr.evidenced) << e.id;
    EXPECT_LT(tr.growth_factor, 10.0) << e.id;
  }
}

TEST(Probe, ExponentialBasisIsNotEvidence) {
  const CorpusEntry e = constant_entry(1, 3, 2);
  const InstabilityTrace tr = instability_probe(e.problem);
  EXPECT_FALSE(tr.evidenced);
}

TEST(Probe, WitnessWithLargeResidualIsRejected) {
  // ξ = t² leaves 2 + 4 + 1 = 7 in x″ + (2/t)x′ + 1, far above ε = 1.
  const CorpusEntry e = example2();
  ProbeOptions opt;
  opt.witness = "t^2";
  const InstabilityTrace tr = instability_probe(e.problem, opt);
  EXPECT_GT(tr.witness_residual_sup, 1.0);
  EXPECT_FALSE(tr.evidenced);
}

TEST(Probe, RejectsNonPositiveEpsilon) {
  ProbeOptions opt;
  opt.epsilon = 0.0;
  EXPECT_THROW(instability_probe(example2().problem, opt), InvalidInput);
}
