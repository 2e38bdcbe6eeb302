#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "paoi/empirical.hpp"

using namespace paoi;

TEST(EmpiricalCdf, SingleSample) {
  const EmpiricalCdf f({3.0});
  EXPECT_EQ(f(2.999), 0.0);
  EXPECT_EQ(f(3.0), 1.0);
  EXPECT_EQ(f(10.0), 1.0);
}

TEST(EmpiricalCdf, TwoSamplesRightContinuous) {
  const EmpiricalCdf f({2.0, 1.0});
  EXPECT_EQ(f(0.5), 0.0);
  EXPECT_EQ(f(1.0), 0.5);
  EXPECT_EQ(f(1.7), 0.5);
  EXPECT_EQ(f(2.0), 1.0);
}

TEST(EmpiricalCdf, EmptyInputSignalled) {
  EXPECT_THROW(EmpiricalCdf(std::vector<double>{}), InsufficientData);
  PaoiSamples s;
  s.stage1.resize(1);
  s.e2e.resize(1);
  EXPECT_THROW(empirical_cdf(s, 0, Stage::stage1), InsufficientData);
}

TEST(KsDistance, ReferenceCases) {
  const EmpiricalCdf f({1.0, 2.0, 3.0, 4.0});
  EXPECT_EQ(ks_distance(f, [](double) { return 0.0; }), 1.0);
  EXPECT_EQ(ks_distance(f, [](double) { return 1.0; }), 1.0);
  // analytic CDF through the midpoint of every jump: floor 1/(2n)
  const double mid = ks_distance(f, [](double x) { return (x - 0.5) / 4.0; });
  EXPECT_NEAR(mid, 1.0 / 8.0, 1e-15);
  const std::vector<double> wrong_size{0.1};
  EXPECT_THROW(ks_distance(f, wrong_size), DomainError);
}

TEST(KsDistance, TiesUseTheFullJump) {
  const EmpiricalCdf f({1.0, 1.0, 1.0, 2.0});
  // F_n jumps 0 → 0.75 at 1; analytic 0.5 at 1 gives 0.5 below and 0.25 above
  EXPECT_NEAR(ks_distance(f, [](double x) { return x < 2 ? 0.5 : 1.0; }), 0.5, 1e-15);
}

TEST(KsDistance, ExponentialSelfTest) {
  std::mt19937_64 rng(2024);
  std::exponential_distribution<double> e(1.0);
  std::vector<double> xs(100000);
  for (auto& x : xs) x = e(rng);
  const double ks = ks_distance(EmpiricalCdf(xs), [](double a) { return -std::expm1(-a); });
  EXPECT_LE(ks, 0.01);
  EXPECT_GT(ks, 0.0);
}

TEST(Excursions, NoneAboveEveryPeak) {
  const std::vector<PaoiSample> trace{{1, 2.0, 0.5}, {2, 1.5, 0.4}, {3, 1.6, 0.2}};
  const auto ex = excursion_severity(trace, 3.0);
  EXPECT_TRUE(ex.empty());
  EXPECT_THROW((void)ex.cdf(1.0), InsufficientData);
  EXPECT_THROW(excursion_severity(trace, 0.0), DomainError);
}

TEST(Excursions, SinglePeak) {
  const std::vector<PaoiSample> trace{{1, 2.0, 1.0}, {5, 5.0, 1.0}, {6, 2.0, 0.5}};
  const auto ex = excursion_severity(trace, 3.0);
  ASSERT_EQ(ex.exceedances.size(), 1u);
  EXPECT_DOUBLE_EQ(ex.exceedances[0], 2.0);
  EXPECT_EQ(ex.cdf(1.9), 0.0);
  EXPECT_EQ(ex.cdf(2.0), 1.0);
}

TEST(Excursions, ResetAboveLevelExtendsExcursion) {
  // second delivery resets only to 3.5 > a, so the excursion continues
  const std::vector<PaoiSample> trace{{1, 4.0, 3.5}, {2, 4.5, 1.0}, {4, 3.2, 0.1}, {9, 3.2, 3.1}};
  const auto ex = excursion_severity(trace, 3.0);
  ASSERT_EQ(ex.exceedances.size(), 2u);
  EXPECT_DOUBLE_EQ(ex.exceedances[0], 1.5);
  EXPECT_NEAR(ex.exceedances[1], 0.2, 1e-15);
  // trailing excursion (peak 3.2, reset 3.1) is still open and discarded
}

TEST(SystemTrace, WorstUserAge) {
  PaoiSamples s;
  s.stage1 = {{{1.0, 1.0, 0.5}, {3.0, 2.5, 0.2}}, {{2.0, 2.0, 1.0}, {4.0, 3.0, 0.1}}};
  s.e2e.resize(2);
  // generation times: user0 0.5, 2.8; user1 1.0, 3.9
  const auto t = system_trace(s, Stage::stage1);
  // starts at t=2 (both delivered); min G before = 0.5 (user0 has G=0.5, user1 unset)
  // t=3: user0 moves 0.5 → 2.8, min becomes 1.0 → peak 2.5, reset 2.0
  // t=4: user1 moves 1.0 → 3.9, min becomes 2.8 → peak 3.0, reset 1.2
  ASSERT_EQ(t.size(), 2u);
  EXPECT_DOUBLE_EQ(t[0].peak, 2.5);
  EXPECT_DOUBLE_EQ(t[0].reset, 2.0);
  EXPECT_DOUBLE_EQ(t[1].peak, 3.0);
  EXPECT_NEAR(t[1].reset, 1.2, 1e-15);
}

TEST(EstimateAvg, ConstantAndAlternating) {
  const std::vector<double> c{2, 2, 2, 2};
  const Estimate e = estimate_avg(c);
  EXPECT_EQ(e.mean, 2.0);
  EXPECT_EQ(e.half_width, 0.0);
  std::vector<double> alt;
  for (int i = 0; i < 1000; ++i) alt.push_back(i % 2 ? 3.0 : 1.0);
  const Estimate a = estimate_avg(alt);
  EXPECT_DOUBLE_EQ(a.mean, 2.0);
  EXPECT_EQ(a.half_width, 0.0);  // every batch of 50 averages to 2
  EXPECT_THROW(estimate_avg(std::vector<double>{1.0}), InsufficientData);
}

TEST(EstimateAvg, HalfWidthCoversTrueMean) {
  // iid N(5, 1) in 20 batches: t_{0.975,19}·sd(batch means)/√20
  std::mt19937_64 rng(99);
  std::normal_distribution<double> n(5.0, 1.0);
  int covered = 0;
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> xs(2000);
    for (auto& x : xs) x = n(rng);
    const Estimate e = estimate_avg(xs);
    if (std::abs(e.mean - 5.0) <= e.half_width) ++covered;
  }
  EXPECT_GE(covered, 180);
  EXPECT_LE(covered, 199);
}

TEST(PoolReplications, StudentT) {
  const std::vector<double> m{1.0, 2.0, 3.0};
  const Estimate e = pool_replications(m);
  EXPECT_DOUBLE_EQ(e.mean, 2.0);
  // two degrees of freedom: t_p = (2p − 1)·sqrt(2 / (4p(1 − p)))
  const double p = 0.975, t = (2 * p - 1) * std::sqrt(2.0 / (4 * p * (1 - p)));
  EXPECT_NEAR(e.half_width, t / std::sqrt(3.0), 1e-9);
  EXPECT_EQ(pool_replications(std::vector<double>{4.0}).half_width, 0.0);
  EXPECT_THROW(pool_replications(std::vector<double>{}), InsufficientData);
}
