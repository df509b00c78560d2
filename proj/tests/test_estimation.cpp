#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "oracle.hpp"
#include "ospf_rqa/estimation.hpp"

using namespace ospf_rqa;

namespace {

std::vector<double> sine(double period, std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t) x[t] = std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / period);
  return x;
}

}  // namespace

// Plug-in MI on independent samples is biased upward by roughly
// (bins-1)^2 / (2N) = 0.11 nats here, so the values sit near that, not near 0.
TEST(MutualInformation, UniformNoiseMatchesOracleAndBias) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<> u;
  std::vector<double> x(1000);
  for (auto& v : x) v = u(rng);
  const auto mi = mutual_information(Series(x), 20, 16);
  for (int tau = 1; tau <= 20; ++tau) {
    const double v = mi.at(tau);
    EXPECT_NEAR(v, oracle::mutual_information(x, tau, 16), 1e-12);
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 0.2);
  }
}

// Perfect dependence: MI equals the entropy of the marginal histogram.
TEST(MutualInformation, ExactCopyEqualsMarginalEntropy) {
  std::vector<double> x(64);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i % 2);
  const auto mi = mutual_information(Series(x), 2, 16);
  // x_{t+2} = x_t; the pairs cover 62 points, 31 of each value.
  EXPECT_NEAR(mi.at(2), std::log(2.0), 1e-12);
}

// An integer-period sine has only 20 distinct values, so MI is flat to about
// 1e-3 between tau=2 and tau=8; the first minimum is at tau=3.
TEST(MutualInformation, SineCurveMatchesOracle) {
  const auto x = sine(20.0, 1000);
  const auto mi = mutual_information(Series(x), 15);
  std::vector<double> ref;
  for (int tau = 1; tau <= 15; ++tau) {
    ref.push_back(oracle::mutual_information(x, tau, 16));
    EXPECT_NEAR(mi.at(tau), ref.back(), 1e-12);
  }
  const auto tau = estimate_delay(mi.values);
  EXPECT_FALSE(tau.fallback);
  EXPECT_EQ(tau.tau, 3);
  EXPECT_EQ(estimate_delay(ref).tau, 3);
}

TEST(MutualInformation, ConstantSeriesFlagsDegenerate) {
  const auto mi = mutual_information(Series(std::vector<double>(30, 2.0)), 5);
  EXPECT_TRUE(mi.degenerate);
  for (double v : mi.values) EXPECT_EQ(v, 0.0);
}

TEST(MutualInformation, TooShort) {
  EXPECT_THROW(mutual_information(Series({1, 2, 3}), 2), SizingError);
}

TEST(EstimateDelay, DefinitionExamples) {
  const std::vector<double> dip{3, 1, 2, 2};
  EXPECT_EQ(estimate_delay(dip).tau, 2);
  EXPECT_FALSE(estimate_delay(dip).fallback);
  const std::vector<double> falling{5, 4, 3, 2, 1};
  EXPECT_EQ(estimate_delay(falling).tau, 1);
  EXPECT_TRUE(estimate_delay(falling).fallback);
}

TEST(EstimateDelay, FirstPointCountsAgainstInfinity) {
  const std::vector<double> rising{1, 2, 3};
  EXPECT_EQ(estimate_delay(rising).tau, 1);
  EXPECT_FALSE(estimate_delay(rising).fallback);
}

TEST(Fnn, SineUnfoldsAtTwo) {
  const auto fnn = false_nearest_neighbors(Series(sine(25.0, 1000)), 6, 4);
  EXPECT_LT(fnn[1], 0.01);
}

TEST(Fnn, WhiteNoiseStaysHigh) {
  std::mt19937_64 rng(11);
  std::normal_distribution<> g;
  std::vector<double> x(1000);
  for (auto& v : x) v = g(rng);
  const auto fnn = false_nearest_neighbors(Series(x), 1, 10);
  for (double f : fnn) EXPECT_GT(f, 0.1);
}

TEST(Fnn, ConstantSeriesHasNoFalseNeighbours) {
  const auto fnn = false_nearest_neighbors(Series(std::vector<double>(40, 1.0)), 1, 5);
  for (double f : fnn) EXPECT_EQ(f, 0.0);
}

TEST(Fnn, FractionsAreProbabilities) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x(80);
    for (auto& v : x) v = static_cast<double>(rng() % 3);
    for (double f : false_nearest_neighbors(Series(x), 1 + static_cast<int>(rng() % 2), 5)) {
      EXPECT_GE(f, 0.0);
      EXPECT_LE(f, 1.0);
    }
  }
}

// Brute-force restatement of the two criteria on a small series.
TEST(Fnn, MatchesDirectComputation) {
  const std::vector<double> x{0, 1, 3, 2, 5, 4, 4, 0, 2, 6, 1, 3};
  const int tau = 1;
  const auto fnn = false_nearest_neighbors(Series(x), tau, 3);
  double mean = 0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double var = 0;
  for (double v : x) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(x.size()));
  for (int m = 1; m <= 3; ++m) {
    const std::size_t n = x.size() - static_cast<std::size_t>(m * tau);
    int false_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = INFINITY;
      std::size_t nn = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        double d = 0;
        for (int k = 0; k < m; ++k) d += (x[i + k] - x[j + k]) * (x[i + k] - x[j + k]);
        if (d < best) {
          best = d;
          nn = j;
        }
      }
      const double rm = std::sqrt(best);
      const double grow = std::abs(x[i + m] - x[nn + m]);
      const bool c1 = rm > 1e-9 * sd && grow / rm > 15.0;
      const bool c2 = std::sqrt(best + grow * grow) / sd > 2.0;
      false_count += (c1 || c2) ? 1 : 0;
    }
    EXPECT_DOUBLE_EQ(fnn[static_cast<std::size_t>(m - 1)], false_count / static_cast<double>(n)) << "m=" << m;
  }
}

TEST(EstimateDimension, ThresholdCrossing) {
  const std::vector<double> f{0.9, 0.005, 0.004, 0.003};
  EXPECT_EQ(estimate_dimension(f, 0.01).m, 2);
}

TEST(EstimateDimension, LocalMinimumBeforeThreshold) {
  const std::vector<double> f{0.9, 0.3, 0.1, 0.2, 0.005};
  EXPECT_EQ(estimate_dimension(f, 0.01).m, 3);
}

TEST(EstimateDimension, SaturatesWithoutEitherCriterion) {
  const std::vector<double> f{0.9, 0.8, 0.7, 0.6};
  const auto d = estimate_dimension(f, 0.01);
  EXPECT_EQ(d.m, 4);
  EXPECT_TRUE(d.saturated);
}

TEST(EstimateDimension, RejectsBadThreshold) {
  const std::vector<double> f{0.5};
  EXPECT_THROW(estimate_dimension(f, 0.0), std::invalid_argument);
  EXPECT_THROW(estimate_dimension(f, 1.0), std::invalid_argument);
}
