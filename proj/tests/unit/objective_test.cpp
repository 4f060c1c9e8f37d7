#include "gencur/objective.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "gencur/errors.hpp"
#include "gencur/random.hpp"
#include "oracles.hpp"

namespace gencur {
namespace {

std::vector<ActionPoint> line(std::size_t n) {
  std::vector<ActionPoint> g;
  for (std::size_t i = 0; i < n; ++i) g.push_back(ActionPoint::Continuous({static_cast<double>(i) / (n - 1)}));
  return g;
}

TEST(ExpectedMaxTest, ClosedFormsForSmallM) {
  EXPECT_EQ(expected_max_gaussian(1), 0.0);
  EXPECT_NEAR(expected_max_gaussian(2), 1.0 / std::sqrt(std::numbers::pi), 1e-9);
  EXPECT_NEAR(expected_max_gaussian(3), 1.5 / std::sqrt(std::numbers::pi), 1e-9);
}

TEST(ExpectedMaxTest, MatchesStratifiedMonteCarlo) {
  for (std::int64_t m : {5, 20, 100}) {
    EXPECT_NEAR(expected_max_gaussian(m), testing::expected_max_monte_carlo(m, 1'000'000, 17), 2e-3) << m;
  }
}

TEST(ExpectedMaxTest, OracleQuantileMatchesBoost) {
  const boost::math::normal_distribution<double> std_normal;
  for (double p : {1e-12, 1e-6, 0.01, 0.0243, 0.3, 0.5, 0.77, 0.9758, 0.999, 1 - 1e-9}) {
    const double ref = boost::math::quantile(std_normal, p);
    EXPECT_NEAR(testing::normal_quantile(p), ref, 2e-9 * std::max(1.0, std::abs(ref))) << p;
  }
}

TEST(ExpectedMaxTest, IncreasingInM) {
  double prev = -1.0;
  for (std::int64_t m = 1; m <= 200; ++m) {
    const double e = expected_max_gaussian(m);
    EXPECT_GT(e, prev);
    prev = e;
  }
}

TEST(ExpectedMaxTest, AsymptoticBranchAndValidation) {
  EXPECT_DOUBLE_EQ(expected_max_gaussian(2'000'000), expected_max_gaussian_asymptotic(2e6));
  // Reference from an independent adaptive quadrature. The two-term
  // formula omits the Gumbel mean shift and sits about 3% lower here.
  EXPECT_NEAR(expected_max_gaussian(10'000), 3.851615817066466, 1e-6);
  EXPECT_NEAR(expected_max_gaussian_asymptotic(1e4), 3.7384108184200113, 1e-12);
  EXPECT_THROW(expected_max_gaussian(0), ArgumentError);
  EXPECT_THROW(expected_max_gaussian_asymptotic(1.0), ArgumentError);
}

TEST(RhoTest, PointMassHasRhoOne) {
  const auto p = DiscretePolicy::PointMass(line(5), 3);
  EXPECT_DOUBLE_EQ(rho_exact(Kernel::SquaredExponential(0.1), p), 1.0);
}

TEST(RhoTest, UniformWhiteNoiseIsInverseSize) {
  const auto p = DiscretePolicy::Uniform(line(8));
  EXPECT_NEAR(rho_exact(Kernel::WhiteNoise(2.0), p), 1.0 / 8.0, 1e-15);
}

TEST(RhoTest, TwoPointByHand) {
  DiscretePolicy p({ActionPoint::Continuous({0.0}), ActionPoint::Continuous({1.0})}, {0.25, 0.75});
  const double c = std::exp(-1.0 / (2.0 * 0.25));
  EXPECT_NEAR(rho_exact(Kernel::SquaredExponential(0.5, 3.0), p), 0.0625 + 0.5625 + 2 * 0.1875 * c, 1e-15);
}

TEST(RhoTest, EmpiricalPairsConsecutiveSamples) {
  const auto k = Kernel::Laplacian(1.0, 5.0);
  std::vector<ActionPoint> s{ActionPoint::Continuous({0.0}), ActionPoint::Continuous({1.0}),
                             ActionPoint::Continuous({0.5}), ActionPoint::Continuous({0.5}),
                             ActionPoint::Continuous({9.0})};
  EXPECT_NEAR(rho_empirical(k, s), (std::exp(-1.0) + 1.0) / 2.0, 1e-15);
  EXPECT_THROW(rho_empirical(k, std::span(s).first(1)), ArgumentError);
  EXPECT_THROW(rho_empirical(Kernel::Laplacian(1.0, 0.0), s), DegenerateError);
}

TEST(BoundTest, LowerBoundFormula) {
  CurationObjectiveParams p{2.0, 3, Kernel::SquaredExponential(1.0)};
  EXPECT_NEAR(lower_bound_value(0.5, 0.36, p), 0.5 + 2.0 * 0.8 * 1.5 / std::sqrt(std::numbers::pi), 1e-9);
  EXPECT_NEAR(lower_bound_value(0.5, 1.0 + 1e-12, p), 0.5, 1e-15);
  EXPECT_NEAR(lower_bound_value(0.5, -1e-12, p), 0.5 + 2.0 * 1.5 / std::sqrt(std::numbers::pi), 1e-9);
  p.m = 1;
  EXPECT_DOUBLE_EQ(lower_bound_value(0.5, 0.2, p), 0.5);
}

TEST(BoundTest, ParamsValidation) {
  EXPECT_THROW((CurationObjectiveParams{-1.0, 2, Kernel::SquaredExponential(1.0)}.validate()), ArgumentError);
  EXPECT_THROW((CurationObjectiveParams{1.0, 0, Kernel::SquaredExponential(1.0)}.validate()), ArgumentError);
}

TEST(ExpectedYTest, ExactAgainstMonteCarlo) {
  const std::vector<double> y{0.3, -1.0, 2.0, 0.7};
  DiscretePolicy p(line(4), {0.4, 0.3, 0.1, 0.2});
  EXPECT_NEAR(expected_y(p, y), 0.12 - 0.3 + 0.2 + 0.14, 1e-15);
  // P(max < 2) = 0.9^m, so E[max] = 2 (1 - 0.9^3) + ... checked by simulation.
  std::mt19937_64 rng(5);
  double acc = 0.0;
  const int draws = 400000;
  for (int d = 0; d < draws; ++d) {
    double best = -1e300;
    for (auto i : p.sample_indices(3, rng)) best = std::max(best, y[i]);
    acc += best;
  }
  EXPECT_NEAR(expected_max_y(p, y, 3), acc / draws, 5e-3);
  EXPECT_NEAR(expected_max_y_monte_carlo(p, y, 3, 400000, 9), expected_max_y(p, y, 3), 5e-3);
}

TEST(ExpectedYTest, PointMassMaxIsValue) {
  const std::vector<double> y{1.0, 4.0, 2.0};
  EXPECT_DOUBLE_EQ(expected_max_y(DiscretePolicy::PointMass(line(3), 1), y, 20), 4.0);
}

TEST(PolicyTest, ValidatesWeights) {
  EXPECT_THROW(DiscretePolicy(line(2), {0.5, 0.6}), ArgumentError);
  EXPECT_THROW(DiscretePolicy(line(2), {-0.1, 1.1}), ArgumentError);
  EXPECT_THROW(DiscretePolicy(line(2), {1.0}), DimensionError);
}

TEST(PolicyTest, SamplingFrequencies) {
  DiscretePolicy p(line(3), {0.2, 0.0, 0.8});
  Rng rng = make_rng(1);
  const auto idx = p.sample_indices(100000, rng);
  std::size_t count0 = 0;
  for (auto i : idx) {
    EXPECT_NE(i, 1u);
    count0 += i == 0;
  }
  EXPECT_NEAR(static_cast<double>(count0) / 100000.0, 0.2, 0.005);
}

}  // namespace
}  // namespace gencur
