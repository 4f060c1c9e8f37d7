#include "gencur/gp_truth.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "gencur/errors.hpp"

namespace gencur {
namespace {

double zero(const ActionPoint&) { return 0.0; }

// Empirical covariance of U over many seeds against the Gram matrix.
void expect_covariance_matches(const ActionSpace& space, const Kernel& kernel, double tol) {
  const int draws = 20000;
  const auto n = static_cast<Eigen::Index>(space.size());
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
  for (int s = 0; s < draws; ++s) {
    const auto u = sample_realization(space, zero, kernel, static_cast<std::uint64_t>(s)).u_values();
    const Eigen::Map<const Eigen::VectorXd> v(u.data(), n);
    acc += v * v.transpose();
  }
  acc /= draws;
  const auto g = gram(kernel, space.points());
  EXPECT_LT((acc - g).cwiseAbs().maxCoeff(), tol);
}

TEST(GroundTruthTest, CovarianceMatchesGram) {
  expect_covariance_matches(ActionSpace::Grid({GridAxis{0.0, 1.0, 4}}), Kernel::Laplacian(0.5, 2.0), 0.08);
}

TEST(GroundTruthTest, SeparableKroneckerSamplingMatchesGram) {
  expect_covariance_matches(ActionSpace::Grid({GridAxis{0.0, 1.0, 3}, GridAxis{-1.0, 1.0, 3}}),
                            Kernel::SquaredExponential(0.7, 1.5), 0.06);
}

TEST(GroundTruthTest, HammingCovarianceMatchesGram) {
  expect_covariance_matches(ActionSpace::Enumerated({ActionPoint::Binary({0, 0}), ActionPoint::Binary({1, 0}),
                                                     ActionPoint::Binary({1, 1})}),
                            Kernel::HammingExponential(0.5, 1.0), 0.04);
}

TEST(GroundTruthTest, ZeroAmplitudeGivesZeroU) {
  const auto t = sample_realization(ActionSpace::Grid({GridAxis{0.0, 1.0, 10}}), zero,
                                    Kernel::SquaredExponential(1.0, 0.0), 3);
  for (double u : t.u_values()) EXPECT_EQ(u, 0.0);
}

TEST(GroundTruthTest, DeterministicPerSeed) {
  const auto space = ActionSpace::Grid({GridAxis{0.0, 1.0, 50}});
  const auto k = Kernel::SquaredExponential(0.2);
  EXPECT_EQ(sample_realization(space, zero, k, 7).u_values(), sample_realization(space, zero, k, 7).u_values());
  EXPECT_NE(sample_realization(space, zero, k, 7).u_values(), sample_realization(space, zero, k, 8).u_values());
}

TEST(GroundTruthTest, NearlySingularGramStillSamples) {
  // h = 10 on a 200-point unit grid is numerically rank deficient.
  const auto t = sample_realization(ActionSpace::Grid({GridAxis{0.0, 1.0, 200}}), zero,
                                    Kernel::SquaredExponential(10.0), 1);
  for (double u : t.u_values()) EXPECT_TRUE(std::isfinite(u));
}

TEST(GroundTruthTest, RegretProperties) {
  const auto space = ActionSpace::Grid({GridAxis{0.0, 1.0, 5}});
  GroundTruth t(space, {0.0, 1.0, 2.0, 1.0, 0.0}, Kernel::SquaredExponential(1.0), {0.5, 0.0, -0.1, 0.3, 0.0}, 0);
  EXPECT_EQ(t.best_index(), 2u);
  EXPECT_DOUBLE_EQ(t.best_value(), 1.9);
  const std::vector<std::size_t> best{2, 0};
  EXPECT_DOUBLE_EQ(t.regret_of_indices(best), 0.0);
  const std::vector<std::size_t> other{0, 4};
  EXPECT_DOUBLE_EQ(t.regret_of_indices(other), 1.9 - 0.5);
  const std::vector<ActionPoint> pts{ActionPoint::Continuous({0.74})};
  EXPECT_NEAR(t.regret(pts), 1.9 - 1.3, 1e-15);
  EXPECT_THROW(t.regret_of_indices(std::vector<std::size_t>{}), ArgumentError);
}

TEST(GroundTruthTest, BestIndexTiesGoLow) {
  GroundTruth t(ActionSpace::Grid({GridAxis{0.0, 1.0, 3}}), {1.0, 1.0, 1.0}, Kernel::SquaredExponential(1.0),
                {0.0, 0.0, 0.0}, 0);
  EXPECT_EQ(t.best_index(), 0u);
}

TEST(GroundTruthTest, JsonRoundTrip) {
  const auto t = sample_realization(ActionSpace::Grid({GridAxis{0.0, 1.0, 8}}),
                                    [](const ActionPoint& a) { return a.coords()[0]; },
                                    Kernel::SquaredExponential(0.3, 0.5), 11);
  const auto r = GroundTruth::from_json(t.to_json());
  EXPECT_EQ(r.u_values(), t.u_values());
  EXPECT_EQ(r.y_values(), t.y_values());
  EXPECT_EQ(r.seed(), 11u);
  EXPECT_EQ(r.kernel(), t.kernel());
}

}  // namespace
}  // namespace gencur
