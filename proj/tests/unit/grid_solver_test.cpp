#include "gencur/grid_solver.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "gencur/errors.hpp"
#include "gencur/random.hpp"

namespace gencur {
namespace {

std::vector<ActionPoint> line(std::size_t n, double lo = 0.0, double hi = 1.0) {
  std::vector<ActionPoint> g;
  for (std::size_t i = 0; i < n; ++i) {
    g.push_back(ActionPoint::Continuous({lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1)}));
  }
  return g;
}

// Projection by bisection on the threshold tau in sum max(v - tau, 0) = 1.
Eigen::VectorXd bisection_projection(const Eigen::VectorXd& v) {
  double lo = v.minCoeff() - 1.0;
  double hi = v.maxCoeff();
  for (int it = 0; it < 200; ++it) {
    const double tau = 0.5 * (lo + hi);
    const double s = (v.array() - tau).max(0.0).sum();
    (s > 1.0 ? lo : hi) = tau;
  }
  return (v.array() - 0.5 * (lo + hi)).max(0.0).matrix();
}

TEST(SimplexProjectionTest, MatchesBisection) {
  Rng rng = make_rng(3);
  std::normal_distribution<double> normal(0.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd v(7);
    for (auto& x : v) x = normal(rng);
    const auto p = project_to_simplex(v);
    EXPECT_NEAR(p.sum(), 1.0, 1e-12);
    EXPECT_GE(p.minCoeff(), 0.0);
    EXPECT_LT((p - bisection_projection(v)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(SimplexProjectionTest, FixedPointOnSimplex) {
  Eigen::VectorXd v(3);
  v << 0.2, 0.5, 0.3;
  EXPECT_LT((project_to_simplex(v) - v).norm(), 1e-15);
}

TEST(OptimizePolicyTest, ZeroSigmaConcentratesOnArgmax) {
  const auto g = line(21);
  std::vector<double> y;
  for (const auto& p : g) y.push_back(-std::pow(p.coords()[0] - 0.3, 2));
  const auto sol = optimize_policy(g, y, {0.0, 20, Kernel::SquaredExponential(1.0)});
  EXPECT_GT(sol.policy.weights()[6], 0.999);
}

TEST(OptimizePolicyTest, TraceIsNonDecreasing) {
  const auto g = line(40);
  std::vector<double> y;
  for (const auto& p : g) y.push_back(std::exp(-std::pow(p.coords()[0] - 0.5, 2) / 0.02));
  const auto sol = optimize_policy(g, y, {0.25, 20, Kernel::SquaredExponential(0.2)});
  for (std::size_t i = 1; i < sol.trace.size(); ++i) EXPECT_GE(sol.trace[i], sol.trace[i - 1] - 1e-14);
  EXPECT_NEAR(sol.trace.back(), sol.objective, 1e-12);
}

TEST(OptimizePolicyTest, BeatsEveryPointOfALatticeOnThreePoints) {
  const auto g = line(3);
  const std::vector<double> y{0.2, 1.0, 0.1};
  const CurationObjectiveParams params{1.5, 10, Kernel::SquaredExponential(0.4)};
  const auto sol = optimize_policy(g, y, params, {200000, 1.0, 1e-13});
  const auto corr = correlation_matrix(params.kernel, g);
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), 3);
  const double sem = params.sigma * expected_max_gaussian(params.m);
  double best = -1e300;
  const int steps = 400;
  for (int a = 0; a <= steps; ++a) {
    for (int b = 0; a + b <= steps; ++b) {
      Eigen::Vector3d w(a, b, steps - a - b);
      w /= steps;
      const double r = w.dot(corr * w);
      best = std::max(best, w.dot(yv) + sem * std::sqrt(std::max(0.0, 1.0 - r)));
    }
  }
  EXPECT_GE(sol.objective, best - 1e-6);
  EXPECT_NEAR(lower_bound_objective(Eigen::Map<const Eigen::VectorXd>(sol.policy.weights().data(), 3), yv, corr, sem),
              sol.objective, 1e-12);
}

TEST(AsymptoticPolicyTest, WhiteNoiseIsUniform) {
  const auto sol = asymptotic_policy(Kernel::WhiteNoise(1.0), line(200, -1.0, 1.0));
  for (double w : sol.policy.weights()) EXPECT_NEAR(w, 1.0 / 200.0, 1e-12);
}

TEST(AsymptoticPolicyTest, SquaredExponentialPutsMassOnBoundaries) {
  const auto sol = asymptotic_policy(Kernel::SquaredExponential(0.5), line(60, -1.0, 1.0));
  const auto& w = sol.policy.weights();
  EXPECT_GT(w.front(), 0.05);
  EXPECT_GT(w.back(), 0.05);
  EXPECT_NEAR(w.front(), w.back(), 1e-4);
}

TEST(AsymptoticPolicyTest, SatisfiesOptimalityConditions) {
  for (double h : {1.0, 0.5, 0.25}) {
    const auto grid = line(120, -1.0, 1.0);
    const auto k = Kernel::SquaredExponential(h);
    const auto sol = asymptotic_policy(k, grid);
    const auto& w = sol.policy.weights();
    double quad = 0.0;
    std::vector<double> cw(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (std::size_t j = 0; j < grid.size(); ++j) cw[i] += k.correlation(grid[i], grid[j]) * w[j];
      quad += w[i] * cw[i];
    }
    EXPECT_NEAR(sol.objective, quad, 1e-12);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_GE(cw[i], quad - 1e-7) << "h=" << h << " i=" << i;
      if (w[i] > 1e-9) {
        EXPECT_LE(cw[i], quad + 1e-7) << "h=" << h << " i=" << i;
      }
    }
  }
}

TEST(AsymptoticPolicyTest, WideKernelSplitsBetweenEndpoints) {
  // Two atoms at -1 and 1 give (1 + exp(-2)) / 2, and every grid point
  // correlates with that pair by at least this much.
  const auto sol = asymptotic_policy(Kernel::SquaredExponential(1.0), line(200, -1.0, 1.0));
  const auto& w = sol.policy.weights();
  EXPECT_NEAR(w.front(), 0.5, 1e-6);
  EXPECT_NEAR(w.back(), 0.5, 1e-6);
  EXPECT_NEAR(sol.objective, 0.5 * (1.0 + std::exp(-2.0)), 1e-9);
}

TEST(VarianceMaxTest, EndpointsOfTheFeasibleRange) {
  const auto g = line(11);
  std::vector<double> y;
  for (const auto& p : g) y.push_back(1.0 - std::pow(p.coords()[0] - 0.5, 2));
  // Y >= 0.95 keeps |x - 0.5| <= sqrt(0.05), so x in [0.3, 0.7] on this grid.
  const auto p = variance_max_policy(g, y, 0.05);
  EXPECT_DOUBLE_EQ(p.weights()[3], 0.5);
  EXPECT_DOUBLE_EQ(p.weights()[7], 0.5);
}

TEST(VarianceMaxTest, Errors) {
  const auto g = line(3);
  EXPECT_THROW(variance_max_policy(g, std::vector<double>{-1.0, -2.0, -3.0}, 0.5), InfeasibleError);
  EXPECT_THROW(variance_max_policy(g, std::vector<double>{1.0, 2.0}, 0.5), DimensionError);
  EXPECT_THROW(variance_max_policy(g, std::vector<double>{1.0, 2.0, 3.0}, 1.0), ArgumentError);
}

TEST(CountClustersTest, CountsRunsAboveThreshold) {
  const std::vector<double> w{0.3, 0.2, 0.0, 0.0, 0.1, 0.0005, 0.4};
  EXPECT_EQ(count_clusters(w), 3);
  EXPECT_EQ(count_clusters(w, 0.25), 2);
}

}  // namespace
}  // namespace gencur
