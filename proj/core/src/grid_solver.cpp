#include "gencur/grid_solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "gencur/errors.hpp"

namespace gencur {

namespace {

constexpr double kSqrtFloor = 1e-6;
constexpr double kArmijo = 1e-4;

std::vector<ActionPoint> copy_grid(std::span<const ActionPoint> grid) { return {grid.begin(), grid.end()}; }

DiscretePolicy to_policy(std::span<const ActionPoint> grid, const Eigen::VectorXd& w) {
  std::vector<double> weights(w.data(), w.data() + w.size());
  for (double& x : weights) x = std::max(x, 0.0);
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& x : weights) x /= total;
  return DiscretePolicy(copy_grid(grid), std::move(weights));
}

}  // namespace

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v) {
  const Eigen::Index n = v.size();
  if (n == 0) throw ArgumentError("cannot project an empty vector");
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double css = 0.0;
  double theta = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    css += u[k];
    const double t = (css - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  Eigen::VectorXd w = (v.array() - theta).max(0.0);
  w /= w.sum();
  return w;
}

double lower_bound_objective(const Eigen::VectorXd& w, const Eigen::VectorXd& y, const Eigen::MatrixXd& corr,
                             double sigma_em) {
  const double rho = std::clamp(w.dot(corr * w), 0.0, 1.0);
  return y.dot(w) + sigma_em * std::sqrt(1.0 - rho);
}

PolicySolution optimize_policy(std::span<const ActionPoint> grid, std::span<const double> y_grid,
                               const CurationObjectiveParams& params, const SolverOptions& opts) {
  params.validate();
  if (grid.empty()) throw ArgumentError("grid must be non-empty");
  if (y_grid.size() != grid.size()) throw DimensionError("Y_grid length must equal the grid size");
  for (double y : y_grid) {
    if (!std::isfinite(y)) throw ArgumentError("Y values must be finite");
  }
  const auto n = static_cast<Eigen::Index>(grid.size());
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(y_grid.data(), n);
  const Eigen::MatrixXd corr = correlation_matrix(params.kernel, grid);
  const double sigma_em = params.sigma * expected_max_gaussian(params.m);

  auto objective = [&](const Eigen::VectorXd& w) { return lower_bound_objective(w, y, corr, sigma_em); };
  auto gradient = [&](const Eigen::VectorXd& w) -> Eigen::VectorXd {
    const Eigen::VectorXd cw = corr * w;
    const double root = std::sqrt(std::clamp(1.0 - w.dot(cw), 0.0, 1.0));
    return y - (sigma_em / std::max(root, kSqrtFloor)) * cw;
  };

  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  double f = objective(w);
  double step = opts.step;
  PolicySolution out{to_policy(grid, w), f, 0, {}};
  int iter = 0;
  for (; iter < opts.max_iters; ++iter) {
    const Eigen::VectorXd g = gradient(w);
    Eigen::VectorXd next;
    double fn = f;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      next = project_to_simplex(w + step * g);
      fn = objective(next);
      if (fn >= f + kArmijo * g.dot(next - w)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted || fn < f) break;
    const double improvement = fn - f;
    w = std::move(next);
    f = fn;
    out.trace.push_back(f);
    step = std::min(step * 2.0, 1e6);
    if (improvement < opts.tol) {
      ++iter;
      break;
    }
  }
  out.policy = to_policy(grid, w);
  out.objective = f;
  out.iterations = iter;
  return out;
}

PolicySolution asymptotic_policy(const Kernel& kernel, std::span<const ActionPoint> grid, const SolverOptions& opts) {
  if (grid.size() < 2) throw ArgumentError("asymptotic policy needs at least two grid points");
  const auto n = static_cast<Eigen::Index>(grid.size());
  if (kernel.variant() == KernelVariant::kWhiteNoise) {
    auto pol = DiscretePolicy::Uniform(copy_grid(grid));
    return {pol, 1.0 / static_cast<double>(n), 0, {}};
  }
  const Eigen::MatrixXd corr = correlation_matrix(kernel, grid);
  // Primal active set: solve the equality-constrained problem on the support
  // S, step back to feasibility when a weight would turn negative, and grow S
  // with the point that most violates (C w)_i >= w'C w.
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  w[0] = 1.0;
  std::vector<Eigen::Index> support{0};
  PolicySolution out{to_policy(grid, w), corr(0, 0), 0, {}};
  int iter = 0;
  for (; iter < opts.max_iters; ++iter) {
    const Eigen::VectorXd cw = corr * w;
    const double quad = w.dot(cw);
    Eigen::Index add = -1;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (w[k] == 0.0 && cw[k] < quad - opts.tol && (add < 0 || cw[k] < cw[add])) add = k;
    }
    if (add < 0) break;
    support.push_back(add);
    for (int inner = 0; inner < opts.max_iters; ++inner) {
      const auto s = static_cast<Eigen::Index>(support.size());
      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(s + 1, s + 1);
      for (Eigen::Index r = 0; r < s; ++r) {
        for (Eigen::Index c = 0; c < s; ++c) kkt(r, c) = corr(support[r], support[c]);
        kkt(r, s) = kkt(s, r) = 1.0;
      }
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s + 1);
      rhs[s] = 1.0;
      const Eigen::VectorXd z = kkt.completeOrthogonalDecomposition().solve(rhs);
      double alpha = 1.0;
      for (Eigen::Index r = 0; r < s; ++r) {
        const double cur = w[support[r]];
        if (z[r] < 0.0) alpha = std::min(alpha, cur / (cur - z[r]));
      }
      for (Eigen::Index r = 0; r < s; ++r) w[support[r]] += alpha * (z[r] - w[support[r]]);
      if (alpha >= 1.0) break;
      // Drop the weights the step drove to zero.
      std::erase_if(support, [&](Eigen::Index k) {
        if (w[k] > 1e-15) return false;
        w[k] = 0.0;
        return true;
      });
    }
    w = w.cwiseMax(0.0);
    w /= w.sum();
    out.trace.push_back(w.dot(corr * w));
  }
  out.policy = to_policy(grid, w);
  out.objective = w.dot(corr * w);
  out.iterations = iter;
  return out;
}

DiscretePolicy variance_max_policy(std::span<const ActionPoint> grid, std::span<const double> y_grid, double delta) {
  if (grid.empty()) throw ArgumentError("grid must be non-empty");
  if (y_grid.size() != grid.size()) throw DimensionError("Y_grid length must equal the grid size");
  if (!(delta >= 0.0 && delta < 1.0)) throw ArgumentError("delta must lie in [0, 1)");
  for (const auto& p : grid) {
    if (p.is_binary() || p.dim() != 1) throw DimensionError("variance-max policy needs a 1D grid");
  }
  const double y_max = *std::max_element(y_grid.begin(), y_grid.end());
  const double threshold = (1.0 - delta) * y_max;
  std::size_t lo = grid.size();
  std::size_t hi = grid.size();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (y_grid[i] < threshold) continue;
    const double x = grid[i].coords()[0];
    if (lo == grid.size() || x < grid[lo].coords()[0]) lo = i;
    if (hi == grid.size() || x > grid[hi].coords()[0]) hi = i;
  }
  if (lo == grid.size()) throw InfeasibleError("no grid point satisfies the optimality constraint");
  std::vector<double> w(grid.size(), 0.0);
  w[lo] += 0.5;
  w[hi] += 0.5;
  return DiscretePolicy(copy_grid(grid), std::move(w));
}

int count_clusters(std::span<const double> weights, double threshold) {
  int clusters = 0;
  bool inside = false;
  for (double w : weights) {
    const bool on = w > threshold;
    if (on && !inside) ++clusters;
    inside = on;
  }
  return clusters;
}

}  // namespace gencur
