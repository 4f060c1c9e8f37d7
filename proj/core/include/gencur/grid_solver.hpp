#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gencur/kernels.hpp"
#include "gencur/objective.hpp"
#include "gencur/policy.hpp"

namespace gencur {

struct SolverOptions {
  int max_iters = 20000;
  double step = 1.0;   // initial trial step of the backtracking search
  double tol = 1e-8;   // stop on smaller improvement (asymptotic: optimality gap)
};

struct PolicySolution {
  DiscretePolicy policy;
  double objective = 0.0;
  int iterations = 0;
  std::vector<double> trace;  // objective after each accepted iteration
};

/// Euclidean projection of v onto the probability simplex.
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v);

/// Lower-bound objective sum_i w_i Y_i + sigma E_m sqrt(1 - w' C w), with C
/// the correlation matrix of the grid.
double lower_bound_objective(const Eigen::VectorXd& w, const Eigen::VectorXd& y, const Eigen::MatrixXd& corr,
                             double sigma_em);

/// Projected-gradient ascent of the lower bound over the simplex, started
/// from the uniform policy. Each step backtracks until the Armijo condition
/// holds, so the objective trace is non-decreasing.
PolicySolution optimize_policy(std::span<const ActionPoint> grid, std::span<const double> y_grid,
                               const CurationObjectiveParams& params, const SolverOptions& opts = {});

/// Minimizer of rho[pi] = w' C w over the simplex (the sigma -> infinity
/// limit of the lower bound). White noise has the closed-form uniform
/// answer; other kernels use projected gradient with exact line search.
PolicySolution asymptotic_policy(const Kernel& kernel, std::span<const ActionPoint> grid,
                                 const SolverOptions& opts = {20000, 1.0, 1e-14});

/// Maximizer of E||a - a'||^2 subject to Y(a) >= (1 - delta) max Y on a 1D
/// grid: half the mass on each end of the feasible range.
DiscretePolicy variance_max_policy(std::span<const ActionPoint> grid, std::span<const double> y_grid, double delta);

/// Number of runs of consecutive grid entries with weight above `threshold`.
int count_clusters(std::span<const double> weights, double threshold = 1e-3);

}  // namespace gencur
