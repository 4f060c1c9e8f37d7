#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gencur/action_space.hpp"
#include "gencur/kernels.hpp"

namespace gencur {

enum class DistanceMetric { kEuclidean, kHamming };

struct KnapsackInstance {
  std::vector<int> weights;
  std::vector<int> values;
  int capacity = 0;

  bool feasible(const ActionPoint& a) const;
  int total_value(const ActionPoint& a) const;
};

/// A benchmark: action space, quantitative desirability Y tabulated on
/// every space point, and the default qualitative model (kernel with
/// amplitude sigma^2).
struct Problem {
  std::string name;
  ActionSpace space;
  std::function<double(const ActionPoint&)> quantitative;
  std::vector<double> y_values;
  DistanceMetric metric = DistanceMetric::kEuclidean;
  Kernel kernel = Kernel::SquaredExponential(1.0);
  double sigma = 1.0;
  std::optional<KnapsackInstance> knapsack;

  /// Problem-specific feasibility on top of space membership.
  bool feasible(const ActionPoint& a) const;
};

/// Tabulates `y` over every point of `space` and validates finiteness.
Problem make_problem(std::string name, ActionSpace space, std::function<double(const ActionPoint&)> y,
                     Kernel kernel, double sigma, DistanceMetric metric);

}  // namespace gencur
