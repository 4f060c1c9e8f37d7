#include "gencur/problem.hpp"

#include <cmath>

#include "gencur/errors.hpp"

namespace gencur {

bool KnapsackInstance::feasible(const ActionPoint& a) const {
  const auto& bits = a.bits();
  if (bits.size() != weights.size()) throw DimensionError("knapsack action has the wrong length");
  long total = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) total += bits[i] ? weights[i] : 0;
  return total <= capacity;
}

int KnapsackInstance::total_value(const ActionPoint& a) const {
  const auto& bits = a.bits();
  if (bits.size() != values.size()) throw DimensionError("knapsack action has the wrong length");
  int total = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) total += bits[i] ? values[i] : 0;
  return total;
}

bool Problem::feasible(const ActionPoint& a) const {
  if (knapsack) return knapsack->feasible(a);
  try {
    space.snap(a);
  } catch (const DomainError&) {
    return false;
  }
  return true;
}

Problem make_problem(std::string name, ActionSpace space, std::function<double(const ActionPoint&)> y,
                     Kernel kernel, double sigma, DistanceMetric metric) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ArgumentError("sigma must be finite and >= 0");
  Problem p;
  p.name = std::move(name);
  p.y_values.reserve(space.size());
  for (const auto& a : space.points()) {
    const double v = y(a);
    if (!std::isfinite(v)) throw ArgumentError("quantitative desirability is not finite on the grid");
    p.y_values.push_back(v);
  }
  p.space = std::move(space);
  p.quantitative = std::move(y);
  p.kernel = kernel;
  p.sigma = sigma;
  p.metric = metric;
  return p;
}

}  // namespace gencur
