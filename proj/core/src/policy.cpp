#include "gencur/policy.hpp"

#include <cmath>
#include <numeric>

#include "gencur/errors.hpp"

namespace gencur {

DiscretePolicy::DiscretePolicy(std::vector<ActionPoint> grid, std::vector<double> weights)
    : grid_(std::move(grid)), weights_(std::move(weights)) {
  if (grid_.empty()) throw ArgumentError("policy grid must be non-empty");
  if (grid_.size() != weights_.size()) throw DimensionError("policy needs one weight per grid point");
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ArgumentError("policy weights must be finite and >= 0");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ArgumentError("policy weights must sum to 1");
  for (double& w : weights_) w /= total;
  cumulative_.resize(weights_.size());
  std::partial_sum(weights_.begin(), weights_.end(), cumulative_.begin());
}

DiscretePolicy DiscretePolicy::Uniform(std::vector<ActionPoint> grid) {
  const std::size_t n = grid.size();
  if (n == 0) throw ArgumentError("policy grid must be non-empty");
  return DiscretePolicy(std::move(grid), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

DiscretePolicy DiscretePolicy::PointMass(std::vector<ActionPoint> grid, std::size_t index) {
  std::vector<double> w(grid.size(), 0.0);
  w.at(index) = 1.0;
  return DiscretePolicy(std::move(grid), std::move(w));
}

}  // namespace gencur
