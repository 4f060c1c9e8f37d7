#pragma once

#include <algorithm>
#include <random>
#include <span>
#include <vector>

#include "gencur/kernels.hpp"

namespace gencur {

/// Probability weights over a finite list of actions.
class DiscretePolicy {
 public:
  /// Throws ArgumentError unless weights are non-negative and sum to 1
  /// within 1e-9; the stored weights are renormalized exactly.
  DiscretePolicy(std::vector<ActionPoint> grid, std::vector<double> weights);

  static DiscretePolicy Uniform(std::vector<ActionPoint> grid);
  static DiscretePolicy PointMass(std::vector<ActionPoint> grid, std::size_t index);

  const std::vector<ActionPoint>& grid() const { return grid_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return grid_.size(); }

  /// Indices drawn i.i.d. from the weights.
  template <class Urng>
  std::vector<std::size_t> sample_indices(std::size_t count, Urng& rng) const;

 private:
  std::vector<ActionPoint> grid_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
};

template <class Urng>
std::vector<std::size_t> DiscretePolicy::sample_indices(std::size_t count, Urng& rng) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::size_t> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    const double u = unif(rng) * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    auto idx = static_cast<std::size_t>(it - cumulative_.begin());
    if (idx >= cumulative_.size()) idx = cumulative_.size() - 1;
    out.push_back(idx);
  }
  return out;
}

}  // namespace gencur
