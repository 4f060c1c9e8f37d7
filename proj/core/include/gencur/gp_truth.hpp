#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gencur/action_space.hpp"
#include "gencur/kernels.hpp"
#include "gencur/problem.hpp"
#include "json.hpp"

namespace gencur {

/// One synthetic instance of l = Y + U, with U a single GP draw tabulated on
/// the action space. Immutable after construction.
class GroundTruth {
 public:
  GroundTruth(ActionSpace space, std::vector<double> y_values, Kernel kernel, std::vector<double> u_values,
              std::uint64_t seed);

  const ActionSpace& space() const { return space_; }
  const std::vector<double>& y_values() const { return y_; }
  const std::vector<double>& u_values() const { return u_; }
  const Kernel& kernel() const { return kernel_; }
  std::uint64_t seed() const { return seed_; }

  double desirability(std::size_t index) const { return y_.at(index) + u_.at(index); }
  /// Off-grid continuous points are snapped to the nearest grid point.
  double desirability(const ActionPoint& a) const;

  /// Grid argmax of l, lowest index on ties.
  std::size_t best_index() const { return best_; }
  double best_value() const { return desirability(best_); }

  double regret(std::span<const ActionPoint> actions) const;
  double regret_of_indices(std::span<const std::size_t> indices) const;

  nlohmann::json to_json() const;
  static GroundTruth from_json(const nlohmann::json& j);

 private:
  ActionSpace space_;
  std::vector<double> y_;
  Kernel kernel_;
  std::vector<double> u_;
  std::uint64_t seed_ = 0;
  std::size_t best_ = 0;
};

/// Draws u = L z with L the Cholesky factor of gram + jitter * I (jitter
/// relative to the diagonal, escalated 1e-8 -> 1e-4 on failure). Separable
/// kernels on multi-axis grids are factorized axis by axis.
GroundTruth sample_realization(const ActionSpace& space, const std::function<double(const ActionPoint&)>& quantitative,
                               const Kernel& kernel, std::uint64_t seed);
GroundTruth sample_realization(const Problem& problem, std::uint64_t seed);

/// Lower Cholesky factor of (m + jitter * mean(diag) * I) with jitter escalation.
Eigen::MatrixXd jittered_cholesky(const Eigen::MatrixXd& m);

}  // namespace gencur
