#pragma once

// Neural-network generative curation: a tanh MLP maps Gaussian noise to an
// action, squashed into the action box by lower + (upper - lower) *
// logistic(z). The generator is trained by gradient ascent on the sampled
// lower-bound objective; gradients come from hand-written backward passes.

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gencur/action_space.hpp"
#include "gencur/objective.hpp"
#include "gencur/random.hpp"
#include "json.hpp"

namespace gencur::nn {

class GeneratorNet {
 public:
  /// Glorot-uniform weights, zero biases.
  static GeneratorNet Create(std::vector<std::size_t> layer_dims, std::vector<double> lower,
                             std::vector<double> upper, std::uint64_t seed);
  /// Every parameter zero.
  static GeneratorNet Zero(std::vector<std::size_t> layer_dims, std::vector<double> lower,
                           std::vector<double> upper);

  const std::vector<std::size_t>& layer_dims() const { return dims_; }
  std::size_t noise_dim() const { return dims_.front(); }
  std::size_t action_dim() const { return dims_.back(); }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }

  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  /// sum_i (dims[i] + 1) * dims[i + 1]
  static std::size_t parameter_count(std::span<const std::size_t> dims);

  /// Rows of `noise` are noise vectors; returns one action per row.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& noise) const;

  nlohmann::json to_json() const;
  static GeneratorNet from_json(const nlohmann::json& j);

 private:
  GeneratorNet(std::vector<std::size_t> dims, std::vector<double> lower, std::vector<double> upper);

  std::vector<std::size_t> dims_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> params_;
};

/// Multilinear interpolation of grid values, with its gradient. Gives Y a
/// derivative between grid points.
class GridInterpolator {
 public:
  GridInterpolator(const ActionSpace& space, std::vector<double> values);

  std::size_t dim() const { return axes_.size(); }
  double value(std::span<const double> x, std::span<double> gradient = {}) const;
  /// Flat index of the grid cell containing x (lower-left corner).
  std::size_t cell(std::span<const double> x) const;

 private:
  std::vector<GridAxis> axes_;
  std::vector<double> values_;
};

/// count x noise_dim matrix of N(0, sigma2_nn) draws.
Eigen::MatrixXd draw_noise(std::size_t count, std::size_t noise_dim, double sigma2_nn, Rng& rng);

std::vector<ActionPoint> sample_actions(const GeneratorNet& net, std::size_t count, double sigma2_nn,
                                        std::uint64_t seed);

/// Floor on the square-root argument of the diversity term.
inline constexpr double kDiversityFloor = 1e-9;

struct ObjectiveEvaluation {
  double value = 0.0;
  std::vector<double> gradient;  // d value / d params; empty unless requested
  /// Grid cells of every action and clamp flags; differs between two
  /// parameter vectors when a non-smooth point was crossed.
  std::vector<std::size_t> signature;
};

/// Objective on a frozen noise batch of n * 2m rows (batch element i owns
/// rows [2mi, 2m(i+1))): mean over elements of the mean Y over 2m actions
/// plus sigma sqrt(clamp(1 - mean disjoint-pair correlation)) E_m.
ObjectiveEvaluation evaluate_objective(const GeneratorNet& net, const GridInterpolator& y,
                                       const CurationObjectiveParams& params, const Eigen::MatrixXd& noise,
                                       std::size_t n, bool with_gradient);

/// Same objective on a fresh noise batch drawn from `seed`.
double batch_objective(const GeneratorNet& net, const GridInterpolator& y, const CurationObjectiveParams& params,
                       std::size_t n, double sigma2_nn, std::uint64_t seed);

struct TrainConfig {
  std::size_t batch = 64;   // n
  double sigma2_nn = 0.1;
  int iterations = 500;     // T
  double learning_rate = 0.05;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainResult {
  GeneratorNet net;
  /// Objective after each update, measured on one fixed evaluation batch.
  std::vector<double> trace;
};

/// theta <- theta + alpha * grad on a fresh noise batch per iteration. The
/// number of recommendations m comes from `params`.
TrainResult train(GeneratorNet net, const GridInterpolator& y, const CurationObjectiveParams& params,
                  const TrainConfig& cfg);

struct GradientCheckReport {
  double max_relative_error = 0.0;
  std::size_t checked = 0;
  std::size_t skipped = 0;  // perturbations that crossed a non-smooth point
};

/// Compares the analytic gradient with central differences on `samples`
/// randomly chosen parameters, using frozen noise. Relative error is
/// |g - fd| / max(|g|, |fd|, 1e-4).
GradientCheckReport gradient_check(const GeneratorNet& net, const GridInterpolator& y,
                                   const CurationObjectiveParams& params, std::size_t n, double sigma2_nn,
                                   std::uint64_t seed, std::size_t samples = 200, double step = 1e-5);

}  // namespace gencur::nn
