#pragma once

// Gaussian belief over the qualitative desirability U on a finite action
// space, refined by pairwise preferences. Each preference "winner beat
// loser" conditions on D = U(winner) - U(loser) > 0 and refits a Gaussian
// by matching the first two moments of the truncated distribution.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gencur/action_space.hpp"
#include "gencur/kernels.hpp"
#include "json.hpp"

namespace gencur {

struct PreferenceObservation {
  ActionPoint winner;
  ActionPoint loser;
};

struct PosteriorState {
  ActionSpace space;
  Kernel kernel = Kernel::SquaredExponential(1.0);
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  std::vector<PreferenceObservation> history;  // winner/loser snapped to grid points
};

struct PointPosterior {
  double mean = 0.0;
  double variance = 0.0;
};

/// Zero mean and covariance gram(kernel, space points).
PosteriorState make_prior(const ActionSpace& space, const Kernel& kernel);

/// Comparisons whose difference variance is at or below this are rejected.
inline constexpr double kDegenerateComparison = 1e-12;

/// Returns the posterior after one preference. Throws DegenerateError when
/// the two actions are indistinguishable under the current belief.
PosteriorState update(const PosteriorState& state, const PreferenceObservation& obs);

/// In-place variant; `state` is unchanged if an exception is thrown.
void apply(PosteriorState& state, const PreferenceObservation& obs);

/// Rebuilds a posterior by applying `history` to the prior in order.
PosteriorState replay(const ActionSpace& space, const Kernel& kernel,
                      std::span<const PreferenceObservation> history);

PointPosterior predict(const PosteriorState& state, const ActionPoint& a);
PointPosterior predict(const PosteriorState& state, std::size_t index);

/// Candidate positions sorted by y + posterior mean, descending; ties keep
/// the lower position first.
std::vector<std::size_t> rank_candidates(const PosteriorState& state, std::span<const ActionPoint> candidates,
                                         std::span<const double> y_values);

/// {grid, mean, cov_diag, history[, cov]}
nlohmann::json snapshot(const PosteriorState& state, bool include_cov = false);

nlohmann::json to_json(const PreferenceObservation& obs);
PreferenceObservation preference_from_json(const nlohmann::json& j);

}  // namespace gencur
