#include "gencur/preference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gencur/errors.hpp"
#include "gencur/normal.hpp"

namespace gencur {

PosteriorState make_prior(const ActionSpace& space, const Kernel& kernel) {
  if (space.size() == 0) throw ArgumentError("posterior needs a non-empty space");
  PosteriorState s{space, kernel, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.size())),
                   gram(kernel, space.points()), {}};
  return s;
}

namespace {

// Moment-matched conditioning on D = U(w) - U(l) > 0. With a = -mu_D / s_D
// and lambda = phi(a) / (1 - Phi(a)), the truncated D has mean
// mu_D + s_D lambda and variance s_D^2 (1 - lambda (lambda - a)); every
// other coordinate moves through its covariance with D.
void condition(Eigen::VectorXd& mean, Eigen::MatrixXd& cov, std::size_t w, std::size_t l) {
  const auto wi = static_cast<Eigen::Index>(w);
  const auto li = static_cast<Eigen::Index>(l);
  const double var_d = cov(wi, wi) + cov(li, li) - 2.0 * cov(wi, li);
  if (!(var_d > kDegenerateComparison)) {
    throw DegenerateError("compared actions are indistinguishable under the current posterior");
  }
  const double sd = std::sqrt(var_d);
  const double a = -(mean(wi) - mean(li)) / sd;
  const double lambda = normal::mills_hazard(a);
  const double shrink = lambda * (lambda - a);
  const Eigen::VectorXd c = cov.col(wi) - cov.col(li);
  mean += (lambda / sd) * c;
  cov.noalias() -= (shrink / var_d) * (c * c.transpose());
  cov = 0.5 * (cov + cov.transpose()).eval();
  for (Eigen::Index i = 0; i < cov.rows(); ++i) cov(i, i) = std::max(cov(i, i), 0.0);
}

}  // namespace

void apply(PosteriorState& state, const PreferenceObservation& obs) {
  const std::size_t w = state.space.snap(obs.winner);
  const std::size_t l = state.space.snap(obs.loser);
  if (w == l) throw DegenerateError("winner and loser snap to the same action");
  Eigen::VectorXd mean = state.mean;
  Eigen::MatrixXd cov = state.cov;
  condition(mean, cov, w, l);
  state.mean = std::move(mean);
  state.cov = std::move(cov);
  state.history.push_back({state.space.point(w), state.space.point(l)});
}

PosteriorState update(const PosteriorState& state, const PreferenceObservation& obs) {
  PosteriorState next = state;
  apply(next, obs);
  return next;
}

PosteriorState replay(const ActionSpace& space, const Kernel& kernel,
                      std::span<const PreferenceObservation> history) {
  PosteriorState s = make_prior(space, kernel);
  for (const auto& obs : history) apply(s, obs);
  return s;
}

PointPosterior predict(const PosteriorState& state, std::size_t index) {
  if (index >= state.space.size()) throw ArgumentError("query index out of range");
  const auto i = static_cast<Eigen::Index>(index);
  return {state.mean(i), std::max(state.cov(i, i), 0.0)};
}

PointPosterior predict(const PosteriorState& state, const ActionPoint& a) {
  return predict(state, state.space.snap(a));
}

std::vector<std::size_t> rank_candidates(const PosteriorState& state, std::span<const ActionPoint> candidates,
                                         std::span<const double> y_values) {
  if (candidates.size() != y_values.size()) throw DimensionError("need one Y value per candidate");
  std::vector<double> score(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) score[i] = y_values[i] + predict(state, candidates[i]).mean;
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  return order;
}

nlohmann::json to_json(const PreferenceObservation& obs) {
  return {{"winner", to_json(obs.winner)}, {"loser", to_json(obs.loser)}};
}

PreferenceObservation preference_from_json(const nlohmann::json& j) {
  return {action_from_json(j.at("winner")), action_from_json(j.at("loser"))};
}

nlohmann::json snapshot(const PosteriorState& state, bool include_cov) {
  nlohmann::json grid = nlohmann::json::array();
  for (const auto& p : state.space.points()) grid.push_back(to_json(p));
  const auto n = static_cast<std::size_t>(state.mean.size());
  std::vector<double> mean(state.mean.data(), state.mean.data() + n);
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = state.cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
  nlohmann::json history = nlohmann::json::array();
  for (const auto& obs : state.history) history.push_back(to_json(obs));
  nlohmann::json out{{"grid", std::move(grid)}, {"mean", std::move(mean)}, {"cov_diag", std::move(diag)},
                     {"history", std::move(history)}};
  if (include_cov) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < state.cov.rows(); ++r) {
      std::vector<double> row(static_cast<std::size_t>(state.cov.cols()));
      for (Eigen::Index c = 0; c < state.cov.cols(); ++c) row[static_cast<std::size_t>(c)] = state.cov(r, c);
      rows.push_back(std::move(row));
    }
    out["cov"] = std::move(rows);
  }
  return out;
}

}  // namespace gencur
