#include "gencur/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "gencur/errors.hpp"
#include "gencur/random.hpp"

namespace gencur {

namespace {

void check(const Problem& problem, std::size_t m) {
  if (m < 1) throw ArgumentError("m must be >= 1");
  if (problem.space.size() == 0) throw ArgumentError("problem has an empty action space");
  if (problem.y_values.size() != problem.space.size()) throw DimensionError("Y table does not match the space");
}

}  // namespace

void BaselineConfig::validate() const {
  if (!(delta >= 0.0 && delta < 1.0)) throw ArgumentError("delta must lie in [0, 1)");
  if (std::isnan(noise_std)) throw ArgumentError("noise std must be a number");
  inner.validate();
}

std::vector<std::size_t> random_policy(const Problem& problem, std::size_t m, std::uint64_t seed) {
  check(problem, m);
  Rng rng = make_rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, problem.space.size() - 1);
  std::vector<std::size_t> out(m);
  for (auto& i : out) i = pick(rng);
  return out;
}

std::vector<std::size_t> qo_noise(const Problem& problem, std::size_t m, double noise_std, std::uint64_t seed,
                                  const InnerMaximizerConfig& inner) {
  check(problem, m);
  if (!(noise_std >= 0.0)) throw ArgumentError("noise std must be >= 0");
  inner.validate();
  const auto& y = problem.y_values;
  std::vector<std::size_t> out;
  out.reserve(m);
  for (std::size_t r = 0; r < m; ++r) {
    Rng search_rng = make_rng(derive_seed(seed, 2 * r));
    Rng noise_rng = make_rng(derive_seed(seed, 2 * r + 1));
    std::normal_distribution<double> noise(0.0, 1.0);
    auto score = [&](std::size_t i) { return noise_std > 0.0 ? y[i] + noise_std * noise(noise_rng) : y[i]; };
    out.push_back(maximize(problem.space, inner, score, search_rng).index);
  }
  return out;
}

std::vector<std::size_t> qo(const Problem& problem, std::size_t m, std::uint64_t seed,
                            const InnerMaximizerConfig& inner) {
  return qo_noise(problem, m, 0.0, seed, inner);
}

double default_noise_std(const Problem& problem) {
  if (problem.y_values.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(problem.y_values.begin(), problem.y_values.end());
  return 0.05 * (*hi - *lo);
}

std::vector<std::size_t> near_optimal_set(const Problem& problem, double delta) {
  if (!(delta >= 0.0 && delta < 1.0)) throw ArgumentError("delta must lie in [0, 1)");
  const auto& y = problem.y_values;
  if (y.empty()) return {};
  const double best = *std::max_element(y.begin(), y.end());
  const double threshold = best - delta * std::abs(best);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] >= threshold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> iterative_search(const Problem& problem, std::size_t m, double delta, std::uint64_t seed,
                                          const InnerMaximizerConfig& inner) {
  check(problem, m);
  const auto feasible = near_optimal_set(problem, delta);
  if (feasible.empty()) throw InfeasibleError("no action meets the optimality slack");
  const auto& space = problem.space;

  std::size_t first = qo(problem, 1, seed, inner).front();
  if (!std::binary_search(feasible.begin(), feasible.end(), first)) {
    first = static_cast<std::size_t>(std::max_element(problem.y_values.begin(), problem.y_values.end()) -
                                     problem.y_values.begin());
  }

  // min_dist[k] = min squared distance from feasible[k] to the chosen set.
  std::vector<std::size_t> chosen{first};
  std::vector<double> min_dist(feasible.size());
  for (std::size_t k = 0; k < feasible.size(); ++k) min_dist[k] = space.squared_distance(feasible[k], first);
  while (chosen.size() < m) {
    const auto best = static_cast<std::size_t>(std::max_element(min_dist.begin(), min_dist.end()) - min_dist.begin());
    chosen.push_back(feasible[best]);
    for (std::size_t k = 0; k < feasible.size(); ++k) {
      min_dist[k] = std::min(min_dist[k], space.squared_distance(feasible[k], feasible[best]));
    }
  }

  // Swap one member at a time for the feasible action farthest from the
  // rest, while that strictly increases its distance to the set.
  auto distance_to_others = [&](std::size_t skip, std::size_t candidate) {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < chosen.size(); ++j) {
      if (j != skip) d = std::min(d, space.squared_distance(candidate, chosen[j]));
    }
    return d;
  };
  if (m > 1) {
    constexpr int kMaxPasses = 50;
    for (int pass = 0; pass < kMaxPasses; ++pass) {
      bool changed = false;
      for (std::size_t j = 0; j < chosen.size(); ++j) {
        double current = distance_to_others(j, chosen[j]);
        std::size_t best = chosen[j];
        for (std::size_t f : feasible) {
          const double d = distance_to_others(j, f);
          if (d > current) {
            current = d;
            best = f;
          }
        }
        if (best != chosen[j]) {
          chosen[j] = best;
          changed = true;
        }
      }
      if (!changed) break;
    }
  }
  return chosen;
}

}  // namespace gencur
