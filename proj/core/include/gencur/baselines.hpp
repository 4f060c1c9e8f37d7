#pragma once

// Comparison policies that ignore the qualitative term: uniform sampling,
// repeated maximization of Y (optionally with evaluation noise), and a
// greedy spread-out search over near-optimal actions.

#include <cstdint>
#include <vector>

#include "gencur/inner_maximizer.hpp"
#include "gencur/problem.hpp"

namespace gencur {

struct BaselineConfig {
  /// Evaluation noise of qo-noise; negative selects 0.05 * (max Y - min Y).
  double noise_std = -1.0;
  /// Optimality slack of iterative search: keep a with Y(a) >= Y* - delta |Y*|.
  double delta = 0.1;
  InnerMaximizerConfig inner;

  void validate() const;
};

/// m i.i.d. uniform draws over the space indices.
std::vector<std::size_t> random_policy(const Problem& problem, std::size_t m, std::uint64_t seed);

/// m independent inner-maximizer runs on Y.
std::vector<std::size_t> qo(const Problem& problem, std::size_t m, std::uint64_t seed,
                            const InnerMaximizerConfig& inner = {});

/// Like qo, but every candidate evaluation adds fresh N(0, noise_std^2)
/// noise. noise_std = 0 reproduces qo exactly.
std::vector<std::size_t> qo_noise(const Problem& problem, std::size_t m, double noise_std, std::uint64_t seed,
                                  const InnerMaximizerConfig& inner = {});

/// 0.05 * (max Y - min Y).
double default_noise_std(const Problem& problem);

/// Greedy max-min squared distance over the near-optimal set, seeded with
/// the qo result and followed by single-swap refinement passes. Throws
/// InfeasibleError when no action meets the slack.
std::vector<std::size_t> iterative_search(const Problem& problem, std::size_t m, double delta, std::uint64_t seed,
                                          const InnerMaximizerConfig& inner = {});

/// Indices of the actions meeting Y(a) >= Y* - delta |Y*|.
std::vector<std::size_t> near_optimal_set(const Problem& problem, double delta);

}  // namespace gencur
