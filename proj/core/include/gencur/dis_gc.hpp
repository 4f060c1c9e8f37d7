#pragma once

// Diversified iterative search: actions are generated one at a time, each
// maximizing Y(a) + sigma sqrt(1 - mean_j corr(b_j, a)) E_m + noise against
// a FIFO buffer b of the last n accepted actions.

#include <cstdint>
#include <span>
#include <vector>

#include "gencur/action_space.hpp"
#include "gencur/gp_truth.hpp"
#include "gencur/inner_maximizer.hpp"
#include "gencur/objective.hpp"

namespace gencur {

struct DisGcConfig {
  std::size_t buffer_size = 50;   // n
  std::size_t iterations = 1000;  // T, including the n warm-up iterations
  double sigma2_dis = 2e-2;       // variance of the per-evaluation noise
  InnerMaximizerConfig inner;
  std::uint64_t seed = 0;
};

struct IterationRecord {
  std::size_t iteration = 0;  // 1-based
  std::size_t action = 0;     // accepted space index
  double objective = 0.0;     // noise-free score of the accepted action
  double rho_hat = 1.0;       // over the last m buffered actions
  double regret = 0.0;        // NaN without a ground truth
};

struct CurationState {
  std::vector<std::size_t> buffer;  // oldest first
  std::size_t t = 0;
  std::vector<IterationRecord> trace;
};

struct DisGcResult {
  std::vector<std::size_t> indices;  // last m entries of the final buffer
  std::vector<ActionPoint> actions;
  CurationState state;
};

/// sigma sqrt(clamp(1 - mean_j corr(buffer_j, candidate), 0, 1)) E_m, with
/// unit-amplitude correlations.
double diversity_score(const Kernel& kernel, std::span<const ActionPoint> buffer, const ActionPoint& candidate,
                       const CurationObjectiveParams& params);

/// Runs the search over `space` with quantitative values `y_values` (one per
/// space point). `truth`, when given, adds regret to the trace.
DisGcResult run_dis_gc(const ActionSpace& space, std::span<const double> y_values,
                       const CurationObjectiveParams& params, const DisGcConfig& config,
                       const GroundTruth* truth = nullptr);

}  // namespace gencur
