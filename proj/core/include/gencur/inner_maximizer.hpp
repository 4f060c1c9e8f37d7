#pragma once

#include <functional>

#include "gencur/action_space.hpp"
#include "gencur/random.hpp"

namespace gencur {

enum class InnerMode {
  kAuto,                  // multistart on grids, annealing on enumerated spaces
  kContinuousMultistart,  // grid-snapped coordinate ascent with shrinking stride
  kDiscreteAnnealing,     // bit-flip / swap simulated annealing
};

struct InnerMaximizerConfig {
  InnerMode mode = InnerMode::kAuto;
  int restarts = 16;
  double initial_stride = 0.25;  // first stride as a fraction of each axis
  int max_evaluations = 400;     // per restart
  int anneal_steps = 2000;
  double t0 = 1.0;
  double gamma = 0.995;

  void validate() const;
};

struct InnerResult {
  std::size_t index = 0;
  double score = 0.0;
};

/// Approximately maximizes `score` over the space. `score` may be noisy;
/// every call is treated as a fresh evaluation.
InnerResult maximize(const ActionSpace& space, const InnerMaximizerConfig& config,
                     const std::function<double(std::size_t)>& score, Rng& rng);

}  // namespace gencur
