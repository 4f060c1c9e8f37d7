#include "gencur/inner_maximizer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "gencur/errors.hpp"

namespace gencur {

void InnerMaximizerConfig::validate() const {
  if (restarts < 1) throw ArgumentError("inner maximizer needs at least one restart");
  if (!(initial_stride > 0.0 && initial_stride <= 1.0)) throw ArgumentError("initial_stride must lie in (0, 1]");
  if (max_evaluations < 1 || anneal_steps < 1) throw ArgumentError("inner maximizer budgets must be positive");
  if (!(t0 > 0.0)) throw ArgumentError("annealing needs T0 > 0");
  if (!(gamma > 0.0 && gamma < 1.0)) throw ArgumentError("annealing decay must lie in (0, 1)");
}

namespace {

InnerResult multistart(const ActionSpace& space, const InnerMaximizerConfig& cfg,
                       const std::function<double(std::size_t)>& score, Rng& rng) {
  const auto& axes = space.axes();
  std::uniform_int_distribution<std::size_t> pick(0, space.size() - 1);
  InnerResult best{0, -std::numeric_limits<double>::infinity()};
  for (int r = 0; r < cfg.restarts; ++r) {
    auto multi = space.unravel(pick(rng));
    double value = score(space.ravel(multi));
    int evals = 1;
    std::vector<std::size_t> stride(axes.size());
    for (std::size_t k = 0; k < axes.size(); ++k) {
      const double s = cfg.initial_stride * static_cast<double>(axes[k].count - 1);
      stride[k] = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(s)));
    }
    while (evals < cfg.max_evaluations) {
      bool improved = false;
      for (std::size_t k = 0; k < axes.size() && evals < cfg.max_evaluations; ++k) {
        for (int dir : {-1, 1}) {
          if (evals >= cfg.max_evaluations) break;
          const auto cur = static_cast<long long>(multi[k]);
          const long long next = std::clamp<long long>(cur + dir * static_cast<long long>(stride[k]), 0,
                                                       static_cast<long long>(axes[k].count) - 1);
          if (next == cur) continue;
          auto cand = multi;
          cand[k] = static_cast<std::size_t>(next);
          const double v = score(space.ravel(cand));
          ++evals;
          if (v > value) {
            value = v;
            multi = std::move(cand);
            improved = true;
          }
        }
      }
      if (improved) continue;
      bool all_unit = true;
      for (auto& s : stride) {
        if (s > 1) all_unit = false;
        s = std::max<std::size_t>(1, s / 2);
      }
      if (all_unit) break;
    }
    if (value > best.score) best = {space.ravel(multi), value};
  }
  return best;
}

InnerResult anneal(const ActionSpace& space, const InnerMaximizerConfig& cfg,
                   const std::function<double(std::size_t)>& score, Rng& rng) {
  const int d = static_cast<int>(space.dim());
  std::uniform_int_distribution<std::size_t> pick(0, space.size() - 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::size_t current = pick(rng);
  double value = score(current);
  InnerResult best{current, value};
  double temperature = cfg.t0;
  std::vector<int> ones;
  std::vector<int> zeros;
  for (int step = 0; step < cfg.anneal_steps; ++step, temperature *= cfg.gamma) {
    if (d == 0) break;
    std::uint64_t mask = space.mask(current);
    ones.clear();
    zeros.clear();
    for (int i = 0; i < d; ++i) ((mask >> i) & 1U ? ones : zeros).push_back(i);
    const bool swap = unif(rng) < 0.5 && !ones.empty() && !zeros.empty();
    if (swap) {
      const int out = ones[std::uniform_int_distribution<std::size_t>(0, ones.size() - 1)(rng)];
      const int in = zeros[std::uniform_int_distribution<std::size_t>(0, zeros.size() - 1)(rng)];
      mask ^= (std::uint64_t{1} << out) | (std::uint64_t{1} << in);
    } else {
      mask ^= std::uint64_t{1} << std::uniform_int_distribution<int>(0, d - 1)(rng);
    }
    const std::size_t cand = space.find_mask(mask);
    if (cand == space.size()) continue;
    const double v = score(cand);
    if (v >= value || unif(rng) < std::exp((v - value) / temperature)) {
      current = cand;
      value = v;
      if (value > best.score) best = {current, value};
    }
  }
  return best;
}

}  // namespace

InnerResult maximize(const ActionSpace& space, const InnerMaximizerConfig& config,
                     const std::function<double(std::size_t)>& score, Rng& rng) {
  config.validate();
  if (space.size() == 0) throw ArgumentError("cannot maximize over an empty space");
  InnerMode mode = config.mode;
  if (mode == InnerMode::kAuto) {
    mode = space.is_grid() ? InnerMode::kContinuousMultistart : InnerMode::kDiscreteAnnealing;
  }
  if (mode == InnerMode::kContinuousMultistart) {
    if (!space.is_grid()) throw ArgumentError("multistart coordinate ascent needs a grid space");
    return multistart(space, config, score, rng);
  }
  if (space.is_grid()) throw ArgumentError("annealing needs an enumerated binary space");
  return anneal(space, config, score, rng);
}

}  // namespace gencur
