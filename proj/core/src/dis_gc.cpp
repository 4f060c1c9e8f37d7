#include "gencur/dis_gc.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "gencur/errors.hpp"
#include "gencur/random.hpp"

namespace gencur {

double diversity_score(const Kernel& kernel, std::span<const ActionPoint> buffer, const ActionPoint& candidate,
                       const CurationObjectiveParams& params) {
  params.validate();
  if (buffer.empty()) throw ArgumentError("diversity score needs a non-empty buffer");
  double s = 0.0;
  for (const auto& b : buffer) s += kernel.correlation(b, candidate);
  const double mean = s / static_cast<double>(buffer.size());
  return params.sigma * std::sqrt(std::clamp(1.0 - mean, 0.0, 1.0)) * expected_max_gaussian(params.m);
}

namespace {

// Trace statistics describe the empirical policy of the whole buffer.
double buffer_rho_hat(const ActionSpace& space, const Kernel& kernel, const std::deque<std::size_t>& buffer) {
  const std::size_t pairs = buffer.size() / 2;
  if (pairs == 0) return 1.0;
  double s = 0.0;
  for (std::size_t p = 0; p < pairs; ++p) {
    s += kernel.correlation(space.point(buffer[2 * p]), space.point(buffer[2 * p + 1]));
  }
  return s / static_cast<double>(pairs);
}

// Expected regret of the best of m draws from the buffer's empirical
// distribution: P(best <= k-th smallest) = (k/n)^m.
double buffer_regret(const GroundTruth& truth, const std::deque<std::size_t>& buffer, std::size_t m) {
  std::vector<double> v;
  v.reserve(buffer.size());
  for (auto i : buffer) v.push_back(truth.desirability(i));
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  const double md = static_cast<double>(m);
  double expected = 0.0;
  double prev = 0.0;
  for (std::size_t k = 1; k <= v.size(); ++k) {
    const double cur = std::pow(static_cast<double>(k) / n, md);
    expected += v[k - 1] * (cur - prev);
    prev = cur;
  }
  return std::max(0.0, truth.best_value() - expected);
}

}  // namespace

DisGcResult run_dis_gc(const ActionSpace& space, std::span<const double> y_values,
                       const CurationObjectiveParams& params, const DisGcConfig& config, const GroundTruth* truth) {
  params.validate();
  const std::size_t n = config.buffer_size;
  const std::size_t total = config.iterations;
  const auto m = static_cast<std::size_t>(params.m);
  if (y_values.size() != space.size()) throw DimensionError("need one Y value per space point");
  if (n < 1) throw ArgumentError("buffer size n must be >= 1");
  if (total < n) throw ArgumentError("iterations T must be >= buffer size n");
  if (n < m) throw ArgumentError("buffer size n must be >= m");
  if (!(config.sigma2_dis >= 0.0)) throw ArgumentError("sigma2_dis must be >= 0");
  if (truth != nullptr && truth->space().size() != space.size()) {
    throw DimensionError("ground truth does not match the action space");
  }

  const std::size_t size = space.size();
  const Kernel& kernel = params.kernel;
  const double sigma_em = params.sigma * expected_max_gaussian(params.m);
  const double noise_sd = std::sqrt(config.sigma2_dis);

  Rng rng = make_rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  // corr_sum[i] = sum over buffered b of corr(b, i); rows are cached per
  // buffer slot so eviction subtracts exactly what insertion added.
  std::vector<double> corr_sum(size, 0.0);
  std::deque<std::vector<double>> rows;
  std::deque<std::size_t> buffer;

  auto bonus = [&](std::size_t i) {
    if (buffer.size() < n) return 0.0;
    const double mean = corr_sum[i] / static_cast<double>(n);
    return sigma_em * std::sqrt(std::clamp(1.0 - mean, 0.0, 1.0));
  };

  DisGcResult result;
  result.state.trace.reserve(total);
  for (std::size_t t = 1; t <= total; ++t) {
    const bool diversify = buffer.size() >= n;
    auto score = [&](std::size_t i) {
      double v = y_values[i];
      if (diversify) v += bonus(i);
      if (noise_sd > 0.0) v += noise_sd * normal(rng);
      return v;
    };
    const InnerResult pick = maximize(space, config.inner, score, rng);
    if (pick.index >= size) throw InternalError("inner maximizer returned an index outside the space");
    const double objective = y_values[pick.index] + (diversify ? bonus(pick.index) : 0.0);

    std::vector<double> row(size);
    const auto& a = space.point(pick.index);
    for (std::size_t i = 0; i < size; ++i) row[i] = kernel.correlation(a, space.point(i));
    for (std::size_t i = 0; i < size; ++i) corr_sum[i] += row[i];
    buffer.push_back(pick.index);
    rows.push_back(std::move(row));
    if (buffer.size() > n) {
      const auto& old = rows.front();
      for (std::size_t i = 0; i < size; ++i) corr_sum[i] -= old[i];
      rows.pop_front();
      buffer.pop_front();
    }

    IterationRecord rec;
    rec.iteration = t;
    rec.action = pick.index;
    rec.objective = objective;
    rec.rho_hat = buffer_rho_hat(space, kernel, buffer);
    if (truth != nullptr) {
      rec.regret = buffer_regret(*truth, buffer, m);
    } else {
      rec.regret = std::numeric_limits<double>::quiet_NaN();
    }
    result.state.trace.push_back(rec);
  }

  result.state.buffer.assign(buffer.begin(), buffer.end());
  result.state.t = total;
  result.indices.assign(buffer.end() - static_cast<std::ptrdiff_t>(m), buffer.end());
  for (auto i : result.indices) result.actions.push_back(space.point(i));
  return result;
}

}  // namespace gencur
