#include "gencur/gp_truth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gencur/errors.hpp"
#include "gencur/random.hpp"

namespace gencur {

GroundTruth::GroundTruth(ActionSpace space, std::vector<double> y_values, Kernel kernel,
                         std::vector<double> u_values, std::uint64_t seed)
    : space_(std::move(space)), y_(std::move(y_values)), kernel_(kernel), u_(std::move(u_values)), seed_(seed) {
  if (space_.size() == 0) throw ArgumentError("ground truth needs a non-empty space");
  if (y_.size() != space_.size() || u_.size() != space_.size()) {
    throw DimensionError("ground truth tables must have one entry per space point");
  }
  for (std::size_t i = 1; i < y_.size(); ++i) {
    if (desirability(i) > desirability(best_)) best_ = i;
  }
}

double GroundTruth::desirability(const ActionPoint& a) const { return desirability(space_.snap(a)); }

double GroundTruth::regret_of_indices(std::span<const std::size_t> indices) const {
  if (indices.empty()) throw ArgumentError("regret needs at least one action");
  double best = -std::numeric_limits<double>::infinity();
  for (auto i : indices) best = std::max(best, desirability(i));
  return std::max(0.0, best_value() - best);
}

double GroundTruth::regret(std::span<const ActionPoint> actions) const {
  if (actions.empty()) throw ArgumentError("regret needs at least one action");
  std::vector<std::size_t> idx;
  idx.reserve(actions.size());
  for (const auto& a : actions) idx.push_back(space_.snap(a));
  return regret_of_indices(idx);
}

nlohmann::json GroundTruth::to_json() const {
  return {{"space", gencur::to_json(space_)},
          {"kernel", gencur::to_json(kernel_)},
          {"seed", seed_},
          {"y", y_},
          {"u", u_}};
}

GroundTruth GroundTruth::from_json(const nlohmann::json& j) {
  return GroundTruth(space_from_json(j.at("space")), j.at("y").get<std::vector<double>>(),
                     kernel_from_json(j.at("kernel")), j.at("u").get<std::vector<double>>(),
                     j.at("seed").get<std::uint64_t>());
}

Eigen::MatrixXd jittered_cholesky(const Eigen::MatrixXd& m) {
  const double scale = std::max(m.diagonal().mean(), 0.0);
  for (double jitter = kGramJitter; jitter <= 1e-4 * 1.0000001; jitter *= 10.0) {
    Eigen::MatrixXd a = m;
    a.diagonal().array() += jitter * (scale > 0.0 ? scale : 1.0);
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() == Eigen::Success) return llt.matrixL();
  }
  throw NumericError("Cholesky factorization failed after jitter escalation to 1e-4");
}

namespace {

// Applies the lower-triangular factor of axis k to the row-major tensor `v`.
void apply_along_axis(const Eigen::MatrixXd& l, const std::vector<GridAxis>& axes, std::size_t k,
                      std::vector<double>& v) {
  std::size_t inner = 1;
  for (std::size_t j = k + 1; j < axes.size(); ++j) inner *= axes[j].count;
  const std::size_t n = axes[k].count;
  const std::size_t outer = v.size() / (n * inner);
  std::vector<double> line(n);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t in = 0; in < inner; ++in) {
      const std::size_t base = o * n * inner + in;
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j <= i; ++j) s += l(i, j) * v[base + j * inner];
        line[i] = s;
      }
      for (std::size_t i = 0; i < n; ++i) v[base + i * inner] = line[i];
    }
  }
}

}  // namespace

GroundTruth sample_realization(const ActionSpace& space, const std::function<double(const ActionPoint&)>& quantitative,
                               const Kernel& kernel, std::uint64_t seed) {
  if (space.size() == 0) throw ArgumentError("cannot sample on an empty space");
  std::vector<double> y;
  y.reserve(space.size());
  for (const auto& a : space.points()) y.push_back(quantitative(a));

  const std::size_t n = space.size();
  std::vector<double> u(n, 0.0);
  if (kernel.variance() > 0.0) {
    Rng rng = make_rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> z(n);
    for (auto& x : z) x = normal(rng);

    const double scale = std::sqrt(kernel.variance());
    if (space.is_grid() && space.axes().size() > 1 && kernel.separable()) {
      u = z;
      for (std::size_t k = 0; k < space.axes().size(); ++k) {
        const auto axis = ActionSpace::Grid({space.axes()[k]});
        const auto l = jittered_cholesky(correlation_matrix(kernel, axis.points()));
        apply_along_axis(l, space.axes(), k, u);
      }
      for (auto& x : u) x *= scale;
    } else {
      const auto l = jittered_cholesky(gram(kernel, space.points()));
      const Eigen::Map<const Eigen::VectorXd> zv(z.data(), static_cast<Eigen::Index>(n));
      const Eigen::VectorXd uv = l.triangularView<Eigen::Lower>() * zv;
      for (std::size_t i = 0; i < n; ++i) u[i] = uv(static_cast<Eigen::Index>(i));
    }
  }
  return GroundTruth(space, std::move(y), kernel, std::move(u), seed);
}

GroundTruth sample_realization(const Problem& problem, std::uint64_t seed) {
  auto gt = sample_realization(problem.space, [&](const ActionPoint&) { return 0.0; }, problem.kernel, seed);
  return GroundTruth(problem.space, problem.y_values, problem.kernel, gt.u_values(), seed);
}

}  // namespace gencur
