#include "gencur/nn_gc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gencur/errors.hpp"

namespace gencur::nn {

namespace {

using Mat = Eigen::MatrixXd;
using MapMat = Eigen::Map<Mat>;
using ConstMapMat = Eigen::Map<const Mat>;

struct LayerView {
  std::size_t in = 0;
  std::size_t out = 0;
  std::size_t offset = 0;  // weights (in x out, column-major), then out biases
};

std::vector<LayerView> layout(std::span<const std::size_t> dims) {
  std::vector<LayerView> v;
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    v.push_back({dims[l], dims[l + 1], off});
    off += (dims[l] + 1) * dims[l + 1];
  }
  return v;
}

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Activations of every layer for one forward pass; acts[0] is the input.
struct Tape {
  std::vector<Mat> acts;
  Mat logits;
  Mat actions;
};

Tape run_forward(const std::vector<std::size_t>& dims, const std::vector<double>& params,
                 const std::vector<double>& lower, const std::vector<double>& upper, const Mat& noise) {
  const auto layers = layout(dims);
  Tape tape;
  tape.acts.push_back(noise);
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& lv = layers[l];
    ConstMapMat w(params.data() + lv.offset, static_cast<Eigen::Index>(lv.in), static_cast<Eigen::Index>(lv.out));
    Eigen::Map<const Eigen::RowVectorXd> b(params.data() + lv.offset + lv.in * lv.out,
                                           static_cast<Eigen::Index>(lv.out));
    Mat z = tape.acts.back() * w;
    z.rowwise() += b;
    if (l + 1 < layers.size()) {
      tape.acts.push_back(z.array().tanh().matrix());
    } else {
      tape.logits = std::move(z);
    }
  }
  tape.actions.resize(tape.logits.rows(), tape.logits.cols());
  for (Eigen::Index c = 0; c < tape.logits.cols(); ++c) {
    const double lo = lower[static_cast<std::size_t>(c)];
    const double span = upper[static_cast<std::size_t>(c)] - lo;
    for (Eigen::Index r = 0; r < tape.logits.rows(); ++r) tape.actions(r, c) = lo + span * logistic(tape.logits(r, c));
  }
  return tape;
}

// Backpropagates d objective / d actions into a flat parameter gradient.
std::vector<double> run_backward(const std::vector<std::size_t>& dims, const std::vector<double>& params,
                                 const std::vector<double>& lower, const std::vector<double>& upper,
                                 const Tape& tape, const Mat& d_actions) {
  const auto layers = layout(dims);
  std::vector<double> grad(params.size(), 0.0);
  Mat delta(d_actions.rows(), d_actions.cols());
  for (Eigen::Index c = 0; c < delta.cols(); ++c) {
    const double span = upper[static_cast<std::size_t>(c)] - lower[static_cast<std::size_t>(c)];
    for (Eigen::Index r = 0; r < delta.rows(); ++r) {
      const double s = logistic(tape.logits(r, c));
      delta(r, c) = d_actions(r, c) * span * s * (1.0 - s);
    }
  }
  for (std::size_t l = layers.size(); l-- > 0;) {
    const auto& lv = layers[l];
    const Mat& input = tape.acts[l];
    MapMat gw(grad.data() + lv.offset, static_cast<Eigen::Index>(lv.in), static_cast<Eigen::Index>(lv.out));
    Eigen::Map<Eigen::RowVectorXd> gb(grad.data() + lv.offset + lv.in * lv.out, static_cast<Eigen::Index>(lv.out));
    gw.noalias() = input.transpose() * delta;
    gb = delta.colwise().sum();
    if (l == 0) break;
    ConstMapMat w(params.data() + lv.offset, static_cast<Eigen::Index>(lv.in), static_cast<Eigen::Index>(lv.out));
    Mat back = delta * w.transpose();
    delta = back.array() * (1.0 - input.array().square());
  }
  return grad;
}

void check_box(const std::vector<std::size_t>& dims, const std::vector<double>& lower,
               const std::vector<double>& upper) {
  if (dims.size() < 2) throw ArgumentError("generator needs at least an input and an output layer");
  for (auto d : dims) {
    if (d == 0) throw ArgumentError("layer widths must be positive");
  }
  if (lower.size() != dims.back() || upper.size() != dims.back()) {
    throw DimensionError("action box must match the output width");
  }
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!(upper[i] >= lower[i])) throw ArgumentError("action box upper bound below lower bound");
  }
}

}  // namespace

GeneratorNet::GeneratorNet(std::vector<std::size_t> dims, std::vector<double> lower, std::vector<double> upper)
    : dims_(std::move(dims)), lower_(std::move(lower)), upper_(std::move(upper)) {
  check_box(dims_, lower_, upper_);
  params_.assign(parameter_count(dims_), 0.0);
}

std::size_t GeneratorNet::parameter_count(std::span<const std::size_t> dims) {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) n += (dims[l] + 1) * dims[l + 1];
  return n;
}

GeneratorNet GeneratorNet::Zero(std::vector<std::size_t> dims, std::vector<double> lower, std::vector<double> upper) {
  return GeneratorNet(std::move(dims), std::move(lower), std::move(upper));
}

GeneratorNet GeneratorNet::Create(std::vector<std::size_t> dims, std::vector<double> lower,
                                  std::vector<double> upper, std::uint64_t seed) {
  GeneratorNet net(std::move(dims), std::move(lower), std::move(upper));
  Rng rng = make_rng(seed);
  for (const auto& lv : layout(net.dims_)) {
    const double limit = std::sqrt(6.0 / static_cast<double>(lv.in + lv.out));
    std::uniform_real_distribution<double> unif(-limit, limit);
    for (std::size_t k = 0; k < lv.in * lv.out; ++k) net.params_[lv.offset + k] = unif(rng);
  }
  return net;
}

Eigen::MatrixXd GeneratorNet::forward(const Eigen::MatrixXd& noise) const {
  if (static_cast<std::size_t>(noise.cols()) != noise_dim()) throw DimensionError("noise width mismatch");
  return run_forward(dims_, params_, lower_, upper_, noise).actions;
}

nlohmann::json GeneratorNet::to_json() const {
  return {{"layer_dims", dims_},  {"activation", "tanh"}, {"squash", "logistic-box"},
          {"lower", lower_},      {"upper", upper_},      {"params", params_}};
}

GeneratorNet GeneratorNet::from_json(const nlohmann::json& j) {
  GeneratorNet net(j.at("layer_dims").get<std::vector<std::size_t>>(), j.at("lower").get<std::vector<double>>(),
                   j.at("upper").get<std::vector<double>>());
  auto p = j.at("params").get<std::vector<double>>();
  if (p.size() != net.params_.size()) throw DimensionError("parameter vector has the wrong length");
  net.params_ = std::move(p);
  return net;
}

GridInterpolator::GridInterpolator(const ActionSpace& space, std::vector<double> values)
    : axes_(space.axes()), values_(std::move(values)) {
  if (!space.is_grid()) throw ArgumentError("interpolation needs a grid space");
  if (values_.size() != space.size()) throw DimensionError("need one value per grid point");
}

namespace {

// Cell index and fractional position along one axis; coordinates outside
// the axis are clamped to its ends.
std::pair<std::size_t, double> locate(const GridAxis& ax, double x) {
  if (ax.count < 2) return {0, 0.0};
  const double t = std::clamp((x - ax.lower) / ax.step(), 0.0, static_cast<double>(ax.count - 1));
  auto i = static_cast<std::size_t>(std::floor(t));
  if (i > ax.count - 2) i = ax.count - 2;
  return {i, t - static_cast<double>(i)};
}

}  // namespace

std::size_t GridInterpolator::cell(std::span<const double> x) const {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < axes_.size(); ++k) idx = idx * axes_[k].count + locate(axes_[k], x[k]).first;
  return idx;
}

double GridInterpolator::value(std::span<const double> x, std::span<double> gradient) const {
  const std::size_t d = axes_.size();
  if (x.size() != d) throw DimensionError("interpolation point has the wrong dimension");
  std::vector<std::size_t> base(d);
  std::vector<double> frac(d);
  for (std::size_t k = 0; k < d; ++k) std::tie(base[k], frac[k]) = locate(axes_[k], x[k]);
  if (!gradient.empty()) std::fill(gradient.begin(), gradient.end(), 0.0);
  double v = 0.0;
  for (std::size_t corner = 0; corner < (std::size_t{1} << d); ++corner) {
    std::size_t idx = 0;
    double w = 1.0;
    for (std::size_t k = 0; k < d; ++k) {
      const bool up = (corner >> (d - 1 - k)) & 1U;
      const std::size_t i = base[k] + ((up && axes_[k].count > 1) ? 1 : 0);
      idx = idx * axes_[k].count + i;
      w *= up ? frac[k] : 1.0 - frac[k];
    }
    const double y = values_[idx];
    v += w * y;
    if (gradient.empty()) continue;
    for (std::size_t k = 0; k < d; ++k) {
      if (axes_[k].count < 2) continue;
      double dw = 1.0;
      for (std::size_t q = 0; q < d; ++q) {
        const bool up = (corner >> (d - 1 - q)) & 1U;
        if (q == k) {
          dw *= up ? 1.0 : -1.0;
        } else {
          dw *= up ? frac[q] : 1.0 - frac[q];
        }
      }
      gradient[k] += dw * y / axes_[k].step();
    }
  }
  return v;
}

Eigen::MatrixXd draw_noise(std::size_t count, std::size_t noise_dim, double sigma2_nn, Rng& rng) {
  if (!(sigma2_nn >= 0.0)) throw ArgumentError("noise variance must be >= 0");
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd = std::sqrt(sigma2_nn);
  Eigen::MatrixXd e(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(noise_dim));
  for (Eigen::Index r = 0; r < e.rows(); ++r) {
    for (Eigen::Index c = 0; c < e.cols(); ++c) e(r, c) = sd * normal(rng);
  }
  return e;
}

std::vector<ActionPoint> sample_actions(const GeneratorNet& net, std::size_t count, double sigma2_nn,
                                        std::uint64_t seed) {
  if (count < 1) throw ArgumentError("need at least one action");
  Rng rng = make_rng(seed);
  const Eigen::MatrixXd a = net.forward(draw_noise(count, net.noise_dim(), sigma2_nn, rng));
  std::vector<ActionPoint> out;
  out.reserve(count);
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    std::vector<double> c(static_cast<std::size_t>(a.cols()));
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      c[static_cast<std::size_t>(k)] = std::clamp(a(r, k), net.lower()[static_cast<std::size_t>(k)],
                                                  net.upper()[static_cast<std::size_t>(k)]);
    }
    out.push_back(ActionPoint::Continuous(std::move(c)));
  }
  return out;
}

namespace {

// Correlation between two rows and its gradient with respect to the first
// row (the gradient for the second row is the negation).
double correlation_and_gradient(const Kernel& kernel, const double* a, const double* b, std::size_t d,
                                double* grad_a) {
  double sq = 0.0;
  for (std::size_t k = 0; k < d; ++k) sq += (a[k] - b[k]) * (a[k] - b[k]);
  const double h = kernel.length_scale();
  switch (kernel.variant()) {
    case KernelVariant::kSquaredExponential: {
      const double c = std::exp(-sq / (2.0 * h * h));
      for (std::size_t k = 0; k < d; ++k) grad_a[k] = -c * (a[k] - b[k]) / (h * h);
      return c;
    }
    case KernelVariant::kLaplacian: {
      const double r = std::sqrt(sq);
      const double c = std::exp(-r / h);
      for (std::size_t k = 0; k < d; ++k) grad_a[k] = r > 0.0 ? -c * (a[k] - b[k]) / (h * r) : 0.0;
      return c;
    }
    case KernelVariant::kWhiteNoise:
      for (std::size_t k = 0; k < d; ++k) grad_a[k] = 0.0;
      return sq == 0.0 ? 1.0 : 0.0;
    case KernelVariant::kHammingExponential:
      break;
  }
  throw ArgumentError("the generator needs a kernel over real coordinates");
}

}  // namespace

ObjectiveEvaluation evaluate_objective(const GeneratorNet& net, const GridInterpolator& y,
                                       const CurationObjectiveParams& params, const Eigen::MatrixXd& noise,
                                       std::size_t n, bool with_gradient) {
  params.validate();
  const auto m = static_cast<std::size_t>(params.m);
  const std::size_t per = 2 * m;
  if (n < 1) throw ArgumentError("batch size must be >= 1");
  if (static_cast<std::size_t>(noise.rows()) != n * per) throw DimensionError("noise batch must hold n * 2m rows");
  if (y.dim() != net.action_dim()) throw DimensionError("generator output does not match the grid dimension");

  const Tape tape = run_forward(net.layer_dims(), net.params(), net.lower(), net.upper(), noise);
  const Mat& acts = tape.actions;
  const std::size_t d = net.action_dim();
  const double sigma_em = params.sigma * expected_max_gaussian(params.m);
  const double inv_n = 1.0 / static_cast<double>(n);

  Mat d_actions = Mat::Zero(acts.rows(), acts.cols());
  ObjectiveEvaluation out;
  out.signature.reserve(acts.rows() + n);
  std::vector<double> row(d);
  std::vector<double> grad(d);
  std::vector<double> pair_grad(d);

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r0 = i * per;
    double y_sum = 0.0;
    for (std::size_t j = 0; j < per; ++j) {
      const auto r = static_cast<Eigen::Index>(r0 + j);
      for (std::size_t k = 0; k < d; ++k) row[k] = acts(r, static_cast<Eigen::Index>(k));
      y_sum += y.value(row, grad);
      out.signature.push_back(y.cell(row));
      if (with_gradient) {
        for (std::size_t k = 0; k < d; ++k) {
          d_actions(r, static_cast<Eigen::Index>(k)) += inv_n * grad[k] / static_cast<double>(per);
        }
      }
    }
    out.value += inv_n * y_sum / static_cast<double>(per);

    // Pairs (2j, 2j+1) within the element; row-major copies for the kernel.
    double corr_sum = 0.0;
    std::vector<double> pair_grads(per * d, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      const auto ra = static_cast<Eigen::Index>(r0 + 2 * j);
      const auto rb = ra + 1;
      std::vector<double> a(d), b(d);
      for (std::size_t k = 0; k < d; ++k) {
        a[k] = acts(ra, static_cast<Eigen::Index>(k));
        b[k] = acts(rb, static_cast<Eigen::Index>(k));
      }
      corr_sum += correlation_and_gradient(params.kernel, a.data(), b.data(), d, pair_grad.data());
      for (std::size_t k = 0; k < d; ++k) {
        pair_grads[2 * j * d + k] = pair_grad[k];
        pair_grads[(2 * j + 1) * d + k] = -pair_grad[k];
      }
    }
    const double arg = 1.0 - corr_sum / static_cast<double>(m);
    const bool clamped = arg < kDiversityFloor || arg > 1.0;
    out.signature.push_back(clamped ? 1 : 0);
    const double root = std::sqrt(std::clamp(arg, kDiversityFloor, 1.0));
    out.value += inv_n * sigma_em * root;
    if (with_gradient && !clamped && sigma_em != 0.0) {
      // d/d corr_j of sigma E_m sqrt(1 - mean corr) = -sigma E_m / (2 m root).
      const double coef = -inv_n * sigma_em / (2.0 * static_cast<double>(m) * root);
      for (std::size_t j = 0; j < per; ++j) {
        for (std::size_t k = 0; k < d; ++k) {
          d_actions(static_cast<Eigen::Index>(r0 + j), static_cast<Eigen::Index>(k)) += coef * pair_grads[j * d + k];
        }
      }
    }
  }

  if (with_gradient) {
    out.gradient = run_backward(net.layer_dims(), net.params(), net.lower(), net.upper(), tape, d_actions);
  }
  return out;
}

double batch_objective(const GeneratorNet& net, const GridInterpolator& y, const CurationObjectiveParams& params,
                       std::size_t n, double sigma2_nn, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  const auto noise = draw_noise(n * 2 * static_cast<std::size_t>(params.m), net.noise_dim(), sigma2_nn, rng);
  return evaluate_objective(net, y, params, noise, n, false).value;
}

void TrainConfig::validate() const {
  if (batch < 1 || iterations < 0) throw ArgumentError("training needs n >= 1 and T >= 0");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) throw ArgumentError("learning rate must be >= 0");
  if (!(sigma2_nn >= 0.0)) throw ArgumentError("noise variance must be >= 0");
}

TrainResult train(GeneratorNet net, const GridInterpolator& y, const CurationObjectiveParams& params,
                  const TrainConfig& cfg) {
  cfg.validate();
  params.validate();
  const std::size_t rows = cfg.batch * 2 * static_cast<std::size_t>(params.m);
  Rng rng = make_rng(cfg.seed);
  Rng eval_rng = make_rng(derive_seed(cfg.seed, 0xe7a1));
  const Eigen::MatrixXd eval_noise = draw_noise(rows, net.noise_dim(), cfg.sigma2_nn, eval_rng);

  TrainResult result{std::move(net), {}};
  result.trace.reserve(static_cast<std::size_t>(cfg.iterations));
  auto& theta = result.net.params();
  for (int t = 0; t < cfg.iterations; ++t) {
    const Eigen::MatrixXd noise = draw_noise(rows, result.net.noise_dim(), cfg.sigma2_nn, rng);
    const auto eval = evaluate_objective(result.net, y, params, noise, cfg.batch, true);
    for (double g : eval.gradient) {
      if (!std::isfinite(g)) throw NumericError("non-finite gradient at training iteration " + std::to_string(t));
    }
    for (std::size_t k = 0; k < theta.size(); ++k) theta[k] += cfg.learning_rate * eval.gradient[k];
    result.trace.push_back(evaluate_objective(result.net, y, params, eval_noise, cfg.batch, false).value);
  }
  return result;
}

GradientCheckReport gradient_check(const GeneratorNet& net, const GridInterpolator& y,
                                   const CurationObjectiveParams& params, std::size_t n, double sigma2_nn,
                                   std::uint64_t seed, std::size_t samples, double step) {
  Rng rng = make_rng(seed);
  const auto noise = draw_noise(n * 2 * static_cast<std::size_t>(params.m), net.noise_dim(), sigma2_nn, rng);
  const auto base = evaluate_objective(net, y, params, noise, n, true);
  GeneratorNet probe = net;
  auto& theta = probe.params();
  std::uniform_int_distribution<std::size_t> pick(0, theta.size() - 1);
  GradientCheckReport report;
  const std::size_t max_tries = 20 * samples;
  for (std::size_t tries = 0; report.checked < samples && tries < max_tries; ++tries) {
    const std::size_t k = pick(rng);
    const double saved = theta[k];
    theta[k] = saved + step;
    const auto plus = evaluate_objective(probe, y, params, noise, n, false);
    theta[k] = saved - step;
    const auto minus = evaluate_objective(probe, y, params, noise, n, false);
    theta[k] = saved;
    if (plus.signature != minus.signature || plus.signature != base.signature) {
      ++report.skipped;
      continue;
    }
    const double fd = (plus.value - minus.value) / (2.0 * step);
    const double g = base.gradient[k];
    const double rel = std::abs(g - fd) / std::max({std::abs(g), std::abs(fd), 1e-4});
    report.max_relative_error = std::max(report.max_relative_error, rel);
    ++report.checked;
  }
  return report;
}

}  // namespace gencur::nn
