#include "gencur/kernels.hpp"

#include <cmath>
#include <utility>

#include "gencur/errors.hpp"

namespace gencur {

ActionPoint ActionPoint::Continuous(std::vector<double> coords) {
  ActionPoint p;
  p.rep_ = Representation::kContinuous;
  p.coords_ = std::move(coords);
  return p;
}

ActionPoint ActionPoint::Binary(std::vector<std::uint8_t> bits) {
  for (auto b : bits) {
    if (b > 1) throw ArgumentError("binary action entries must be 0 or 1");
  }
  ActionPoint p;
  p.rep_ = Representation::kBinary;
  p.bits_ = std::move(bits);
  return p;
}

const std::vector<double>& ActionPoint::coords() const {
  if (is_binary()) throw DimensionError("binary action has no real coordinates");
  return coords_;
}

const std::vector<std::uint8_t>& ActionPoint::bits() const {
  if (!is_binary()) throw DimensionError("continuous action has no bit vector");
  return bits_;
}

nlohmann::json to_json(const ActionPoint& p) {
  if (p.is_binary()) return {{"bits", p.bits()}};
  return {{"coords", p.coords()}};
}

ActionPoint action_from_json(const nlohmann::json& j) {
  if (j.contains("bits")) return ActionPoint::Binary(j.at("bits").get<std::vector<std::uint8_t>>());
  if (j.contains("coords")) return ActionPoint::Continuous(j.at("coords").get<std::vector<double>>());
  throw ArgumentError("action JSON needs 'coords' or 'bits'");
}

Kernel::Kernel(KernelVariant v, double h, double kappa, double amplitude)
    : variant_(v), h_(h), kappa_(kappa), amplitude_(amplitude) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw ArgumentError("kernel amplitude must be finite and >= 0");
  }
  if (v == KernelVariant::kWhiteNoise) {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ArgumentError("white-noise kappa must be > 0");
  } else if (!(h > 0.0) || !std::isfinite(h)) {
    throw ArgumentError("kernel length-scale must be > 0");
  }
}

Kernel Kernel::SquaredExponential(double h, double amplitude) {
  return Kernel(KernelVariant::kSquaredExponential, h, 1.0, amplitude);
}
Kernel Kernel::Laplacian(double h, double amplitude) {
  return Kernel(KernelVariant::kLaplacian, h, 1.0, amplitude);
}
Kernel Kernel::WhiteNoise(double kappa, double amplitude) {
  return Kernel(KernelVariant::kWhiteNoise, 1.0, kappa, amplitude);
}
Kernel Kernel::HammingExponential(double h, double amplitude) {
  return Kernel(KernelVariant::kHammingExponential, h, 1.0, amplitude);
}

double Kernel::variance() const {
  return variant_ == KernelVariant::kWhiteNoise ? amplitude_ * kappa_ : amplitude_;
}

Kernel Kernel::with_amplitude(double amplitude) const {
  return Kernel(variant_, h_, kappa_, amplitude);
}

bool Kernel::separable() const {
  return variant_ == KernelVariant::kSquaredExponential || variant_ == KernelVariant::kWhiteNoise;
}

namespace {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

std::size_t hamming(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += a[i] != b[i];
  return n;
}

void check_compatible(const ActionPoint& a, const ActionPoint& b) {
  if (a.representation() != b.representation()) {
    throw DimensionError("kernel arguments use different action representations");
  }
  if (a.dim() != b.dim()) {
    throw DimensionError("kernel arguments have dimensions " + std::to_string(a.dim()) + " and " +
                         std::to_string(b.dim()));
  }
}

}  // namespace

double Kernel::correlation(const ActionPoint& a, const ActionPoint& b) const {
  check_compatible(a, b);
  switch (variant_) {
    case KernelVariant::kSquaredExponential:
      if (a.is_binary()) throw DimensionError("squared-exponential kernel needs real coordinates");
      return std::exp(-squared_distance(a.coords(), b.coords()) / (2.0 * h_ * h_));
    case KernelVariant::kLaplacian:
      if (a.is_binary()) throw DimensionError("laplacian kernel needs real coordinates");
      return std::exp(-std::sqrt(squared_distance(a.coords(), b.coords())) / h_);
    case KernelVariant::kWhiteNoise:
      return a == b ? 1.0 : 0.0;
    case KernelVariant::kHammingExponential:
      if (!a.is_binary()) throw DimensionError("hamming-exponential kernel needs binary actions");
      return std::exp(-static_cast<double>(hamming(a.bits(), b.bits())) / h_);
  }
  throw InternalError("unknown kernel variant");
}

double Kernel::operator()(const ActionPoint& a, const ActionPoint& b) const {
  return variance() * correlation(a, b);
}

double evaluate(const Kernel& kernel, const ActionPoint& a, const ActionPoint& b) {
  return kernel(a, b);
}

Eigen::MatrixXd correlation_matrix(const Kernel& kernel, std::span<const ActionPoint> points) {
  if (points.empty()) throw ArgumentError("gram needs at least one point");
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = kernel.correlation(points[i], points[i]);
    for (Eigen::Index j = 0; j < i; ++j) {
      m(i, j) = m(j, i) = kernel.correlation(points[i], points[j]);
    }
  }
  return m;
}

Eigen::MatrixXd gram(const Kernel& kernel, std::span<const ActionPoint> points) {
  return kernel.variance() * correlation_matrix(kernel, points);
}

std::string variant_tag(KernelVariant v) {
  switch (v) {
    case KernelVariant::kSquaredExponential: return "sqexp";
    case KernelVariant::kLaplacian: return "laplace";
    case KernelVariant::kWhiteNoise: return "white";
    case KernelVariant::kHammingExponential: return "hamming";
  }
  throw InternalError("unknown kernel variant");
}

KernelVariant variant_from_tag(const std::string& tag) {
  if (tag == "sqexp") return KernelVariant::kSquaredExponential;
  if (tag == "laplace") return KernelVariant::kLaplacian;
  if (tag == "white") return KernelVariant::kWhiteNoise;
  if (tag == "hamming") return KernelVariant::kHammingExponential;
  throw ArgumentError("unknown kernel variant '" + tag + "'");
}

nlohmann::json to_json(const Kernel& k) {
  return {{"variant", variant_tag(k.variant())},
          {"h", k.length_scale()},
          {"kappa", k.kappa()},
          {"sigma2", k.amplitude()}};
}

Kernel kernel_from_json(const nlohmann::json& j) {
  const auto v = variant_from_tag(j.at("variant").get<std::string>());
  const double h = j.value("h", 1.0);
  const double kappa = j.value("kappa", 1.0);
  const double sigma2 = j.value("sigma2", 1.0);
  switch (v) {
    case KernelVariant::kSquaredExponential: return Kernel::SquaredExponential(h, sigma2);
    case KernelVariant::kLaplacian: return Kernel::Laplacian(h, sigma2);
    case KernelVariant::kWhiteNoise: return Kernel::WhiteNoise(kappa, sigma2);
    case KernelVariant::kHammingExponential: return Kernel::HammingExponential(h, sigma2);
  }
  throw InternalError("unknown kernel variant");
}

}  // namespace gencur
