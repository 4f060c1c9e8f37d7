#pragma once

// Stationary covariance kernels over continuous boxes and binary vectors.
//
//   squared-exponential  k(a,b) = s2 * exp(-|a-b|^2 / (2 h^2))
//   laplacian            k(a,b) = s2 * exp(-|a-b| / h)
//   white-noise          k(a,b) = s2 * kappa * 1{a == b}
//   hamming-exponential  k(a,b) = s2 * exp(-d_H(a,b) / h)
//
// The squared-exponential keeps the factor 2 in the denominator while the
// Hamming variant has none; both are used exactly as written above.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace gencur {

enum class Representation { kContinuous, kBinary };

/// A single action: either real coordinates or a fixed-width bit vector.
class ActionPoint {
 public:
  ActionPoint() = default;

  static ActionPoint Continuous(std::vector<double> coords);
  static ActionPoint Binary(std::vector<std::uint8_t> bits);

  Representation representation() const { return rep_; }
  bool is_binary() const { return rep_ == Representation::kBinary; }
  std::size_t dim() const { return is_binary() ? bits_.size() : coords_.size(); }

  const std::vector<double>& coords() const;
  const std::vector<std::uint8_t>& bits() const;

  bool operator==(const ActionPoint&) const = default;

 private:
  Representation rep_ = Representation::kContinuous;
  std::vector<double> coords_;
  std::vector<std::uint8_t> bits_;
};

nlohmann::json to_json(const ActionPoint& p);
ActionPoint action_from_json(const nlohmann::json& j);

enum class KernelVariant { kSquaredExponential, kLaplacian, kWhiteNoise, kHammingExponential };

class Kernel {
 public:
  static Kernel SquaredExponential(double length_scale, double amplitude = 1.0);
  static Kernel Laplacian(double length_scale, double amplitude = 1.0);
  static Kernel WhiteNoise(double kappa, double amplitude = 1.0);
  static Kernel HammingExponential(double length_scale, double amplitude = 1.0);

  KernelVariant variant() const { return variant_; }
  double length_scale() const { return h_; }
  double kappa() const { return kappa_; }
  double amplitude() const { return amplitude_; }

  /// k(a, a): the amplitude, times kappa for white noise.
  double variance() const;

  double operator()(const ActionPoint& a, const ActionPoint& b) const;

  /// k(a, b) / k(a, a) computed with unit amplitude, so it is defined even
  /// when the amplitude is zero. Always in [0, 1].
  double correlation(const ActionPoint& a, const ActionPoint& b) const;

  Kernel with_amplitude(double amplitude) const;

  /// True when the kernel factorizes over coordinates of a product grid.
  bool separable() const;

  bool operator==(const Kernel&) const = default;

 private:
  Kernel(KernelVariant v, double h, double kappa, double amplitude);

  KernelVariant variant_ = KernelVariant::kSquaredExponential;
  double h_ = 1.0;
  double kappa_ = 1.0;
  double amplitude_ = 1.0;
};

double evaluate(const Kernel& kernel, const ActionPoint& a, const ActionPoint& b);

/// M(i, j) = k(points[i], points[j]).
Eigen::MatrixXd gram(const Kernel& kernel, std::span<const ActionPoint> points);

/// Unit-amplitude counterpart of gram(): entries are correlations.
Eigen::MatrixXd correlation_matrix(const Kernel& kernel, std::span<const ActionPoint> points);

/// Relative diagonal jitter used before factorizing Gram matrices.
inline constexpr double kGramJitter = 1e-8;

std::string variant_tag(KernelVariant v);
KernelVariant variant_from_tag(const std::string& tag);

/// {"variant": "sqexp"|"laplace"|"white"|"hamming", "h", "kappa", "sigma2"}
nlohmann::json to_json(const Kernel& k);
Kernel kernel_from_json(const nlohmann::json& j);

}  // namespace gencur
