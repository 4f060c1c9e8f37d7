#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "gencur/kernels.hpp"
#include "json.hpp"

namespace gencur {

/// One axis of a uniform evaluation grid: `count` equidistant points
/// spanning [lower, upper] inclusive.
struct GridAxis {
  double lower = 0.0;
  double upper = 1.0;
  std::size_t count = 2;

  double step() const { return count > 1 ? (upper - lower) / static_cast<double>(count - 1) : 0.0; }
  double value(std::size_t i) const;
};

/// The finite action representation every solver works on: either a
/// row-major product grid over a box (last axis fastest) or an explicit
/// enumeration of binary vectors.
class ActionSpace {
 public:
  static ActionSpace Grid(std::vector<GridAxis> axes);
  static ActionSpace Enumerated(std::vector<ActionPoint> points);

  bool is_grid() const { return !axes_.empty(); }
  std::size_t size() const { return points_.size(); }
  std::size_t dim() const { return dim_; }
  Representation representation() const {
    return is_grid() ? Representation::kContinuous : Representation::kBinary;
  }

  const ActionPoint& point(std::size_t i) const { return points_.at(i); }
  std::span<const ActionPoint> points() const { return points_; }
  const std::vector<GridAxis>& axes() const { return axes_; }

  /// Index of the nearest grid point (ties to the lower index) or of the
  /// identical enumerated vector. Throws DomainError when `a` lies outside
  /// the box or is not enumerated.
  std::size_t snap(const ActionPoint& a) const;

  std::vector<std::size_t> unravel(std::size_t index) const;
  std::size_t ravel(std::span<const std::size_t> multi) const;

  /// Enumerated spaces only: index of the vector with the given bit mask
  /// (bit i = coordinate i), or size() if it is not enumerated.
  std::size_t find_mask(std::uint64_t mask) const;
  std::uint64_t mask(std::size_t index) const;

  /// Squared Euclidean distance for grids, Hamming distance for binary.
  double squared_distance(std::size_t i, std::size_t j) const;

 private:
  std::vector<GridAxis> axes_;
  std::vector<ActionPoint> points_;
  std::size_t dim_ = 0;
  std::vector<std::uint64_t> masks_;
  std::unordered_map<std::uint64_t, std::size_t> mask_index_;
};

nlohmann::json to_json(const ActionSpace& s);
ActionSpace space_from_json(const nlohmann::json& j);

}  // namespace gencur
