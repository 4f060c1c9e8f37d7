#include "gencur/action_space.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "gencur/errors.hpp"

namespace gencur {

double GridAxis::value(std::size_t i) const {
  if (i + 1 == count) return upper;
  return lower + static_cast<double>(i) * step();
}

ActionSpace ActionSpace::Grid(std::vector<GridAxis> axes) {
  if (axes.empty()) throw ArgumentError("grid needs at least one axis");
  std::size_t total = 1;
  for (const auto& ax : axes) {
    if (ax.count == 0) throw ArgumentError("grid axis must have at least one point");
    if (!(ax.upper >= ax.lower)) throw ArgumentError("grid axis upper bound below lower bound");
    if (ax.count == 1 && ax.upper != ax.lower) throw ArgumentError("single-point axis needs lower == upper");
    total *= ax.count;
  }
  ActionSpace s;
  s.axes_ = std::move(axes);
  s.dim_ = s.axes_.size();
  s.points_.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    const auto multi = s.unravel(idx);
    std::vector<double> c(s.dim_);
    for (std::size_t k = 0; k < s.dim_; ++k) c[k] = s.axes_[k].value(multi[k]);
    s.points_.push_back(ActionPoint::Continuous(std::move(c)));
  }
  return s;
}

ActionSpace ActionSpace::Enumerated(std::vector<ActionPoint> points) {
  if (points.empty()) throw ArgumentError("enumerated space must be non-empty");
  ActionSpace s;
  s.dim_ = points.front().dim();
  if (s.dim_ > 63) throw ArgumentError("binary actions are limited to 63 coordinates");
  for (const auto& p : points) {
    if (!p.is_binary()) throw DimensionError("enumerated spaces hold binary actions");
    if (p.dim() != s.dim_) throw DimensionError("enumerated actions differ in dimension");
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < s.dim_; ++i) m |= static_cast<std::uint64_t>(p.bits()[i]) << i;
    if (!s.mask_index_.emplace(m, s.masks_.size()).second) {
      throw ArgumentError("enumerated space contains a duplicate action");
    }
    s.masks_.push_back(m);
  }
  s.points_ = std::move(points);
  return s;
}

std::vector<std::size_t> ActionSpace::unravel(std::size_t index) const {
  std::vector<std::size_t> multi(axes_.size());
  for (std::size_t k = axes_.size(); k-- > 0;) {
    multi[k] = index % axes_[k].count;
    index /= axes_[k].count;
  }
  return multi;
}

std::size_t ActionSpace::ravel(std::span<const std::size_t> multi) const {
  if (multi.size() != axes_.size()) throw DimensionError("multi-index has the wrong rank");
  std::size_t idx = 0;
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    if (multi[k] >= axes_[k].count) throw DomainError("multi-index out of range");
    idx = idx * axes_[k].count + multi[k];
  }
  return idx;
}

std::size_t ActionSpace::snap(const ActionPoint& a) const {
  if (a.dim() != dim_) throw DimensionError("action dimension does not match the space");
  if (!is_grid()) {
    if (!a.is_binary()) throw DimensionError("enumerated space expects a binary action");
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < dim_; ++i) m |= static_cast<std::uint64_t>(a.bits()[i]) << i;
    const auto idx = find_mask(m);
    if (idx == size()) throw DomainError("action is not in the enumerated feasible set");
    return idx;
  }
  if (a.is_binary()) throw DimensionError("grid space expects real coordinates");
  std::vector<std::size_t> multi(dim_);
  for (std::size_t k = 0; k < dim_; ++k) {
    const auto& ax = axes_[k];
    const double x = a.coords()[k];
    const double slack = 1e-9 * std::max(1.0, ax.upper - ax.lower);
    if (!std::isfinite(x) || x < ax.lower - slack || x > ax.upper + slack) {
      throw DomainError("coordinate " + std::to_string(x) + " outside [" + std::to_string(ax.lower) +
                        ", " + std::to_string(ax.upper) + "]");
    }
    if (ax.count == 1) {
      multi[k] = 0;
      continue;
    }
    const double t = (x - ax.lower) / ax.step();
    // ceil(t - 0.5) rounds exact midpoints down to the lower index.
    auto i = static_cast<long long>(std::ceil(t - 0.5));
    i = std::clamp<long long>(i, 0, static_cast<long long>(ax.count) - 1);
    multi[k] = static_cast<std::size_t>(i);
  }
  return ravel(multi);
}

std::size_t ActionSpace::find_mask(std::uint64_t mask) const {
  const auto it = mask_index_.find(mask);
  return it == mask_index_.end() ? size() : it->second;
}

std::uint64_t ActionSpace::mask(std::size_t index) const {
  if (is_grid()) throw DimensionError("grid spaces have no bit masks");
  return masks_.at(index);
}

double ActionSpace::squared_distance(std::size_t i, std::size_t j) const {
  if (!is_grid()) return static_cast<double>(std::popcount(masks_[i] ^ masks_[j]));
  const auto& a = points_[i].coords();
  const auto& b = points_[j].coords();
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s;
}

nlohmann::json to_json(const ActionSpace& s) {
  if (s.is_grid()) {
    auto axes = nlohmann::json::array();
    for (const auto& ax : s.axes()) {
      axes.push_back({{"lower", ax.lower}, {"upper", ax.upper}, {"count", ax.count}});
    }
    return {{"kind", "grid"}, {"axes", axes}};
  }
  auto pts = nlohmann::json::array();
  for (const auto& p : s.points()) pts.push_back(p.bits());
  return {{"kind", "enumerated"}, {"points", pts}};
}

ActionSpace space_from_json(const nlohmann::json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "grid") {
    std::vector<GridAxis> axes;
    for (const auto& a : j.at("axes")) {
      axes.push_back({a.at("lower").get<double>(), a.at("upper").get<double>(),
                      a.at("count").get<std::size_t>()});
    }
    return ActionSpace::Grid(std::move(axes));
  }
  if (kind == "enumerated") {
    std::vector<ActionPoint> pts;
    for (const auto& b : j.at("points")) pts.push_back(ActionPoint::Binary(b.get<std::vector<std::uint8_t>>()));
    return ActionSpace::Enumerated(std::move(pts));
  }
  throw ArgumentError("unknown action space kind '" + kind + "'");
}

}  // namespace gencur
