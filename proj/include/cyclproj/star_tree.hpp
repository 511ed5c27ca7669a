#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "cyclproj/errors.hpp"

namespace cyclproj {

/// A point on a star tree: a leg index and the distance from the center.
/// The center is always stored as (0, 0.0) so equality is structural.
class StarPoint {
public:
  StarPoint() = default;
  StarPoint(std::size_t leg, double offset) : leg_(offset == 0.0 ? 0 : leg), offset_(offset) {}

  static StarPoint center() { return {}; }

  std::size_t leg() const { return leg_; }
  double offset() const { return offset_; }
  bool is_center() const { return offset_ == 0.0; }

  friend bool operator==(const StarPoint&, const StarPoint&) = default;

private:
  std::size_t leg_ = 0;
  double offset_ = 0.0;
};

/*
 * k segments glued at a common endpoint, with the induced length metric.
 * Two points on the same leg are joined along that leg; points on different
 * legs are joined through the center.
 */
class StarTree {
public:
  using Point = StarPoint;

  explicit StarTree(std::vector<double> leg_lengths) : leg_lengths_(std::move(leg_lengths)) {
    if (leg_lengths_.size() < 3) {
      throw DomainError("star tree needs at least 3 legs, got " + std::to_string(leg_lengths_.size()));
    }
    for (double len : leg_lengths_) {
      if (!(len > 0.0) || !std::isfinite(len)) {
        throw DomainError("star tree leg lengths must be positive and finite");
      }
    }
  }

  /// Equal legs of length 1, the tripod when leg_count == 3.
  static StarTree unit(std::size_t leg_count = 3) { return StarTree(std::vector<double>(leg_count, 1.0)); }

  std::size_t leg_count() const { return leg_lengths_.size(); }
  double leg_length(std::size_t leg) const { return leg_lengths_.at(leg); }
  const std::vector<double>& leg_lengths() const { return leg_lengths_; }

  friend bool operator==(const StarTree&, const StarTree&) = default;

  void validate(const StarPoint& p) const {
    if (p.leg() >= leg_count()) {
      throw DomainError("leg index " + std::to_string(p.leg()) + " out of range");
    }
    if (!(p.offset() >= 0.0) || p.offset() > leg_lengths_[p.leg()]) {
      throw DomainError("offset " + std::to_string(p.offset()) + " outside leg " + std::to_string(p.leg()));
    }
  }

  double distance(const StarPoint& p, const StarPoint& q) const {
    validate(p);
    validate(q);
    if (p.leg() == q.leg() || p.is_center() || q.is_center()) {
      return std::abs(p.offset() - q.offset());
    }
    return p.offset() + q.offset();
  }

  /// Constant-speed geodesic from p (t = 0) to q (t = 1).
  StarPoint geodesic(const StarPoint& p, const StarPoint& q, double t) const {
    validate(p);
    validate(q);
    if (!(t >= 0.0 && t <= 1.0)) {
      throw DomainError("geodesic parameter must lie in [0, 1]");
    }
    if (t == 0.0) return p;
    if (t == 1.0) return q;

    if (p.leg() == q.leg() || p.is_center() || q.is_center()) {
      const std::size_t leg = p.is_center() ? q.leg() : p.leg();
      const double offset = (1.0 - t) * p.offset() + t * q.offset();
      return clamp_on(leg, offset);
    }
    const double s = t * (p.offset() + q.offset());
    if (s < p.offset()) {
      return clamp_on(p.leg(), p.offset() - s);
    }
    return clamp_on(q.leg(), s - p.offset());
  }

private:
  StarPoint clamp_on(std::size_t leg, double offset) const {
    return {leg, std::clamp(offset, 0.0, leg_lengths_[leg])};
  }

  std::vector<double> leg_lengths_;
};

}  // namespace cyclproj
