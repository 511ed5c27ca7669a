#pragma once

#include <cmath>

#include "cyclproj/errors.hpp"

namespace cyclproj {

struct PlanePoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const PlanePoint&, const PlanePoint&) = default;
};

/// The Euclidean plane.
class Plane {
public:
  using Point = PlanePoint;

  friend bool operator==(const Plane&, const Plane&) = default;

  void validate(const PlanePoint& p) const {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw DomainError("plane point has non-finite coordinates");
    }
  }

  double distance(const PlanePoint& p, const PlanePoint& q) const {
    validate(p);
    validate(q);
    return std::hypot(p.x - q.x, p.y - q.y);
  }

  PlanePoint geodesic(const PlanePoint& p, const PlanePoint& q, double t) const {
    validate(p);
    validate(q);
    if (!(t >= 0.0 && t <= 1.0)) {
      throw DomainError("geodesic parameter must lie in [0, 1]");
    }
    return {(1.0 - t) * p.x + t * q.x, (1.0 - t) * p.y + t * q.y};
  }
};

}  // namespace cyclproj
