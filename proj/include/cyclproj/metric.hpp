#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <numbers>

#include "cyclproj/errors.hpp"

namespace cyclproj {

template <class S>
concept MetricSpace = requires(const S& space, const typename S::Point& p) {
  { space.distance(p, p) } -> std::convertible_to<double>;
  space.validate(p);
};

template <class S>
concept GeodesicSpace = MetricSpace<S> && requires(const S& space, const typename S::Point& p, double t) {
  { space.geodesic(p, p, t) } -> std::same_as<typename S::Point>;
};

/// Tolerance on the law-of-cosines argument before it is clamped to [-1, 1].
inline constexpr double kCosineSlack = 1e-9;

/// Angle at vertex a of the Euclidean triangle with side lengths |ab|, |ac|, |bc|.
inline double comparison_angle(double d_ab, double d_ac, double d_bc) {
  if (!(d_ab > 0.0) || !(d_ac > 0.0)) {
    throw UndefinedAngle("comparison angle needs positive adjacent sides");
  }
  const double c = (d_ab * d_ab + d_ac * d_ac - d_bc * d_bc) / (2.0 * d_ab * d_ac);
  if (!(std::abs(c) <= 1.0 + kCosineSlack)) {
    throw DomainError("side lengths violate the triangle inequality");
  }
  return std::acos(std::clamp(c, -1.0, 1.0));
}

/// Comparison angle at a for three points of a metric space.
template <MetricSpace S>
double comparison_angle(const S& space, const typename S::Point& a, const typename S::Point& b,
                        const typename S::Point& c) {
  return comparison_angle(space.distance(a, b), space.distance(a, c), space.distance(b, c));
}

/*
 * Margin of the CN inequality for x and the midpoint m of [y, z]:
 *   1/2 d(x,y)^2 + 1/2 d(x,z)^2 - 1/4 d(y,z)^2 - d(x,m)^2.
 * A non-negative margin is what CAT(0) requires of every triple.
 */
template <GeodesicSpace S>
double cn_margin(const S& space, const typename S::Point& x, const typename S::Point& y,
                 const typename S::Point& z) {
  const auto m = space.geodesic(y, z, 0.5);
  const double dxy = space.distance(x, y);
  const double dxz = space.distance(x, z);
  const double dyz = space.distance(y, z);
  const double dxm = space.distance(x, m);
  return 0.5 * dxy * dxy + 0.5 * dxz * dxz - 0.25 * dyz * dyz - dxm * dxm;
}

}  // namespace cyclproj
