#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "cyclproj/errors.hpp"
#include "cyclproj/plane.hpp"

namespace cyclproj {

inline PlanePoint rotate(const PlanePoint& z, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * z.x - s * z.y, s * z.x + c * z.y};
}

/// A point of the twisted solid torus: disc coordinates plus a height in [0, circumference).
struct ChainPoint {
  PlanePoint disc;
  double height = 0.0;

  friend bool operator==(const ChainPoint&, const ChainPoint&) = default;
};

/*
 * Flat solid torus D_r x R / ~ with (z, h) ~ (R_twist z, h + circumference).
 *
 * Distances are computed in the universal cover D_r x R by minimizing over the
 * lifts (R_{k twist} q.disc, q.height + k circumference) of the second point.
 * Three cross-sectional discs sit at disc_heights; each cyclic gap between
 * consecutive discs must be shorter than half the circumference so that the
 * nearest lift of one disc seen from its neighbour is unique.
 *
 * The space is flat but not simply connected, so it is not globally CAT(0).
 */
class TwistedChain {
public:
  using Point = ChainPoint;
  static constexpr double kDiscSlack = 1e-12;

  TwistedChain(double radius, double circumference, double twist)
      : TwistedChain(radius, circumference, twist,
                     {0.0, circumference / 3.0, 2.0 * circumference / 3.0}) {}

  TwistedChain(double radius, double circumference, double twist, std::array<double, 3> disc_heights)
      : radius_(radius), circumference_(circumference), twist_(twist), heights_(disc_heights) {
    if (!(radius_ > 0.0) || !std::isfinite(radius_)) throw DomainError("chain radius must be positive");
    if (!(circumference_ > 0.0) || !std::isfinite(circumference_)) {
      throw DomainError("chain circumference must be positive");
    }
    if (!std::isfinite(twist_)) throw DomainError("chain twist must be finite");
    for (std::size_t i = 0; i < 3; ++i) {
      if (!(heights_[i] >= 0.0 && heights_[i] < circumference_)) {
        throw DomainError("disc height outside [0, circumference)");
      }
      if (i > 0 && !(heights_[i] > heights_[i - 1])) {
        throw DomainError("disc heights must be strictly increasing");
      }
    }
    for (std::size_t i = 0; i < 3; ++i) {
      if (!(gap_after(i) < 0.5 * circumference_)) {
        throw DomainError("disc gap " + std::to_string(i) + " is not shorter than half the circumference");
      }
    }
  }

  double radius() const { return radius_; }
  double circumference() const { return circumference_; }
  double twist() const { return twist_; }
  const std::array<double, 3>& disc_heights() const { return heights_; }

  /// Height gap from disc i up to disc i+1 (cyclically, wrapping once for i = 2).
  double gap_after(std::size_t i) const {
    return i + 1 < 3 ? heights_[i + 1] - heights_[i] : heights_[0] + circumference_ - heights_[2];
  }

  /// Builds a point from any representative, moving the height into [0, circumference).
  ChainPoint point(PlanePoint disc, double height) const {
    if (!std::isfinite(height)) throw DomainError("chain height must be finite");
    const double k = std::floor(height / circumference_);
    double h = height - k * circumference_;
    if (h >= circumference_) h -= circumference_;
    if (h < 0.0) h = 0.0;
    ChainPoint p{k == 0.0 ? disc : rotate(disc, -k * twist_), h};
    validate(p);
    return p;
  }

  void validate(const ChainPoint& p) const {
    if (!std::isfinite(p.disc.x) || !std::isfinite(p.disc.y)) throw DomainError("chain point not finite");
    if (p.disc.x * p.disc.x + p.disc.y * p.disc.y > radius_ * radius_ + kDiscSlack) {
      throw DomainError("chain point outside the disc of radius " + std::to_string(radius_));
    }
    if (!(p.height >= 0.0 && p.height < circumference_)) {
      throw DomainError("chain height not normalized to [0, circumference)");
    }
  }

  double distance(const ChainPoint& p, const ChainPoint& q) const {
    validate(p);
    validate(q);
    return lifted_distance(p.disc, p.height, q.disc, q.height);
  }

  /*
   * Distance between arbitrary representatives (disc, height) in the cover,
   * heights not necessarily normalized. Lifts further than the window add at
   * least one circumference of vertical distance to an enumerated candidate.
   */
  double lifted_distance(const PlanePoint& p_disc, double p_height, const PlanePoint& q_disc,
                         double q_height) const {
    const double dh = p_height - q_height;
    const double centre = std::round(dh / circumference_);
    const int window = 2 + static_cast<int>(std::ceil((std::abs(dh - centre * circumference_) + circumference_) /
                                                      circumference_));
    double best = std::numeric_limits<double>::infinity();
    for (int j = -window; j <= window; ++j) {
      const double k = centre + j;
      const PlanePoint lifted = k == 0.0 ? q_disc : rotate(q_disc, k * twist_);
      const double d = std::hypot(std::hypot(p_disc.x - lifted.x, p_disc.y - lifted.y), dh - k * circumference_);
      best = std::min(best, d);
    }
    return best;
  }

private:
  double radius_;
  double circumference_;
  double twist_;
  std::array<double, 3> heights_;
};

}  // namespace cyclproj
