#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cyclproj/convex_sets.hpp"
#include "cyclproj/errors.hpp"

namespace cyclproj {

enum class Expectation { NotRegular, Regular, RegularWithRate };

inline const char* to_string(Expectation e) {
  switch (e) {
    case Expectation::NotRegular: return "NotRegular";
    case Expectation::Regular: return "Regular";
    case Expectation::RegularWithRate: return "RegularWithRate";
  }
  return "unknown";
}

struct ExpectedBehavior {
  Expectation kind = Expectation::Regular;
  double bound = 0.0;  // liminf of r_n for NotRegular
  std::string note;
};

template <class Point>
struct LabeledStart {
  std::string label;
  Point point;
};

template <class Space, class Set>
struct Scenario {
  using SpaceType = Space;
  using SetType = Set;
  using Point = typename Space::Point;

  std::string name;
  Space space;
  std::vector<Set> sets;
  std::vector<LabeledStart<Point>> starts;  // the first one is the recommended start
  ExpectedBehavior expected;

  const Point& start(std::string_view label) const {
    for (const auto& s : starts) {
      if (s.label == label) return s.point;
    }
    throw UsageError("scenario " + name + " has no start labelled '" + std::string(label) + "'");
  }
};

using TripodScenario = Scenario<TreeProduct, TreeSegment>;
using PlaneScenario = Scenario<Plane, PlaneSet>;
using ChainScenario = Scenario<TwistedChain, CrossDisc>;

/// Half-width of the tripod segments in each leg coordinate.
inline constexpr double kTripodHalfWidth = std::numbers::sqrt2 / 4.0;

/// Slope -1 segment of S x T on leg `leg` of both factors, centered at offsets (1/2, 1/2).
inline TreeSegment tripod_segment(std::size_t leg) {
  constexpr double d = kTripodHalfWidth;
  return {{{leg, 0.5 + d}, {leg, 0.5 - d}}, {{leg, 0.5 - d}, {leg, 0.5 + d}}};
}

/// Parameter in [0, 1] of a point on a single-leg tree segment, read off the left factor.
inline double segment_parameter(const TreeSegment& seg, const TreeProductPoint& p) {
  const double span = seg.end.left.offset() - seg.start.left.offset();
  if (span == 0.0) throw DomainError("segment has no extent in the left factor");
  return (p.left.offset() - seg.start.left.offset()) / span;
}

/*
 * Two unit tripods S (legs a, b, c) and T (legs u, v, w) as legs 0, 1, 2.
 * C_1, C_2, C_3 are unit-length slope -1 segments over legs (a, u), (b, v),
 * (c, w); sets 4..k repeat C_3. Each projection maps C_{i+1} onto C_i
 * reversing orientation, so P swaps the endpoints of C_1.
 */
inline TripodScenario build_tripod_counterexample(std::size_t k = 3) {
  if (k < 3) throw DomainError("tripod counterexample needs k >= 3, got " + std::to_string(k));
  std::vector<TreeSegment> sets{tripod_segment(0), tripod_segment(1), tripod_segment(2)};
  while (sets.size() < k) sets.push_back(tripod_segment(2));
  const TreeSegment& c1 = sets.front();
  const TreeProductPoint mid{{0, 0.5}, {0, 0.5}};
  return {"tripod",
          unit_tripod_product(),
          std::move(sets),
          {{"endpoint", c1.start}, {"midpoint", mid}, {"center", {StarPoint::center(), StarPoint::center()}}},
          {Expectation::NotRegular, 1.0, "P exchanges the endpoints of C1, so |P^n(e) - P^(n+1)(e)| = 1"}};
}

/// x-axis and {x > 0, y >= 1 + x^-epsilon}: regular with |x_n - x_{n+1}| = o(n^-1/2), and no faster than
/// n^-(1+epsilon)/(2+epsilon).
inline PlaneScenario build_plane_two_sets(double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("plane-two-sets needs epsilon > 0");
  return {"plane-two-sets",
          Plane{},
          {AxisLine{}, Epigraph(epsilon)},
          {{"default", {1.0, 0.0}}},
          {Expectation::RegularWithRate, 0.0, "two-set cyclic projections are asymptotically regular at rate o(1/sqrt(n))"}};
}

/*
 * Three cross-sectional discs at heights 0, L/3, 2L/3 of the twisted solid
 * torus. The cycle disc 0 -> disc 2 -> disc 1 -> disc 0 wraps the gluing
 * exactly once (in the first projection), so P acts on disc 0 as rotation
 * by alpha.
 */
inline ChainScenario build_twisted_chain(double alpha, double radius, double circumference) {
  TwistedChain chain(radius, circumference, alpha);
  const double bound = 2.0 * radius * std::abs(std::sin(alpha / 2.0));
  ExpectedBehavior expected{bound > 0.0 ? Expectation::NotRegular : Expectation::Regular, bound,
                            "P rotates disc 0 by alpha, so every step from a boundary point has length 2 r |sin(alpha/2)|"};
  const double h0 = chain.disc_heights()[0];
  return {"twisted-chain",
          chain,
          {CrossDisc{0}, CrossDisc{1}, CrossDisc{2}},
          {{"boundary", ChainPoint{{radius, 0.0}, h0}}, {"center", ChainPoint{{0.0, 0.0}, h0}}},
          std::move(expected)};
}

/// x-axis and the line at angle theta: intersecting at the origin, converging geometrically with ratio cos^2 theta.
inline PlaneScenario build_plane_two_lines(double theta) {
  if (!(theta > 0.0 && theta < std::numbers::pi / 2.0)) {
    throw DomainError("plane-two-lines needs theta in (0, pi/2)");
  }
  return {"plane-two-lines",
          Plane{},
          {AxisLine{}, LineThroughOrigin(theta)},
          {{"default", {1.0, 0.0}}, {"origin", {0.0, 0.0}}},
          {Expectation::Regular, 0.0, "lines meeting at the origin: r_{n+1} / r_n = cos^2 theta"}};
}

// ---------------------------------------------------------------------------
// Catalog

using AnyScenario = std::variant<TripodScenario, PlaneScenario, ChainScenario>;

struct ScenarioParams {
  std::size_t k = 3;
  double epsilon = 0.5;
  double alpha = 1.0;
  double radius = 0.1;
  double circumference = 3.0;
  double theta = std::numbers::pi / 4.0;
};

class UnknownScenario : public UsageError {
public:
  using UsageError::UsageError;
};

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"tripod", "plane-two-sets", "twisted-chain", "plane-two-lines"};
  return names;
}

inline AnyScenario build_scenario(std::string_view name, const ScenarioParams& p = {}) {
  if (name == "tripod") return build_tripod_counterexample(p.k);
  if (name == "plane-two-sets") return build_plane_two_sets(p.epsilon);
  if (name == "twisted-chain") return build_twisted_chain(p.alpha, p.radius, p.circumference);
  if (name == "plane-two-lines") return build_plane_two_lines(p.theta);
  throw UnknownScenario("unknown scenario '" + std::string(name) + "'");
}

}  // namespace cyclproj
