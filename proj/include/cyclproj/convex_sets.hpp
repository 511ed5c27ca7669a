#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "cyclproj/errors.hpp"
#include "cyclproj/golden_section.hpp"
#include "cyclproj/metric.hpp"
#include "cyclproj/plane.hpp"
#include "cyclproj/product.hpp"
#include "cyclproj/twisted_chain.hpp"

namespace cyclproj {

enum class Solver { closed_form, exact_piecewise, golden_section, newton };

inline const char* to_string(Solver s) {
  switch (s) {
    case Solver::closed_form: return "closed_form";
    case Solver::exact_piecewise: return "exact_piecewise";
    case Solver::golden_section: return "golden_section";
    case Solver::newton: return "newton";
  }
  return "unknown";
}

template <class Point>
struct ProjectionResult {
  Point point;
  double distance;
  Solver solver;
};

struct ProjectionOptions {
  double tol = 1e-12;
  // Use the closed-form or piecewise-exact projector when the set supports one.
  bool prefer_exact = true;
};

// ---------------------------------------------------------------------------
// Set descriptors

/// Geodesic segment [start, end] of the ambient space.
template <class Point>
struct Segment {
  Point start;
  Point end;

  friend bool operator==(const Segment&, const Segment&) = default;
};

/// The x-axis of the plane.
struct AxisLine {
  friend bool operator==(const AxisLine&, const AxisLine&) = default;
};

/// Line through the origin of the plane at the given angle to the x-axis.
class LineThroughOrigin {
public:
  explicit LineThroughOrigin(double angle) : angle_(angle) {
    if (!std::isfinite(angle)) throw DomainError("line angle must be finite");
  }
  double angle() const { return angle_; }
  friend bool operator==(const LineThroughOrigin&, const LineThroughOrigin&) = default;

private:
  double angle_;
};

/// {(x, y) : x > 0, y >= 1 + x^-epsilon}.
class Epigraph {
public:
  explicit Epigraph(double epsilon) : epsilon_(epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
      throw DomainError("epigraph exponent must be positive");
    }
  }
  double epsilon() const { return epsilon_; }

  double boundary(double u) const { return 1.0 + std::pow(u, -epsilon_); }
  bool contains(const PlanePoint& p) const { return p.x > 0.0 && p.y >= boundary(p.x); }

  friend bool operator==(const Epigraph&, const Epigraph&) = default;

private:
  double epsilon_;
};

/// Cross-sectional disc number disc_index (0..2) of a TwistedChain.
struct CrossDisc {
  std::size_t disc_index = 0;
  friend bool operator==(const CrossDisc&, const CrossDisc&) = default;
};

using PlaneSet = std::variant<Segment<PlanePoint>, AxisLine, LineThroughOrigin, Epigraph>;
using TreeSegment = Segment<TreeProductPoint>;

// ---------------------------------------------------------------------------
// Segments

/// Projection onto a geodesic segment by golden-section search on t -> d(x, gamma(t))^2,
/// which is convex along geodesics of a CAT(0) space.
template <GeodesicSpace S>
ProjectionResult<typename S::Point> project_segment_generic(const S& space,
                                                            const Segment<typename S::Point>& seg,
                                                            const typename S::Point& x, double tol) {
  if (!(tol > 0.0)) throw DomainError("projection tolerance must be positive");
  space.validate(x);
  auto sq = [&](double t) {
    const double d = space.distance(x, space.geodesic(seg.start, seg.end, t));
    return d * d;
  };
  const LineMinimum m = golden_section_minimize(sq, 0.0, 1.0, tol);
  auto foot = space.geodesic(seg.start, seg.end, m.argmin);
  return {foot, space.distance(x, foot), Solver::golden_section};
}

inline ProjectionResult<PlanePoint> project_segment_plane(const Segment<PlanePoint>& seg, const PlanePoint& x) {
  const Plane plane;
  plane.validate(x);
  const double dx = seg.end.x - seg.start.x;
  const double dy = seg.end.y - seg.start.y;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) {
    t = std::clamp(((x.x - seg.start.x) * dx + (x.y - seg.start.y) * dy) / len2, 0.0, 1.0);
  }
  const PlanePoint foot = plane.geodesic(seg.start, seg.end, t);
  return {foot, plane.distance(x, foot), Solver::closed_form};
}

namespace detail {

// The leg a one-factor segment runs along, or npos when it crosses the center.
inline std::size_t segment_leg(const StarPoint& a, const StarPoint& b) {
  if (a.is_center()) return b.leg();
  if (b.is_center() || a.leg() == b.leg()) return a.leg();
  return std::numeric_limits<std::size_t>::max();
}

// Distance from a fixed tree point to a point moving linearly along one leg:
// offset(t) = base + slope * t. Yields the kink parameter (if any) and lets the
// caller evaluate the signed linear form on each piece.
struct LegTrack {
  std::size_t leg;
  double base;
  double slope;
};

inline LegTrack track_of(const StarPoint& a, const StarPoint& b) {
  return {segment_leg(a, b), a.offset(), b.offset() - a.offset()};
}

// Factor distance on a piece containing tm, written as c + m t.
inline std::pair<double, double> linear_piece(const LegTrack& tr, const StarPoint& x, double tm) {
  if (x.is_center() || x.leg() == tr.leg) {
    const double c = tr.base - x.offset();
    const double sign = (c + tr.slope * tm) >= 0.0 ? 1.0 : -1.0;
    return {sign * c, sign * tr.slope};
  }
  return {tr.base + x.offset(), tr.slope};
}

inline void push_kink(const LegTrack& tr, const StarPoint& x, std::vector<double>& cuts) {
  if (tr.slope == 0.0) return;
  if (x.is_center() || x.leg() == tr.leg) {
    const double t0 = (x.offset() - tr.base) / tr.slope;
    if (t0 > 0.0 && t0 < 1.0) cuts.push_back(t0);
  }
}

inline void require_single_leg(const TreeProduct& space, const TreeSegment& seg) {
  space.validate(seg.start);
  space.validate(seg.end);
  if (segment_leg(seg.start.left, seg.end.left) == std::numeric_limits<std::size_t>::max() ||
      segment_leg(seg.start.right, seg.end.right) == std::numeric_limits<std::size_t>::max()) {
    throw UnsupportedShape("exact tree projector needs each factor of the segment on a single leg");
  }
}

}  // namespace detail

/*
 * Exact projection onto a segment of S x T whose factors each stay on one leg.
 *
 * Along such a segment each factor distance to x is linear in t, or |linear|
 * when x sits on the same leg, so d(x, gamma(t))^2 is piecewise quadratic with
 * at most two kinks. Each piece is minimized in closed form.
 */
inline ProjectionResult<TreeProductPoint> project_segment_tree_exact(const TreeProduct& space,
                                                                     const TreeSegment& seg,
                                                                     const TreeProductPoint& x) {
  detail::require_single_leg(space, seg);
  space.validate(x);
  const auto left = detail::track_of(seg.start.left, seg.end.left);
  const auto right = detail::track_of(seg.start.right, seg.end.right);

  std::vector<double> cuts{0.0, 1.0};
  detail::push_kink(left, x.left, cuts);
  detail::push_kink(right, x.right, cuts);
  std::sort(cuts.begin(), cuts.end());

  double best_t = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    const double tm = 0.5 * (lo + hi);
    const auto [c1, m1] = detail::linear_piece(left, x.left, tm);
    const auto [c2, m2] = detail::linear_piece(right, x.right, tm);
    const double curvature = m1 * m1 + m2 * m2;
    const double t = curvature > 0.0 ? std::clamp(-(c1 * m1 + c2 * m2) / curvature, lo, hi) : lo;
    const double f1 = c1 + m1 * t;
    const double f2 = c2 + m2 * t;
    const double value = f1 * f1 + f2 * f2;
    if (value < best) {
      best = value;
      best_t = t;
    }
  }
  const auto foot = space.geodesic(seg.start, seg.end, best_t);
  return {foot, space.distance(x, foot), Solver::exact_piecewise};
}

/// True when the exact tree projector accepts this segment.
inline bool tree_segment_supported(const TreeSegment& seg) {
  constexpr auto npos = std::numeric_limits<std::size_t>::max();
  return detail::segment_leg(seg.start.left, seg.end.left) != npos &&
         detail::segment_leg(seg.start.right, seg.end.right) != npos;
}

// ---------------------------------------------------------------------------
// Plane sets

inline ProjectionResult<PlanePoint> project_axis(const PlanePoint& x) {
  Plane{}.validate(x);
  return {{x.x, 0.0}, std::abs(x.y), Solver::closed_form};
}

inline ProjectionResult<PlanePoint> project_line(const LineThroughOrigin& line, const PlanePoint& x) {
  Plane{}.validate(x);
  const double c = std::cos(line.angle());
  const double s = std::sin(line.angle());
  const double along = x.x * c + x.y * s;
  const PlanePoint foot{along * c, along * s};
  return {foot, Plane{}.distance(x, foot), Solver::closed_form};
}

/*
 * Closest point of {x > 0, y >= 1 + x^-eps} to a plane point.
 *
 * Outside points project to the boundary point (u, 1 + u^-eps) solving
 *   g(u) = (u - px) + h'(u) (h(u) - py) = 0,   h(u) = 1 + u^-eps.
 * The root is bracketed in w = log u by doubling/halving from u = 1 and then
 * located with Newton steps safeguarded by bisection, followed by a Newton
 * polish in u. tol bounds the accepted residual |g| relative to its scale.
 */
inline ProjectionResult<PlanePoint> project_epigraph(const Epigraph& set, const PlanePoint& x, double tol) {
  if (!(tol > 0.0)) throw DomainError("projection tolerance must be positive");
  Plane{}.validate(x);
  if (set.contains(x)) return {x, 0.0, Solver::closed_form};

  const double eps = set.epsilon();
  struct Eval {
    double g;
    double dg;  // dg/du
    double scale;
  };
  auto eval = [&](double u) {
    const double upow = std::pow(u, -eps);
    const double h = 1.0 + upow;
    const double h1 = -eps * upow / u;
    const double h2 = eps * (eps + 1.0) * upow / (u * u);
    const double lift = h - x.y;
    const double pull = h1 * lift;
    // On the steep part of the curve h1 * (h - y) carries rounding of order |h1| (|h| + |y|) ulp.
    return Eval{(u - x.x) + pull, 1.0 + h1 * h1 + h2 * lift,
                std::max({1.0, std::abs(u), std::abs(x.x), std::abs(h1) * (std::abs(h) + std::abs(x.y))})};
  };
  auto fail = [&](const std::string& what) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "epigraph projection: " << what << " (epsilon=" << eps << ", x=(" << x.x << ", " << x.y << "))";
    return NumericalFailure(msg.str());
  };

  constexpr int kMaxDoublings = 200;
  const double step = std::log(2.0);
  double w_lo = 0.0;
  double w_hi = 0.0;
  const double g0 = eval(1.0).g;
  if (g0 == 0.0) {
    const PlanePoint foot{1.0, set.boundary(1.0)};
    return {foot, Plane{}.distance(x, foot), Solver::newton};
  }
  if (g0 < 0.0) {
    int i = 0;
    for (; i < kMaxDoublings && !(eval(std::exp(w_hi)).g > 0.0); ++i) {
      w_lo = w_hi;
      w_hi += step;
    }
    if (i == kMaxDoublings) throw fail("no sign change within 200 doublings");
  } else {
    int i = 0;
    for (; i < kMaxDoublings && !(eval(std::exp(w_lo)).g < 0.0); ++i) {
      w_hi = w_lo;
      w_lo -= step;
    }
    if (i == kMaxDoublings) throw fail("no sign change within 200 halvings");
  }

  double w = 0.5 * (w_lo + w_hi);
  for (int it = 0; it < 200; ++it) {
    const double u = std::exp(w);
    const Eval e = eval(u);
    if (e.g == 0.0) break;
    if (e.g < 0.0) {
      w_lo = w;
    } else {
      w_hi = w;
    }
    double next = w - e.g / (u * e.dg);
    if (!(next > w_lo && next < w_hi) || !(e.dg > 0.0)) next = 0.5 * (w_lo + w_hi);
    const double moved = std::abs(next - w);
    w = next;
    if (moved <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(w)) ||
        w_hi - w_lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(w))) {
      break;
    }
  }

  // Polish in u: log-space rounding costs relative precision when u is large.
  double u = std::exp(w);
  Eval e = eval(u);
  for (int it = 0; it < 4 && e.g != 0.0 && e.dg > 0.0; ++it) {
    const double candidate = u - e.g / e.dg;
    if (!(candidate > 0.0)) break;
    const Eval ec = eval(candidate);
    if (!(std::abs(ec.g) < std::abs(e.g))) break;
    u = candidate;
    e = ec;
  }
  if (!(std::abs(e.g) <= tol * e.scale)) throw fail("residual above tolerance");

  const PlanePoint foot{u, set.boundary(u)};
  return {foot, Plane{}.distance(x, foot), Solver::newton};
}

// ---------------------------------------------------------------------------
// Twisted chain discs

/*
 * The lift of the target disc nearest to x in height is the closest one;
 * within it the closest point is the vertical foot, carried back to the
 * fundamental domain by the inverse deck rotation.
 */
inline ProjectionResult<ChainPoint> project_cross_disc(const TwistedChain& chain, std::size_t disc_index,
                                                       const ChainPoint& x) {
  if (disc_index >= 3) throw DomainError("disc index must be 0, 1 or 2");
  chain.validate(x);
  const double target = chain.disc_heights()[disc_index];
  const double lambda = chain.circumference();

  int best_k = 0;
  double best = std::numeric_limits<double>::infinity();
  double second = std::numeric_limits<double>::infinity();
  for (int k = -2; k <= 2; ++k) {
    const double gap = std::abs(x.height - target - k * lambda);
    if (gap < best) {
      second = best;
      best = gap;
      best_k = k;
    } else if (gap < second) {
      second = gap;
    }
  }
  if (second - best < 1e-12) {
    throw AmbiguousProjection("point is equidistant from two lifts of disc " + std::to_string(disc_index));
  }
  const PlanePoint disc = best_k == 0 ? x.disc : rotate(x.disc, -best_k * chain.twist());
  return {ChainPoint{disc, target}, best, Solver::closed_form};
}

// ---------------------------------------------------------------------------
// Dispatch used by the cyclic engine

inline ProjectionResult<PlanePoint> project(const Plane& plane, const PlaneSet& set, const PlanePoint& x,
                                            const ProjectionOptions& opts = {}) {
  return std::visit(
      [&](const auto& s) -> ProjectionResult<PlanePoint> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Segment<PlanePoint>>) {
          return opts.prefer_exact ? project_segment_plane(s, x) : project_segment_generic(plane, s, x, opts.tol);
        } else if constexpr (std::is_same_v<T, AxisLine>) {
          return project_axis(x);
        } else if constexpr (std::is_same_v<T, LineThroughOrigin>) {
          return project_line(s, x);
        } else {
          return project_epigraph(s, x, opts.tol);
        }
      },
      set);
}

inline ProjectionResult<TreeProductPoint> project(const TreeProduct& space, const TreeSegment& seg,
                                                  const TreeProductPoint& x, const ProjectionOptions& opts = {}) {
  if (opts.prefer_exact && tree_segment_supported(seg)) return project_segment_tree_exact(space, seg, x);
  return project_segment_generic(space, seg, x, opts.tol);
}

inline ProjectionResult<ChainPoint> project(const TwistedChain& chain, const CrossDisc& disc, const ChainPoint& x,
                                            const ProjectionOptions& = {}) {
  return project_cross_disc(chain, disc.disc_index, x);
}

template <class Space, class Set>
concept ProjectableOn = MetricSpace<Space> && requires(const Space& space, const Set& set,
                                                        const typename Space::Point& x,
                                                        const ProjectionOptions& opts) {
  { project(space, set, x, opts) } -> std::same_as<ProjectionResult<typename Space::Point>>;
};

/// Distance from x to the set, measured through its projection.
template <class Space, class Set>
  requires ProjectableOn<Space, Set>
double distance_to_set(const Space& space, const Set& set, const typename Space::Point& x,
                       const ProjectionOptions& opts = {}) {
  return project(space, set, x, opts).distance;
}

// ---------------------------------------------------------------------------
// Distance between sets

/// A one-parameter family of points covering (part of) a set.
template <class Point>
struct Sampler {
  std::function<Point(double)> at;
  double lo = 0.0;
  double hi = 1.0;
  std::size_t count = 1000;
};

template <GeodesicSpace S>
Sampler<typename S::Point> segment_sampler(const S& space, const Segment<typename S::Point>& seg,
                                           std::size_t count = 1000) {
  return {[space, seg](double t) { return space.geodesic(seg.start, seg.end, t); }, 0.0, 1.0, count};
}

/*
 * Sampled estimate of inf { d(a, B) : a in A }: the best of `count` evenly
 * spaced samples, refined by golden-section search over the neighbouring
 * sample cells. The refinement is exact when a -> d(a, B) is unimodal along
 * the sampler (true for geodesic samplers in CAT(0) spaces).
 */
template <class Space, class Set>
  requires ProjectableOn<Space, Set>
double set_distance(const Space& space, const Sampler<typename Space::Point>& a_side, const Set& b,
                    const ProjectionOptions& opts = {}) {
  if (a_side.count < 2 || !(a_side.hi > a_side.lo)) throw DomainError("sampler needs a range and >= 2 samples");
  auto gap = [&](double t) { return project(space, b, a_side.at(t), opts).distance; };
  const double width = (a_side.hi - a_side.lo) / static_cast<double>(a_side.count - 1);
  std::size_t best_i = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a_side.count; ++i) {
    const double t = i + 1 == a_side.count ? a_side.hi : a_side.lo + width * static_cast<double>(i);
    if (const double d = gap(t); d < best) {
      best = d;
      best_i = i;
    }
  }
  const double lo = std::max(a_side.lo, a_side.lo + width * (static_cast<double>(best_i) - 1.0));
  const double hi = std::min(a_side.hi, a_side.lo + width * (static_cast<double>(best_i) + 1.0));
  const LineMinimum refined = golden_section_minimize(gap, lo, hi, std::max(opts.tol, 1e-12));
  return std::min(best, refined.value);
}

/*
 * Exact distance between two single-leg tree segments whose legs differ in
 * both factors. There every factor distance is offset_A + offset_B, so the
 * squared distance is a convex quadratic in the two segment parameters;
 * minimize it over the unit square.
 */
inline double tree_segment_distance_exact(const TreeProduct& space, const TreeSegment& a, const TreeSegment& b) {
  detail::require_single_leg(space, a);
  detail::require_single_leg(space, b);
  auto separated = [](const StarPoint& a0, const StarPoint& a1, const StarPoint& b0, const StarPoint& b1) {
    const bool a_center = a0.is_center() && a1.is_center();
    const bool b_center = b0.is_center() && b1.is_center();
    return a_center || b_center || detail::segment_leg(a0, a1) != detail::segment_leg(b0, b1);
  };
  if (!separated(a.start.left, a.end.left, b.start.left, b.end.left) ||
      !separated(a.start.right, a.end.right, b.start.right, b.end.right)) {
    throw UnsupportedShape("exact segment distance needs the segments on different legs in both factors");
  }

  // f(s, t) = (A + u.z)^2 + (C + v.z)^2 with z = (s, t).
  const double A = a.start.left.offset() + b.start.left.offset();
  const double C = a.start.right.offset() + b.start.right.offset();
  const std::array<double, 2> u{a.end.left.offset() - a.start.left.offset(),
                                b.end.left.offset() - b.start.left.offset()};
  const std::array<double, 2> v{a.end.right.offset() - a.start.right.offset(),
                                b.end.right.offset() - b.start.right.offset()};
  auto f = [&](double s, double t) {
    const double p = A + u[0] * s + u[1] * t;
    const double q = C + v[0] * s + v[1] * t;
    return p * p + q * q;
  };
  // Minimum of f along an edge z = z0 + tau * dir, tau in [0, 1].
  auto edge = [&](double s0, double t0, double ds, double dt) {
    const double p0 = A + u[0] * s0 + u[1] * t0;
    const double q0 = C + v[0] * s0 + v[1] * t0;
    const double pd = u[0] * ds + u[1] * dt;
    const double qd = v[0] * ds + v[1] * dt;
    const double curv = pd * pd + qd * qd;
    const double tau = curv > 0.0 ? std::clamp(-(p0 * pd + q0 * qd) / curv, 0.0, 1.0) : 0.0;
    return f(s0 + tau * ds, t0 + tau * dt);
  };

  double best = std::min({edge(0, 0, 1, 0), edge(0, 1, 1, 0), edge(0, 0, 0, 1), edge(1, 0, 0, 1)});
  const double h00 = u[0] * u[0] + v[0] * v[0];
  const double h01 = u[0] * u[1] + v[0] * v[1];
  const double h11 = u[1] * u[1] + v[1] * v[1];
  const double det = h00 * h11 - h01 * h01;
  if (det > 1e-14 * std::max(1.0, h00 * h11)) {
    const double g0 = -(A * u[0] + C * v[0]);
    const double g1 = -(A * u[1] + C * v[1]);
    const double s = (h11 * g0 - h01 * g1) / det;
    const double t = (h00 * g1 - h01 * g0) / det;
    if (s >= 0.0 && s <= 1.0 && t >= 0.0 && t <= 1.0) best = std::min(best, f(s, t));
  }
  return std::sqrt(std::max(best, 0.0));
}

/// Segment-to-segment distance in S x T: exact when the shape allows it, sampled otherwise.
inline double set_distance(const TreeProduct& space, const TreeSegment& a, const TreeSegment& b,
                           const ProjectionOptions& opts = {}) {
  if (a == b) return 0.0;
  try {
    return tree_segment_distance_exact(space, a, b);
  } catch (const UnsupportedShape&) {
    return set_distance(space, segment_sampler(space, a), b, opts);
  }
}

}  // namespace cyclproj
