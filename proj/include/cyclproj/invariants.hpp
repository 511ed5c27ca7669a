#pragma once

// Randomized invariant suites shared by the `verify` command and the tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "cyclproj/convex_sets.hpp"
#include "cyclproj/cyclic_engine.hpp"
#include "cyclproj/metric.hpp"
#include "cyclproj/scenarios.hpp"

namespace cyclproj {

struct CheckResult {
  std::string name;
  double worst = 0.0;      // smallest margin observed; the check passes when worst >= 0
  std::uint64_t seed = 0;  // reproduces the sampled inputs
  std::size_t samples = 0;

  bool passed() const { return worst >= 0.0; }
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
  }
};

/// Running minimum of tolerance-adjusted margins (margin + slack), NaN counts as failure.
class MarginTracker {
public:
  MarginTracker(std::string name, std::uint64_t seed) : result_{std::move(name), inf(), seed, 0} {}

  void add(double margin, double slack) {
    ++result_.samples;
    const double m = std::isnan(margin) ? -inf() : margin + slack;
    result_.worst = std::min(result_.worst, m);
  }
  // |value - expected| <= tol
  void close(double value, double expected, double tol) { add(tol - std::abs(value - expected), 0.0); }
  void require(bool ok) { add(ok ? 0.0 : -1.0, 0.0); }

  CheckResult done() const { return result_; }

private:
  static double inf() { return std::numeric_limits<double>::infinity(); }
  CheckResult result_;
};

// ---------------------------------------------------------------------------
// Random generators

class Sampling {
public:
  explicit Sampling(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  StarPoint star(const StarTree& tree) {
    const std::size_t leg = index(tree.leg_count());
    // Hit the center and the leaf now and then.
    const double roll = uniform(0.0, 1.0);
    if (roll < 0.02) return StarPoint::center();
    if (roll < 0.04) return {leg, tree.leg_length(leg)};
    return {leg, uniform(0.0, tree.leg_length(leg))};
  }
  TreeProductPoint tree_product(const TreeProduct& s) { return {star(s.left()), star(s.right())}; }
  PlanePoint plane(double half_width = 10.0) { return {uniform(-half_width, half_width), uniform(-half_width, half_width)}; }
  PlanePoint disc(double radius) {
    const double rad = radius * std::sqrt(uniform(0.0, 1.0));
    const double ang = uniform(0.0, 2.0 * std::numbers::pi);
    return {rad * std::cos(ang), rad * std::sin(ang)};
  }
  ChainPoint chain(const TwistedChain& c) {
    return {disc(c.radius()), std::min(uniform(0.0, c.circumference()), std::nextafter(c.circumference(), 0.0))};
  }

  // Points of the sets themselves.
  template <GeodesicSpace S>
  typename S::Point on_segment(const S& space, const Segment<typename S::Point>& seg) {
    return space.geodesic(seg.start, seg.end, uniform(0.0, 1.0));
  }
  PlanePoint in_epigraph(const Epigraph& e) {
    const double u = std::exp(uniform(std::log(1e-3), std::log(1e3)));
    return {u, e.boundary(u) + (uniform(0.0, 1.0) < 0.5 ? 0.0 : uniform(0.0, 5.0))};
  }
  PlanePoint in_plane_set(const PlaneSet& set) {
    return std::visit(
        [&](const auto& s) -> PlanePoint {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Segment<PlanePoint>>) {
            return on_segment(Plane{}, s);
          } else if constexpr (std::is_same_v<T, AxisLine>) {
            return {uniform(-10.0, 10.0), 0.0};
          } else if constexpr (std::is_same_v<T, LineThroughOrigin>) {
            const double t = uniform(-10.0, 10.0);
            return {t * std::cos(s.angle()), t * std::sin(s.angle())};
          } else {
            return in_epigraph(s);
          }
        },
        set);
  }

private:
  std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// Metric suite

inline SuiteReport verify_metric(std::uint64_t seed = 20240101, std::size_t triples = 10000) {
  SuiteReport rep{"metric", {}};
  const StarTree tree = StarTree::unit(3);
  const StarTree uneven({0.5, 1.0, 2.0, 0.75});
  const TreeProduct st = unit_tripod_product();
  const Plane plane;
  const TwistedChain chain(0.1, 3.0, 1.0);

  auto axioms = [&](const auto& space, auto draw, const std::string& label, std::uint64_t s) {
    Sampling rng(s);
    MarginTracker sym("symmetry/" + label, s);
    MarginTracker tri("triangle/" + label, s);
    for (std::size_t i = 0; i < triples; ++i) {
      const auto p = draw(rng);
      const auto q = draw(rng);
      const auto z = draw(rng);
      sym.close(space.distance(p, q), space.distance(q, p), 1e-12);  // the chain rotates one argument, so not bitwise
      tri.add(space.distance(p, z) + space.distance(z, q) - space.distance(p, q), 1e-12);
    }
    rep.checks.push_back(sym.done());
    rep.checks.push_back(tri.done());
  };
  axioms(tree, [&](Sampling& r) { return r.star(tree); }, "star", seed + 1);
  axioms(uneven, [&](Sampling& r) { return r.star(uneven); }, "star-uneven", seed + 2);
  axioms(st, [&](Sampling& r) { return r.tree_product(st); }, "tripod-product", seed + 3);
  axioms(plane, [&](Sampling& r) { return r.plane(); }, "plane", seed + 4);
  axioms(chain, [&](Sampling& r) { return r.chain(chain); }, "chain", seed + 5);

  auto speed = [&](const auto& space, auto draw, const std::string& label, std::uint64_t s) {
    Sampling rng(s);
    MarginTracker t("constant-speed/" + label, s);
    for (std::size_t i = 0; i < triples; ++i) {
      const auto p = draw(rng);
      const auto q = draw(rng);
      const double t1 = rng.uniform(0.0, 1.0);
      const double t2 = rng.uniform(0.0, 1.0);
      const double got = space.distance(space.geodesic(p, q, t1), space.geodesic(p, q, t2));
      t.close(got, std::abs(t1 - t2) * space.distance(p, q), 1e-12);
    }
    rep.checks.push_back(t.done());
  };
  speed(tree, [&](Sampling& r) { return r.star(tree); }, "star", seed + 11);
  speed(st, [&](Sampling& r) { return r.tree_product(st); }, "tripod-product", seed + 12);
  speed(plane, [&](Sampling& r) { return r.plane(); }, "plane", seed + 13);

  {
    Sampling rng(seed + 21);
    MarginTracker glue("star-gluing", seed + 21);
    for (std::size_t i = 0; i < triples; ++i) {
      const StarPoint p = rng.star(uneven);
      const StarPoint q = rng.star(uneven);
      if (p.leg() == q.leg() || p.is_center() || q.is_center()) continue;
      const StarPoint c = StarPoint::center();
      glue.require(uneven.distance(p, q) == uneven.distance(p, c) + uneven.distance(c, q));
    }
    rep.checks.push_back(glue.done());
  }

  auto cn = [&](const auto& space, auto draw, const std::string& label, std::uint64_t s) {
    Sampling rng(s);
    MarginTracker t("cn-inequality/" + label, s);
    for (std::size_t i = 0; i < triples; ++i) {
      const auto x = draw(rng);
      const auto y = draw(rng);
      const auto z = draw(rng);
      t.add(cn_margin(space, x, y, z), 1e-12);
    }
    rep.checks.push_back(t.done());
  };
  cn(plane, [&](Sampling& r) { return r.plane(); }, "plane", seed + 31);
  cn(st, [&](Sampling& r) { return r.tree_product(st); }, "tripod-product", seed + 32);
  cn(tree, [&](Sampling& r) { return r.star(tree); }, "star", seed + 33);

  {
    Sampling rng(seed + 41);
    MarginTracker rep_ind("chain-representative-independence", seed + 41);
    for (std::size_t i = 0; i < triples; ++i) {
      const ChainPoint p = rng.chain(chain);
      const ChainPoint q = rng.chain(chain);
      const double base = chain.distance(p, q);
      // (z, h) and (R_twist z, h + circumference) name the same point.
      const PlanePoint up = rotate(q.disc, chain.twist());
      rep_ind.close(chain.lifted_distance(p.disc, p.height, up, q.height + chain.circumference()), base, 1e-12);
      const PlanePoint down = rotate(q.disc, -chain.twist());
      rep_ind.close(chain.lifted_distance(p.disc, p.height, down, q.height - chain.circumference()), base, 1e-12);
    }
    rep.checks.push_back(rep_ind.done());
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Projection suite

namespace detail {

template <class Space, class Set, class DrawAmbient, class DrawMember>
void projection_properties(SuiteReport& rep, const Space& space, const Set& set, const std::string& label,
                           const ProjectionOptions& opts, DrawAmbient draw, DrawMember member,
                           std::uint64_t seed, std::size_t pairs, bool lipschitz, bool angles) {
  Sampling rng(seed);
  MarginTracker idem("idempotence/" + label, seed);
  for (std::size_t i = 0; i < 1000; ++i) {
    const auto px = project(space, set, draw(rng), opts).point;
    idem.add(1e-9 - space.distance(project(space, set, px, opts).point, px), 0.0);
  }
  rep.checks.push_back(idem.done());

  if (lipschitz) {
    MarginTracker lip("nonexpansive/" + label, seed);
    for (std::size_t i = 0; i < pairs; ++i) {
      const auto x = draw(rng);
      const auto y = draw(rng);
      lip.add(space.distance(x, y) - space.distance(project(space, set, x, opts).point,
                                                    project(space, set, y, opts).point),
              1e-9);
    }
    rep.checks.push_back(lip.done());
  }

  MarginTracker opt("optimality/" + label, seed);
  MarginTracker obtuse("obtuse-angle/" + label, seed);
  for (std::size_t i = 0; i < 100; ++i) {
    const auto x = draw(rng);
    const auto res = project(space, set, x, opts);
    for (std::size_t j = 0; j < 100; ++j) {
      const auto c = member(rng);
      opt.add(space.distance(x, c) - res.distance, 1e-9);
      if (angles && res.distance > 1e-6 && space.distance(res.point, c) > 1e-6) {
        obtuse.add(comparison_angle(space, res.point, x, c) - std::numbers::pi / 2.0, 1e-6);
      }
    }
  }
  rep.checks.push_back(opt.done());
  if (angles) rep.checks.push_back(obtuse.done());
}

}  // namespace detail

inline SuiteReport verify_projections(std::uint64_t seed = 20240202, std::size_t pairs = 10000) {
  SuiteReport rep{"projections", {}};
  const ProjectionOptions exact{};
  ProjectionOptions generic;
  generic.prefer_exact = false;

  const auto tripod = build_tripod_counterexample();
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& seg = tripod.sets[i];
    const auto draw = [&](Sampling& r) { return r.tree_product(tripod.space); };
    const auto member = [&](Sampling& r) { return r.on_segment(tripod.space, seg); };
    detail::projection_properties(rep, tripod.space, seg, "tripod-C" + std::to_string(i + 1), exact, draw, member,
                                  seed + i, pairs, true, true);
  }
  {
    // Segment reaching the center in one factor and a leaf in the other.
    const TreeSegment odd{{{1, 0.0}, {2, 0.9}}, {{1, 0.7}, {2, 0.1}}};
    detail::projection_properties(
        rep, tripod.space, odd, "tripod-offcenter", exact, [&](Sampling& r) { return r.tree_product(tripod.space); },
        [&](Sampling& r) { return r.on_segment(tripod.space, odd); }, seed + 5, pairs, true, true);
  }

  const Plane plane;
  const std::vector<std::pair<std::string, PlaneSet>> plane_sets{
      {"plane-segment", Segment<PlanePoint>{{-1.0, 2.0}, {3.0, -1.0}}},
      {"axis", AxisLine{}},
      {"line", LineThroughOrigin(0.7)},
      {"epigraph-0.25", Epigraph(0.25)},
      {"epigraph-0.5", Epigraph(0.5)},
      {"epigraph-1", Epigraph(1.0)},
  };
  std::uint64_t s = seed + 10;
  for (const auto& [label, set] : plane_sets) {
    detail::projection_properties(
        rep, plane, set, label, exact, [](Sampling& r) { return r.plane(); },
        [&](Sampling& r) { return r.in_plane_set(set); }, s++, pairs, true, true);
  }

  {
    // Discs of the chain: idempotence and optimality in the quotient metric.
    const TwistedChain chain(0.1, 3.0, 1.0);
    for (std::size_t i = 0; i < 3; ++i) {
      const CrossDisc disc{i};
      const double h = chain.disc_heights()[i];
      detail::projection_properties(
          rep, chain, disc, "chain-disc" + std::to_string(i), exact,
          [&](Sampling& r) {
            // Keep clear of the height exactly opposite the disc, where the projection is ambiguous.
            ChainPoint p = r.chain(chain);
            const double opposite = std::fmod(h + 0.5 * chain.circumference(), chain.circumference());
            if (std::abs(p.height - opposite) < 1e-6) p.height = h;
            return p;
          },
          [&](Sampling& r) { return ChainPoint{r.disc(chain.radius()), h}; }, s++, pairs, false, false);
    }
  }

  {
    Sampling rng(seed + 99);
    MarginTracker agree("exact-vs-generic", seed + 99);
    const std::vector<TreeSegment> segs{tripod.sets[0], tripod.sets[1], tripod.sets[2],
                                        TreeSegment{{{1, 0.0}, {2, 0.9}}, {{1, 0.7}, {2, 0.1}}}};
    ProjectionOptions tight;
    tight.tol = 1e-12;
    for (std::size_t i = 0; i < 1000; ++i) {
      const auto& seg = segs[rng.index(segs.size())];
      const auto x = rng.tree_product(tripod.space);
      const auto a = project_segment_tree_exact(tripod.space, seg, x);
      const auto b = project_segment_generic(tripod.space, seg, x, tight.tol);
      agree.add(1e-7 - tripod.space.distance(a.point, b.point), 0.0);
    }
    rep.checks.push_back(agree.done());
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Two-set suite

inline SuiteReport verify_two_set(std::size_t cycles = 1000000) {
  SuiteReport rep{"two-set", {}};
  auto run = [&](const PlaneScenario& sc, std::size_t n, const std::string& label) {
    const auto trace = iterate(sc.space, sc.sets, sc.starts.front().point, n);
    const TwoSetReport d = two_set_diagnostics(trace);
    auto push = [&](const std::string& name, double margin) {
      rep.checks.push_back({name + "/" + label, margin, 0, trace.cycles});
    };
    push("completed", trace.aborted ? -1.0 : 0.0);
    push("chain-s-r", d.chain_rs + 1e-12);
    push("chain-a-b", d.chain_ab + 1e-12);
    push("energy", d.energy + 1e-12);
    push("sum-r-squared", d.b1_sq + 1e-9 - d.sum_r_sq);
    push("r-non-increasing", d.monotone_r + 1e-12);
    double membership = std::numeric_limits<double>::infinity();
    for (const auto& rec : trace.records) {
      if (rec.index >= 1) {
        membership = std::min(membership, 1e-9 - distance_to_set(sc.space, sc.sets.front(), rec.iterate));
      }
    }
    push("iterates-in-C1", membership);
  };
  run(build_plane_two_sets(0.5), cycles, "plane-two-sets");
  run(build_plane_two_lines(std::numbers::pi / 4.0), 50, "plane-two-lines");
  return rep;
}

// ---------------------------------------------------------------------------
// Counterexample certificates

inline SuiteReport verify_counterexamples(std::uint64_t seed = 20240303) {
  SuiteReport rep{"counterexamples", {}};
  const auto sc = build_tripod_counterexample();
  const auto& X = sc.space;
  const std::size_t k = sc.sets.size();
  Sampling rng(seed);

  MarginTracker iso("tripod-isometry", seed);
  MarginTracker flip("tripod-orientation-reversal", seed);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& target = sc.sets[i];
    const auto& source = sc.sets[(i + 1) % k];
    for (std::size_t j = 0; j < 20; ++j) {
      const double tx = rng.uniform(0.0, 1.0);
      const double ty = rng.uniform(0.0, 1.0);
      const auto x = X.geodesic(source.start, source.end, tx);
      const auto y = X.geodesic(source.start, source.end, ty);
      const auto px = project(X, target, x, {}).point;
      const auto py = project(X, target, y, {}).point;
      iso.close(X.distance(px, py), X.distance(x, y), 1e-9);
      if (std::abs(tx - ty) > 1e-3) {
        flip.close((segment_parameter(target, px) - segment_parameter(target, py)) / (tx - ty), -1.0, 1e-9);
      }
    }
  }
  rep.checks.push_back(iso.done());
  rep.checks.push_back(flip.done());

  const auto& c1 = sc.sets.front();
  MarginTracker swap("tripod-endpoint-swap", seed);
  swap.close(X.distance(cycle_apply(X, std::span(sc.sets), c1.start).first, c1.end), 0.0, 1e-9);
  swap.close(X.distance(cycle_apply(X, std::span(sc.sets), c1.end).first, c1.start), 0.0, 1e-9);
  rep.checks.push_back(swap.done());

  MarginTracker fixed("tripod-midpoint-fixed", seed);
  const auto mid = sc.start("midpoint");
  fixed.close(X.distance(cycle_apply(X, std::span(sc.sets), mid).first, mid), 0.0, 1e-9);
  rep.checks.push_back(fixed.done());

  MarginTracker square("tripod-P2-identity", seed);
  for (std::size_t j = 0; j < 20; ++j) {
    const auto x = rng.on_segment(X, c1);
    const auto once = cycle_apply(X, std::span(sc.sets), x).first;
    square.close(X.distance(cycle_apply(X, std::span(sc.sets), once).first, x), 0.0, 1e-9);
  }
  rep.checks.push_back(square.done());

  MarginTracker apart("tripod-disjoint", seed);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      apart.add(set_distance(X, sc.sets[i], sc.sets[j]) - std::numbers::sqrt2, 1e-6);
    }
  }
  rep.checks.push_back(apart.done());

  MarginTracker steps("tripod-unit-steps", seed);
  const auto trace = iterate(X, sc.sets, sc.start("endpoint"), 101);
  for (std::size_t n = 1; n <= 100; ++n) steps.close(trace.r[n], 1.0, 1e-9);
  rep.checks.push_back(steps.done());

  const auto chain_sc = build_twisted_chain(1.0, 0.1, 3.0);
  const auto& chain = chain_sc.space;
  MarginTracker rot("chain-rotation", seed);
  for (std::size_t j = 0; j < 20; ++j) {
    const ChainPoint x{rng.disc(chain.radius()), chain.disc_heights()[0]};
    const ChainPoint px = cycle_apply(chain, std::span(chain_sc.sets), x).first;
    const PlanePoint expect = rotate(x.disc, chain.twist());
    rot.close(std::hypot(px.disc.x - expect.x, px.disc.y - expect.y), 0.0, 1e-12);
    rot.close(px.height, chain.disc_heights()[0], 1e-12);
  }
  rep.checks.push_back(rot.done());

  MarginTracker powers("chain-power-steps", seed);
  for (std::size_t m = 1; m <= 20; ++m) {
    const auto sets = repeat_sets(std::span(chain_sc.sets), m);
    const auto tr = iterate(chain, sets, chain_sc.start("boundary"), 50);
    const double expect = 2.0 * chain.radius() * std::abs(std::sin(m * chain.twist() / 2.0));
    for (std::size_t n = 0; n < tr.cycles; ++n) powers.close(tr.r[n], expect, 1e-9);
  }
  rep.checks.push_back(powers.done());
  return rep;
}

}  // namespace cyclproj
