#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cyclproj/convex_sets.hpp"
#include "cyclproj/errors.hpp"

namespace cyclproj {

inline constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

template <class Point>
struct CycleRecord {
  std::size_t index = 0;          // n, so iterate = x_n = P^n(start)
  Point iterate;
  std::vector<Point> intermediates;  // points produced inside cycle n, in application order; last == iterate
};

/*
 * Iterates x_n = P^n(x_0) of the cyclic product P = P_1 o ... o P_k.
 *
 * Scalar diagnostics are kept for every n and indexed by n, with NaN where a
 * quantity is undefined:
 *   r[n] = d(x_n, x_{n+1})              n = 0 .. N-1
 * and for two sets, with y_{n+1} = P_2(x_n):
 *   a[n] = d(x_n, y_n)                  n = 1 .. N
 *   b[n] = d(y_{n+1}, x_n)              n = 0 .. N-1
 *   s[n] = d(y_n, y_{n+1})              n = 1 .. N-1
 * Points are stored for cycles n with n % stride in {0, 1} and for n = N, so
 * consecutive stored pairs let r be recomputed from points.
 */
template <class Point>
struct Trace {
  Point start;
  std::size_t set_count = 0;
  std::size_t cycles = 0;
  std::size_t stride = 1;
  std::vector<CycleRecord<Point>> records;
  std::vector<double> r;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> s;
  bool aborted = false;
  std::string failure;

  bool two_set() const { return set_count == 2; }

  const CycleRecord<Point>* find(std::size_t n) const {
    auto it = std::lower_bound(records.begin(), records.end(), n,
                               [](const CycleRecord<Point>& rec, std::size_t i) { return rec.index < i; });
    return it != records.end() && it->index == n ? &*it : nullptr;
  }
};

struct IterateOptions {
  ProjectionOptions projection;
  std::size_t stride = 0;  // 0 picks 1 up to 1e5 cycles, and ceil(N / 1e5) beyond
};

inline std::size_t automatic_stride(std::size_t cycles) {
  constexpr std::size_t kFullStorage = 100000;
  return cycles <= kFullStorage ? 1 : (cycles + kFullStorage - 1) / kFullStorage;
}

/// One application of P = P_1 o ... o P_k; P_k acts first.
template <class Space, class Set>
  requires ProjectableOn<Space, Set>
std::pair<typename Space::Point, std::vector<typename Space::Point>> cycle_apply(
    const Space& space, std::span<const Set> sets, const typename Space::Point& x,
    const ProjectionOptions& opts = {}) {
  if (sets.empty()) throw DomainError("cyclic product needs at least one set");
  std::vector<typename Space::Point> path;
  path.reserve(sets.size());
  typename Space::Point current = x;
  for (std::size_t i = sets.size(); i-- > 0;) {
    current = project(space, sets[i], current, opts).point;
    path.push_back(current);
  }
  return {current, std::move(path)};
}

/// The set list whose cyclic product is P^m.
template <class Set>
std::vector<Set> repeat_sets(std::span<const Set> sets, std::size_t m) {
  std::vector<Set> out;
  out.reserve(sets.size() * m);
  for (std::size_t i = 0; i < m; ++i) out.insert(out.end(), sets.begin(), sets.end());
  return out;
}

template <class Space, class Set>
  requires ProjectableOn<Space, Set>
Trace<typename Space::Point> iterate(const Space& space, std::span<const Set> sets,
                                     const typename Space::Point& x0, std::size_t n,
                                     const IterateOptions& opts = {}) {
  using Point = typename Space::Point;
  if (n < 1) throw DomainError("iterate needs at least one cycle");
  if (sets.empty()) throw DomainError("cyclic product needs at least one set");
  space.validate(x0);

  Trace<Point> trace;
  trace.start = x0;
  trace.set_count = sets.size();
  trace.stride = opts.stride == 0 ? automatic_stride(n) : opts.stride;
  trace.r.assign(n + 1, kUndefined);
  const bool two = trace.two_set();
  if (two) {
    trace.a.assign(n + 1, kUndefined);
    trace.b.assign(n + 1, kUndefined);
    trace.s.assign(n + 1, kUndefined);
  }
  trace.records.push_back({0, x0, {}});

  Point x = x0;
  Point y{};
  for (std::size_t c = 1; c <= n; ++c) {
    std::pair<Point, std::vector<Point>> step;
    try {
      step = cycle_apply(space, sets, x, opts.projection);
    } catch (const NumericalFailure& e) {
      trace.aborted = true;
      trace.failure = "cycle " + std::to_string(c) + ": " + e.what();
      break;
    }
    const Point& next = step.first;
    trace.r[c - 1] = space.distance(x, next);
    if (two) {
      const Point& y_next = step.second.front();
      trace.b[c - 1] = space.distance(y_next, x);
      trace.a[c] = space.distance(next, y_next);
      if (c >= 2) trace.s[c - 1] = space.distance(y, y_next);
      y = y_next;
    }
    trace.cycles = c;
    if (c % trace.stride <= 1 || c == n || trace.stride == 1) {
      trace.records.push_back({c, next, std::move(step.second)});
    }
    x = next;
  }
  if (trace.aborted) {
    // Keep the final completed iterate even if it fell between strides.
    if (trace.records.back().index != trace.cycles) trace.records.push_back({trace.cycles, x, {}});
    const std::size_t keep = trace.cycles + 1;
    trace.r.resize(keep);
    trace.r.back() = kUndefined;
    if (two) {
      trace.a.resize(keep);
      trace.b.resize(keep);
      trace.b.back() = kUndefined;
      trace.s.resize(keep);
      trace.s.back() = kUndefined;
    }
  }
  return trace;
}

template <class Space, class Set>
  requires ProjectableOn<Space, Set>
Trace<typename Space::Point> iterate(const Space& space, const std::vector<Set>& sets,
                                     const typename Space::Point& x0, std::size_t n,
                                     const IterateOptions& opts = {}) {
  return iterate(space, std::span<const Set>(sets), x0, n, opts);
}

// ---------------------------------------------------------------------------
// Two-set diagnostics

struct TwoSetReport {
  double chain_rs = std::numeric_limits<double>::infinity();  // min over s_n - r_n, r_n - s_{n+1}
  double chain_ab = std::numeric_limits<double>::infinity();  // min over a_n - b_n, b_n - a_{n+1}
  double energy = std::numeric_limits<double>::infinity();    // min over b_n^2 - a_{n+1}^2 - r_n^2
  double monotone_r = std::numeric_limits<double>::infinity();  // min over r_n - r_{n+1}
  double sum_r_sq = 0.0;  // sum over n >= 1 of r_n^2
  double b1_sq = kUndefined;
  std::size_t worst_chain_rs_at = 0;
  std::size_t worst_chain_ab_at = 0;
  std::size_t worst_energy_at = 0;
  std::size_t worst_monotone_at = 0;

  bool chains_hold(double slack = 1e-12) const { return chain_rs >= -slack && chain_ab >= -slack; }
  bool energy_holds(double slack = 1e-12) const { return energy >= -slack; }
  bool sum_bounded(double slack = 1e-9) const { return sum_r_sq <= b1_sq + slack; }
  bool r_monotone(double slack = 1e-12) const { return monotone_r >= -slack; }
  bool all_hold() const { return chains_hold() && energy_holds() && sum_bounded() && r_monotone(); }
};

/*
 * Checks, for n >= 1 where both sides are defined,
 *   s_1 >= r_1 >= s_2 >= r_2 >= ...,  a_1 >= b_1 >= a_2 >= b_2 >= ...,
 *   r_n^2 <= b_n^2 - a_{n+1}^2,  sum r_n^2 <= b_1^2,  r_n non-increasing,
 * and records the smallest margin of each.
 */
template <class Point>
TwoSetReport two_set_diagnostics(const Trace<Point>& trace) {
  if (!trace.two_set()) {
    throw UsageError("two-set diagnostics need a trace of two sets, got " + std::to_string(trace.set_count));
  }
  TwoSetReport rep;
  auto track = [](double margin, std::size_t n, double& worst, std::size_t& at) {
    if (std::isfinite(margin) && margin < worst) {
      worst = margin;
      at = n;
    }
  };
  const std::size_t N = trace.cycles;
  if (N >= 1) rep.b1_sq = trace.b[1] * trace.b[1];
  for (std::size_t n = 1; n < N; ++n) {
    const double r = trace.r[n];
    rep.sum_r_sq += r * r;
    track(trace.s[n] - r, n, rep.chain_rs, rep.worst_chain_rs_at);
    if (n + 1 < N) {
      track(r - trace.s[n + 1], n, rep.chain_rs, rep.worst_chain_rs_at);
      track(r - trace.r[n + 1], n, rep.monotone_r, rep.worst_monotone_at);
    }
    track(trace.a[n] - trace.b[n], n, rep.chain_ab, rep.worst_chain_ab_at);
    track(trace.b[n] - trace.a[n + 1], n, rep.chain_ab, rep.worst_chain_ab_at);
    const double energy = trace.b[n] * trace.b[n] - trace.a[n + 1] * trace.a[n + 1] - r * r;
    track(energy, n, rep.energy, rep.worst_energy_at);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Rate fitting and classification

struct RateFit {
  double slope = kUndefined;
  double intercept = kUndefined;
  std::size_t used = 0;
  std::size_t excluded = 0;  // zero or non-finite r_n inside the window
};

/// Least-squares fit of log r_n against log n for n in [first, last] (n >= 1).
inline RateFit rate_fit(std::span<const double> r, std::size_t first, std::size_t last) {
  first = std::max<std::size_t>(first, 1);
  if (last < first) throw DomainError("rate window is empty");
  RateFit fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t n = first; n <= last && n < r.size(); ++n) {
    if (!(r[n] > 0.0) || !std::isfinite(r[n])) {
      ++fit.excluded;
      continue;
    }
    const double lx = std::log(static_cast<double>(n));
    const double ly = std::log(r[n]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++fit.used;
  }
  if (fit.used < 2) throw DomainError("rate window has fewer than two positive steps");
  const double m = static_cast<double>(fit.used);
  const double denom = m * sxx - sx * sx;
  fit.slope = (m * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / m;
  return fit;
}

template <class Point>
RateFit rate_fit(const Trace<Point>& trace, std::size_t first, std::size_t last) {
  return rate_fit(std::span<const double>(trace.r), first, last);
}

enum class Regularity { Regular, NotRegular, Inconclusive };

inline const char* to_string(Regularity r) {
  switch (r) {
    case Regularity::Regular: return "Regular";
    case Regularity::NotRegular: return "NotRegular";
    case Regularity::Inconclusive: return "Inconclusive";
  }
  return "unknown";
}

struct RegularityVerdict {
  Regularity classification = Regularity::Inconclusive;
  double final_r = kUndefined;
  double liminf_r = kUndefined;  // min of r over the tail
  std::optional<double> rate_slope;
};

inline constexpr double kDefaultRTol = 1e-6;
inline constexpr double kDefaultTailFraction = 0.2;

/*
 * Regular: the last step is below r_tol and the tail is non-increasing.
 * NotRegular: every tail step exceeds 10 r_tol and the tail shows no decay
 * (the minimum over its later half is not below the minimum over its earlier
 * half). Anything else is Inconclusive.
 */
inline RegularityVerdict verdict(std::span<const double> r_steps, double r_tol = kDefaultRTol,
                                 double tail_fraction = kDefaultTailFraction) {
  const std::size_t N = r_steps.size();
  if (N == 0) throw DomainError("verdict needs at least one step");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) throw DomainError("tail fraction must lie in (0, 1]");
  // Two steps at least, otherwise "no decay" holds vacuously.
  const std::size_t tail = std::max<std::size_t>(std::min<std::size_t>(N, 2),
                                                 static_cast<std::size_t>(std::ceil(tail_fraction * N)));
  const std::size_t begin = N - std::min(tail, N);
  const std::size_t mid = begin + (N - begin) / 2;

  RegularityVerdict v;
  v.final_r = r_steps[N - 1];
  v.liminf_r = *std::min_element(r_steps.begin() + begin, r_steps.end());

  bool non_increasing = true;
  for (std::size_t n = begin; n + 1 < N; ++n) {
    if (r_steps[n + 1] > r_steps[n] + 1e-12) non_increasing = false;
  }
  const double early_min = mid > begin ? *std::min_element(r_steps.begin() + begin, r_steps.begin() + mid)
                                       : v.liminf_r;
  const double late_min = *std::min_element(r_steps.begin() + mid, r_steps.end());

  if (v.final_r < r_tol && non_increasing) {
    v.classification = Regularity::Regular;
  } else if (v.liminf_r > 10.0 * r_tol && late_min >= early_min * (1.0 - 1e-9)) {
    v.classification = Regularity::NotRegular;
  }

  std::size_t positive = 0;
  for (std::size_t n = std::max<std::size_t>(begin, 1); n < N; ++n) positive += r_steps[n] > 0.0;
  if (positive >= 2) v.rate_slope = rate_fit(r_steps, std::max<std::size_t>(begin, 1), N - 1).slope;
  return v;
}

template <class Point>
RegularityVerdict verdict(const Trace<Point>& trace, double r_tol = kDefaultRTol,
                          double tail_fraction = kDefaultTailFraction) {
  return verdict(std::span<const double>(trace.r.data(), trace.cycles), r_tol, tail_fraction);
}

}  // namespace cyclproj
