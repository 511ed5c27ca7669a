#pragma once

#include <cmath>
#include <cstddef>

#include "cyclproj/errors.hpp"

namespace cyclproj {

struct LineMinimum {
  double argmin;
  double value;
};

/// Iterations needed to shrink a unit bracket below tol.
inline std::size_t golden_section_iterations(double tol) {
  if (!(tol > 0.0)) throw DomainError("golden-section tolerance must be positive");
  return static_cast<std::size_t>(std::ceil(std::log(1.0 / tol) / std::log(1.0 / 0.618)));
}

/*
 * Golden-section minimization of a unimodal f on [lo, hi] with a fixed
 * iteration count derived from tol, so identical inputs give identical
 * results. The bracket endpoints are compared last so minima sitting on
 * the boundary are returned exactly.
 */
template <class F>
LineMinimum golden_section_minimize(F&& f, double lo, double hi, double tol) {
  const std::size_t iterations = golden_section_iterations(tol);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;

  const double a0 = lo;
  const double b0 = hi;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (std::size_t i = 0; i < iterations; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }

  LineMinimum best{c, fc};
  if (fd < best.value) best = {d, fd};
  const double mid = 0.5 * (a + b);
  if (const double fm = f(mid); fm < best.value) best = {mid, fm};
  if (const double fa = f(a0); fa <= best.value) best = {a0, fa};
  if (const double fb = f(b0); fb < best.value) best = {b0, fb};
  return best;
}

}  // namespace cyclproj
