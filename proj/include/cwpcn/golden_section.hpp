#pragma once

// Derivative-free 1-D maximization.  Golden-section tolerates the kinks that
// piecewise-defined objectives produce at regime boundaries, where a Newton
// step would chase a jump in the derivative.

#include <cmath>
#include <stdexcept>
#include <utility>

namespace cwpcn {

struct GoldenResult {
  double x = 0.0;
  double value = 0.0;
  int iterations = 0;
};

// Maximizes f over [lo, hi] to absolute x-tolerance tol.  f need not be
// smooth, only unimodal on the interval; endpoints are also candidates, so a
// monotone f still returns the better end.
template <typename F>
GoldenResult golden_section_maximize(F&& f, double lo, double hi, double tol,
                                     int max_iter = 200) {
  if (!(lo <= hi)) throw std::invalid_argument("golden_section_maximize: lo > hi");
  static const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;   // 1/phi
  static const double invphi2 = (3.0 - std::sqrt(5.0)) / 2.0;  // 1/phi^2

  double a = lo, b = hi;
  double h = b - a;
  GoldenResult best;
  if (h <= tol) {
    best.x = 0.5 * (a + b);
    best.value = f(best.x);
    return best;
  }

  double c = a + invphi2 * h;
  double d = a + invphi * h;
  double fc = f(c);
  double fd = f(d);

  int it = 0;
  while (h > tol && it < max_iter) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      h = b - a;
      c = a + invphi2 * h;
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      h = b - a;
      d = a + invphi * h;
      fd = f(d);
    }
    ++it;
  }

  best.x = (fc >= fd) ? c : d;
  best.value = (fc >= fd) ? fc : fd;
  best.iterations = it;

  // the optimum may sit on the boundary of a clipped interval
  const double flo = f(lo);
  if (flo > best.value) { best.x = lo; best.value = flo; }
  const double fhi = f(hi);
  if (fhi > best.value) { best.x = hi; best.value = fhi; }
  return best;
}

}  // namespace cwpcn
