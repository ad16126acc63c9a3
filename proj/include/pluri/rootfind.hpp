#pragma once

// Bracketed scalar solvers: bisection on monotone residuals and golden
// section minimization.

#include <cmath>
#include <stdexcept>

namespace pluri {

// Root of a nondecreasing residual with f(lo) <= 0 <= f(hi).
template <class F>
double bisect_root(const F& f, double lo, double hi, double xtol,
                   int max_iter = 200) {
  double flo = f(lo), fhi = f(hi);
  if (flo > 0.0 || fhi < 0.0) {
    throw std::invalid_argument("bisect_root: bracket does not straddle the root");
  }
  for (int i = 0; i < max_iter && hi - lo > xtol * std::max(1.0, std::fabs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) <= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Grow hi geometrically until f(hi) > 0.
template <class F>
double expand_upward(const F& f, double hi0, int max_doublings = 300) {
  double hi = hi0;
  for (int i = 0; i < max_doublings; ++i) {
    if (f(hi) > 0.0) return hi;
    hi *= 2.0;
  }
  throw std::runtime_error("expand_upward: no sign change found");
}

// Argmin of a unimodal function on [a, b].
template <class F>
double golden_min(const F& f, double a, double b, double xtol, int max_iter = 300) {
  const double phi = 0.6180339887498949;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < max_iter && (b - a) > xtol; ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace pluri
