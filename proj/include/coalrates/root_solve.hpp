#pragma once

#include <cmath>
#include <stdexcept>

namespace coalrates {

// Bisection on [a, b] with f(a) and f(b) of opposite sign. Runs until the
// bracket cannot shrink in double precision (or |f| hits tol), so the
// returned root is accurate to the last representable bit of the bracket.
template <class F>
double bisect(F&& f, double a, double b, double tol = 0.0,
              int max_iter = 200) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa < 0.0) == (fb < 0.0))
    throw std::invalid_argument("bisect: no sign change on bracket");
  for (int i = 0; i < max_iter; ++i) {
    double m = 0.5 * (a + b);
    if (m == a || m == b) break;
    double fm = f(m);
    if (fm == 0.0 || (tol > 0.0 && std::abs(fm) < tol && (b - a) < tol))
      return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  return 0.5 * (a + b);
}

// Newton polish constrained to [a, b]; falls back to the midpoint when a
// step leaves the bracket. Used as an optional refinement on top of a
// converged bisection bracket.
template <class F, class DF>
double newton_polish(F&& f, DF&& df, double x, double a, double b,
                     int iters = 4) {
  for (int i = 0; i < iters; ++i) {
    double d = df(x);
    if (d == 0.0) break;
    double step = f(x) / d;
    double next = x - step;
    if (!(next > a && next < b)) break;
    x = next;
    if (std::abs(step) <= std::abs(x) * 1e-17) break;
  }
  return x;
}

}  // namespace coalrates
