#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "entspec/errors.hpp"

namespace entspec::detail {

struct RootOptions {
  double x_tolerance = 1e-12;  // relative to max(|lo|, |hi|)
  double x_absolute = 0.0;
  double f_tolerance = 0.0;
  int max_iterations = 200;
};

// Bracketed bisection with secant refinement: secant (regula falsi) steps
// inside the bracket, kept 1% away from its ends, with a forced bisection
// every third iteration so the width always contracts. Requires f(lo), f(hi) of
// opposite sign (or one of them zero).
template <class F>
double bracketed_root(F&& f, double lo, double hi, double f_lo, double f_hi, const RootOptions& opt,
                      const char* what) {
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << ": root not bracketed on [" << lo << ", " << hi << "], f = (" << f_lo << ", "
        << f_hi << ")";
    throw NumericalError(msg.str());
  }
  for (int it = 0; it < opt.max_iterations; ++it) {
    const double width = hi - lo;
    if (width <= opt.x_tolerance * std::max(std::abs(lo), std::abs(hi)) + opt.x_absolute) break;
    double x = lo - f_lo * (hi - lo) / (f_hi - f_lo);
    const bool secant_ok = std::isfinite(x) && x > lo && x < hi;
    if (!secant_ok || it % 3 == 2) x = 0.5 * (lo + hi);
    const double guard = 0.01 * width;
    x = std::clamp(x, lo + guard, hi - guard);
    const double fx = f(x);
    if (fx == 0.0 || std::abs(fx) <= opt.f_tolerance) return x;
    if ((fx > 0.0) == (f_lo > 0.0)) {
      lo = x;
      f_lo = fx;
    } else {
      hi = x;
      f_hi = fx;
    }
    if (it + 1 == opt.max_iterations) {
      std::ostringstream msg;
      msg.precision(17);
      msg << what << ": no convergence after " << opt.max_iterations << " iterations, bracket ["
          << lo << ", " << hi << "], f = (" << f_lo << ", " << f_hi << ")";
      throw NumericalError(msg.str());
    }
  }
  return std::abs(f_lo) < std::abs(f_hi) ? lo : hi;
}

}  // namespace entspec::detail
