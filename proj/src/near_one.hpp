#pragma once

#include <cmath>

namespace entspec::detail {

// Several closed forms are (1/(q-1)) * L(q) with L(1) = 0. Round-off in L
// grows like eps / |q - 1|, so inside a tiny window around q = 1 we
// interpolate linearly between the exact q = 1 limit and a point far enough
// away to be accurate.
inline constexpr double kNearOneWindow = 1e-6;
inline constexpr double kNearOneAnchor = 1e-4;

template <class F>
double through_one(double q, double at_one, F&& general) {
  const double e = q - 1.0;
  if (e == 0.0) return at_one;
  if (std::abs(e) >= kNearOneWindow) return general(q);
  const double h = std::copysign(kNearOneAnchor, e);
  return at_one + (general(1.0 + h) - at_one) * (e / h);
}

// expm1((q-1) x) / (q-1), equal to x at q = 1.
inline double expm1_over(double x, double q) {
  const double e = q - 1.0;
  if (e == 0.0) return x;
  return std::expm1(e * x) / e;
}

// log1p((q-1) x) / (q-1), equal to x at q = 1.
inline double log1p_over(double x, double q) {
  const double e = q - 1.0;
  if (e == 0.0) return x;
  return std::log1p(e * x) / e;
}

}  // namespace entspec::detail
