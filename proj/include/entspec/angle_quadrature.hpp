#pragma once

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "entspec/errors.hpp"

namespace entspec {

/// An angle in [0, pi] carried together with its complement pi - theta, so
/// that quantities like 1 + cos(theta) stay accurate next to theta = pi.
struct Angle {
  double theta;
  double comp;

  static Angle from_theta(double t) { return {t, std::numbers::pi - t}; }
  static Angle from_comp(double c) { return {std::numbers::pi - c, c}; }
  static Angle from_cos(double x) { return {std::acos(x), std::acos(-x)}; }

  double cos() const { return theta <= comp ? std::cos(theta) : -std::cos(comp); }
  double sin() const { return theta <= comp ? std::sin(theta) : std::sin(comp); }

  double one_plus_cos() const {
    const double s = std::sin(0.5 * comp);
    return 2.0 * s * s;
  }
  double one_minus_cos() const {
    const double s = std::sin(0.5 * theta);
    return 2.0 * s * s;
  }
};

/// cos(b) - cos(a) without cancellation when a and b are close, including
/// when both sit next to the same endpoint.
inline double cos_difference(const Angle& a, const Angle& b) {
  // cos b - cos a = 2 sin((a+b)/2) sin((a-b)/2)
  if (a.theta + b.theta <= std::numbers::pi) {
    return 2.0 * std::sin(0.5 * (a.theta + b.theta)) * std::sin(0.5 * (a.theta - b.theta));
  }
  return 2.0 * std::sin(0.5 * (a.comp + b.comp)) * std::sin(0.5 * (b.comp - a.comp));
}

/// ln|cos(b) - cos(a)|, finite even where the difference itself underflows.
inline double log_abs_cos_difference(const Angle& a, const Angle& b) {
  if (a.theta + b.theta <= std::numbers::pi) {
    return std::numbers::ln2 + std::log(std::abs(std::sin(0.5 * (a.theta + b.theta)))) +
           std::log(std::abs(std::sin(0.5 * (a.theta - b.theta))));
  }
  return std::numbers::ln2 + std::log(std::abs(std::sin(0.5 * (a.comp + b.comp)))) +
         std::log(std::abs(std::sin(0.5 * (b.comp - a.comp))));
}

struct QuadratureResult {
  double value;
  double error;
  double l1;
};

/// Double-exponential quadrature of F(Angle) over theta in [0, pi]. The
/// integrand sees exact endpoint distances, so algebraic endpoint
/// singularities are resolved down to the underflow limit.
template <class F>
QuadratureResult integrate_angle(F&& f, double tolerance) {
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  double error = 0.0;
  double l1 = 0.0;
  auto wrapped = [&f](double, double tc) {
    // boost passes tc = a - t (< 0) on the left half and b - t on the right.
    return f(tc < 0.0 ? Angle::from_theta(-tc) : Angle::from_comp(tc));
  };
  const double value =
      integrator.integrate(wrapped, 0.0, std::numbers::pi, tolerance, &error, &l1);
  return {value, error, l1};
}

/// Same over [lo.theta, hi.theta]. Points next to either end are built from
/// that end's angle and complement, so the endpoints stay exact.
template <class F>
QuadratureResult integrate_angle(F&& f, double tolerance, const Angle& lo, const Angle& hi) {
  if (!(hi.theta > lo.theta)) return {0.0, 0.0, 0.0};
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  double error = 0.0;
  double l1 = 0.0;
  auto wrapped = [&](double, double tc) {
    if (tc < 0.0) return f(Angle{lo.theta - tc, lo.comp + tc});
    return f(Angle{hi.theta - tc, hi.comp + tc});
  };
  const double value = integrator.integrate(wrapped, lo.theta, hi.theta, tolerance, &error, &l1);
  return {value, error, l1};
}

}  // namespace entspec
