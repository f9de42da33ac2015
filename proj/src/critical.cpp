#include "entspec/critical.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "entspec/errors.hpp"
#include "entspec/special.hpp"
#include "near_one.hpp"

namespace entspec {

namespace {

const double kHalfLogPi = 0.5 * std::log(std::numbers::pi);

void require_above_half(double q, const char* who) {
  if (!(q > 0.5) || !std::isfinite(q)) {
    throw DomainError(std::string(who) + ": requires q > 1/2, got " + std::to_string(q));
  }
}

double log_B_C(double q) {
  return kHalfLogPi - log_gamma_ratio(q - 0.5, 1.5) - (q - 1.0) * std::numbers::ln2;
}

double golden_section(double (*f)(double), double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > tol) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double u_C(double q) {
  require_above_half(q, "u_C");
  return detail::through_one(q, 2.0 / 3.0 + std::log(2.0 / 3.0), [](double p) {
    const double bracket = p * std::log(4.0 * (p + 1.0) / (3.0 * p)) + log_gamma_ratio(p + 1.5, 0.5) - kHalfLogPi;
    return bracket / (p - 1.0);
  });
}

double u_E(double q) {
  if (!(q > 0.0) || !std::isfinite(q)) {
    throw DomainError("u_E: requires q > 0, got " + std::to_string(q));
  }
  return detail::through_one(q, 0.5, [](double p) {
    const double bracket = 2.0 * p * std::numbers::ln2 + log_gamma_ratio(p + 0.5, 1.5) - kHalfLogPi;
    return bracket / (p - 1.0);
  });
}

CriticalConstants critical_constants(double q) {
  require_above_half(q, "critical_constants");
  const double B_C = std::exp(log_B_C(q));
  // (1 - B_C) / (q - 1) -> -(1 + ln 2) at q = 1
  const double ratio = detail::through_one(q, -(1.0 + std::numbers::ln2), [](double p) {
    return -std::expm1(log_B_C(p)) / (p - 1.0);
  });
  return {2.0 * (q + 1.0) / (3.0 * q), -1.0 - ratio, B_C};
}

CriticalValues critical_values(double q) {
  const CriticalConstants c = critical_constants(q);
  return {q, u_C(q), u_E(q), c.delta_C, c.A_C, c.B_C};
}

UcMinimum u_C_minimum() {
  static const UcMinimum cached = [] {
    // Coarse scan over (1/2, 50] to isolate the basin, then refine.
    constexpr int kScan = 491;
    double best_q = 0.6;
    double best_u = u_C(best_q);
    for (int i = 0; i < kScan; ++i) {
      const double q = 0.6 + 0.1 * i;
      const double u = u_C(q);
      if (u < best_u) {
        best_u = u;
        best_q = q;
      }
    }
    const double lo = std::max(0.55, best_q - 0.1);
    const double hi = best_q + 0.1;
    const double q_star = golden_section([](double q) { return u_C(q); }, lo, hi, 1e-9);
    return UcMinimum{q_star, u_C(q_star)};
  }();
  return cached;
}

RegionTags region_tags(const PhasePoint& point) {
  point.validate();
  RegionTags tags;
  tags.eies = point.u < u_C_minimum().u_star;
  tags.eiss = point.u > kEvaporationAsymptote;
  return tags;
}

}  // namespace entspec
