#pragma once

#include <cmath>
#include <numbers>

#include "entspec/phase_point.hpp"

namespace entspec {

/// u_C(q) -> ln(4/3) and u_E(q) -> 2 ln 2 as q -> infinity.
inline const double kConcentrationAsymptote = std::log(4.0 / 3.0);
inline constexpr double kEvaporationAsymptote = 2.0 * std::numbers::ln2;

/// Concentration line: the left edge of the spectrum reaches lambda = 0.
/// Requires q > 1/2; q = 1 returns 2/3 + ln(2/3).
double u_C(double q);

/// Evaporation line: the Marchenko-Pastur point, beyond which the largest
/// eigenvalue leaves the sea. Requires q > 0; q = 1 returns 1/2.
double u_E(double q);

/// Support half-width and Tricomi coefficients on the concentration line
/// (alpha = 1). delta_C = 2(q+1)/(3q).
struct CriticalConstants {
  double delta_C;
  double A_C;
  double B_C;
};
CriticalConstants critical_constants(double q);

struct CriticalValues {
  double q;
  double u_C;
  double u_E;
  double delta_C;
  double A_C;
  double B_C;
};
CriticalValues critical_values(double q);

struct UcMinimum {
  double q_star;
  double u_star;
};

/// Interior minimum of u_C over q in (1/2, 50]: coarse scan, then golden
/// section. Cached after the first call.
UcMinimum u_C_minimum();

/// EIES: below the horizontal tangent to the minimum of u_C (entangled for
/// every Renyi order). EISS: above the u_E asymptote 2 ln 2 (an O(1)
/// separable component for every order).
struct RegionTags {
  bool eies = false;
  bool eiss = false;

  bool empty() const { return !eies && !eiss; }
};
RegionTags region_tags(const PhasePoint& point);

}  // namespace entspec
