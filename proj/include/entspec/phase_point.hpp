#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace entspec {

enum class Phase { Entangled, Typical, Separable };

std::string_view to_string(Phase p);

/// A point (q, u[, N]) of the phase diagram. u = ln N - S_q is the entropy
/// deficit; N is needed only beyond the evaporation line.
struct PhasePoint {
  double q = 1.0;
  double u = 0.0;
  std::optional<std::int64_t> N;

  /// Throws DomainError for q <= 0, u < 0 or N < 2 and PhaseError for u > ln N.
  void validate() const;
};

}  // namespace entspec
