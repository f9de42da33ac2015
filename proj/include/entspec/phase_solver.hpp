#pragma once

#include <optional>

#include "entspec/phase_point.hpp"
#include "entspec/special.hpp"

namespace entspec {

/// Support [a, b] of the rescaled spectrum (lambda = N * eigenvalue) and its
/// affine map onto x in [-1, 1]: lambda = delta * (x + alpha).
struct SupportParams {
  double a = 0.0;
  double b = 0.0;
  double delta = 0.0;
  double alpha = 1.0;

  static SupportParams from_delta_alpha(double delta, double alpha);
  /// Keeps a = delta (alpha - 1) exact for alpha - 1 far below machine epsilon.
  static SupportParams from_delta_offset(double delta, double alpha_minus_one);

  /// alpha - 1, recovered from a without cancellation.
  double alpha_minus_one() const { return a / delta; }
};

/// Large-N solution at a phase point. In the entangled and typical phases
/// the density on the support is
///   phi(x) = [1 - A x + B h(x, alpha)] / (pi sqrt(1 - x^2)).
/// In the separable phase one eigenvalue mu = O(1) has left the sea, and the
/// sea is a Marchenko-Pastur law (A = 1, B = 0) in units of (N-1)/(1-mu).
struct SpectrumSolution {
  Phase phase = Phase::Entangled;
  PhasePoint point;
  SupportParams support;
  double A = 0.0;
  double B = 0.0;
  double beta = 0.0;
  double xi = 0.0;
  std::optional<double> mu;
  /// u sits exactly on u_C or u_E.
  bool boundary = false;
};

struct Multipliers {
  double beta;
  double xi;
};

enum class EntangledRoute {
  Automatic,   // closed forms at q = 1 and q = 2, kernels otherwise
  Kernel,      // always the h/g kernel path
  ClosedForm,  // q = 1 or q = 2 only
};

Phase classify(const PhasePoint& point);

/// Dispatches on classify(). Exactly critical u goes to the typical solver.
SpectrumSolution solve(const PhasePoint& point, const KernelConfig& cfg = {});

SpectrumSolution solve_entangled(const PhasePoint& point, const KernelConfig& cfg = {},
                                 EntangledRoute route = EntangledRoute::Automatic);
SpectrumSolution solve_typical(const PhasePoint& point, const KernelConfig& cfg = {});
SpectrumSolution solve_separable(const PhasePoint& point);

/// Entangled-phase solution with both edges regular, parametrised by alpha >= 1
/// instead of u; u is an output. alpha = 1 is the concentration line.
SpectrumSolution entangled_at_alpha(double q, double alpha, const KernelConfig& cfg = {});
SpectrumSolution entangled_at_offset(double q, double alpha_minus_one, const KernelConfig& cfg = {});

/// Typical-phase solution parametrised by delta in [delta_C(q), 2].
SpectrumSolution typical_at_delta(double q, double delta);

/// u(delta, q) along the typical phase (alpha = 1).
double typical_u(double delta, double q);

/// Root of N^(q-1) mu^q - mu + 1 = e^((q-1) u) on the branch where the
/// left side increases; q = 1 uses mu ln(N mu) = u.
double separable_mu(double q, double u, std::int64_t N);

/// (beta, xi) of a solved point: beta = 2 B e^((q-1)u) / (q delta^q) away
/// from the separable phase, the evaporated-eigenvalue relations inside it.
Multipliers multipliers(const SpectrumSolution& solution);

namespace closed_form {

/// Entangled phase at q = 1, parametrised by alpha.
struct VonNeumann {
  double A;
  double B;
  double delta;
  double beta;
  double u;
};
VonNeumann von_neumann(double alpha);
/// alpha(u) at q = 1 by inverting u = ln(1 - 1/(2 beta)) + 1/beta.
double von_neumann_alpha(double u);

/// Entangled phase at q = 2: A = -2(alpha - 1), B = 2, delta = 1/alpha.
struct Purity {
  double A;
  double B;
  double delta;
};
Purity purity(double alpha);
/// alpha = (1/2)(e^u - 1)^(-1/2).
double purity_alpha(double u);

}  // namespace closed_form

}  // namespace entspec
