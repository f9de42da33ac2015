#pragma once

#include <span>
#include <vector>

#include "entspec/angle_quadrature.hpp"

namespace entspec {

struct KernelConfig {
  int chebyshev_order = 64;
  int quadrature_points = 128;
  double tolerance = 1e-10;

  /// Throws DomainError unless order >= 8, points >= 2 * order, tolerance > 0.
  void validate() const;
};

/// ln Gamma(z) for z > 0 (Lanczos, 13 terms, g = 6.0247).
double log_gamma(double z);

/// ln[Gamma(z) / Gamma(z + delta)], without the cancellation of two log_gamma calls.
double log_gamma_ratio(double z, double delta);

/// alpha - 1 given directly. Near alpha = 1 the kernels depend on alpha - 1
/// through fractional powers, so it must not be recovered as (1 + eps) - 1.
struct AlphaOffset {
  double value;
};

/// f(y) = ((y + alpha)^(q-1) - 1) / (q - 1), with the ln(y + alpha) limit at
/// q = 1. Evaluated from angles so that the endpoint y = -1 is resolved when
/// alpha = 1.
class RenyiIntegrand {
 public:
  RenyiIntegrand(double alpha, double q);
  RenyiIntegrand(AlphaOffset alpha_minus_one, double q);

  double alpha() const { return alpha_; }
  double q() const { return q_; }
  double alpha_minus_one() const { return alpha_minus_one_; }

  /// ln(y + alpha) for y = cos(angle).
  double log_base(const Angle& a) const;
  double operator()(const Angle& a) const;
  double operator()(double y) const;

  /// e^w (f(cos b) - f(cos a)) / (cos b - cos a), the divided difference used
  /// to remove the principal-value singularity. The weight enters as its log
  /// so that products of underflowing and overflowing factors stay finite.
  double divided_difference(const Angle& a, const Angle& b, double log_weight = 0.0) const;

 private:
  double alpha_;
  double q_;
  double alpha_minus_one_;
};

/// h(1, alpha), h(-1, alpha) and g(alpha): the three regular integrals the
/// endpoint conditions of the equilibrium density need.
struct KernelMoments {
  double h_right;
  double h_left;
  double g;
};

KernelMoments kernel_moments(double alpha, double q, const KernelConfig& cfg = {});
KernelMoments kernel_moments(AlphaOffset alpha_minus_one, double q, const KernelConfig& cfg = {});

/// Weighted finite Hilbert transform
///   h(x, alpha) = (1/pi) PV int_{-1}^{1} sqrt(1-y^2) f(y) / (y - x) dy
/// together with the moment g(alpha) = (1/pi) int sqrt(1-y^2) f(y) dy.
///
/// f is expanded in Chebyshev polynomials of the second kind, f = sum c_n U_n,
/// and each U_n maps to -T_{n+1}. The order is doubled up to 512 until the
/// coefficient tail drops below tolerance. When the expansion does not
/// converge (alpha at or very near 1 with non-integer q) h is evaluated by
/// double-exponential quadrature of the divided difference instead.
/// Endpoint values and g are always computed by quadrature; they are regular
/// integrals.
class HilbertKernel {
 public:
  enum class Method { Chebyshev, Quadrature };

  static constexpr int kMaxChebyshevOrder = 512;

  HilbertKernel(double alpha, double q, const KernelConfig& cfg = {});
  HilbertKernel(AlphaOffset alpha_minus_one, double q, const KernelConfig& cfg = {});

  double alpha() const { return f_.alpha(); }
  double q() const { return f_.q(); }

  double h(double x) const;
  double h(const Angle& x) const;
  double h_right() const { return h_right_; }  // h(1, alpha)
  double h_left() const { return h_left_; }    // h(-1, alpha)
  double g() const { return g_; }

  Method method() const { return method_; }
  /// Chebyshev tail estimate (relative to the coefficient 1-norm) of the last
  /// expansion attempted.
  double chebyshev_residual() const { return chebyshev_residual_; }
  std::span<const double> coefficients() const { return coeffs_; }

  /// Forces the quadrature route regardless of Chebyshev convergence.
  double h_by_quadrature(const Angle& x) const;
  /// Chebyshev route only; throws AccuracyError if the expansion did not
  /// converge.
  double h_by_chebyshev(double x) const;

 private:
  void build();

  RenyiIntegrand f_;
  KernelConfig cfg_;
  Method method_ = Method::Quadrature;
  std::vector<double> coeffs_;
  double chebyshev_residual_ = 0.0;
  double h_right_ = 0.0;
  double h_left_ = 0.0;
  double g_ = 0.0;
};

double h_kernel(double x, double alpha, double q, const KernelConfig& cfg = {});
double g_kernel(double alpha, double q, const KernelConfig& cfg = {});

}  // namespace entspec
