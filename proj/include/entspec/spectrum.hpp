#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "entspec/phase_solver.hpp"
#include "entspec/special.hpp"

namespace entspec {

/// Sampled sigma(lambda) for plotting. In the separable phase the grid covers
/// the sea only (normalised to one) and mu is carried as an annotation.
struct DensityGrid {
  std::vector<double> lambdas;
  std::vector<double> densities;
  Phase phase = Phase::Entangled;
  std::optional<double> mu;
  /// sigma diverges at the left edge (typical phase, lambda = 0); the first
  /// entry holds a capped value.
  bool left_divergent = false;
  /// Trapezoidal mass of the grid, taken in the angle variable where the
  /// integrand stays finite.
  double mass = 0.0;
};

/// Piecewise-linear tabulated distribution function.
struct CdfTable {
  std::vector<double> x;
  std::vector<double> F;

  double operator()(double v) const;

  /// Marchenko-Pastur law on [0, 4]: F = (2 phi + sin 2 phi) / pi, lambda = 4 sin^2 phi.
  static CdfTable marchenko_pastur(int points = 4097);
};

double marchenko_pastur_cdf(double lambda);

/// Wasserstein-1 distance between the empirical measure of `samples` (equal
/// weights) and a tabulated distribution.
double wasserstein1(std::span<const double> samples, const CdfTable& cdf);

/// Kolmogorov-Smirnov distance between the empirical measure of `samples` and
/// a distribution function.
template <class Cdf>
double ks_distance(std::span<const double> samples, const Cdf& cdf);

/// The density of a solved phase point, with the Hilbert kernel built once.
/// Coordinates: lambda = N * eigenvalue = delta (x + alpha), x = cos(theta).
class Density {
 public:
  explicit Density(SpectrumSolution solution, const KernelConfig& cfg = {});

  const SpectrumSolution& solution() const { return s_; }

  /// [1 - A x + B h(x)] / (pi sqrt(1 - x^2)) for |x| < 1.
  double phi(double x) const;
  /// phi(lambda / delta - alpha) / delta on [a, b], zero outside.
  double sigma(double lambda) const;
  /// int sigma lambda^p. The separable phase adds the evaporated eigenvalue
  /// with weight 1/N and gives the sea weight (N - 1)/N.
  double moment(double p) const;
  /// u functional at order q (may differ from the solution's own q).
  double u_of(double q) const;
  DensityGrid export_grid(int n_points) const;
  /// Distribution function of sigma (sea only in the separable phase).
  CdfTable cdf_table(int points = 4097) const;

  /// 1 - A cos(theta) + B h(cos(theta)): pi sqrt(1 - x^2) phi(x).
  double numerator(const Angle& a) const;

 private:
  double checked_phi(const Angle& a) const;
  double log_lambda(const Angle& a) const;
  double sea_integral(double p, bool log_weight) const;

  SpectrumSolution s_;
  KernelConfig cfg_;
  std::optional<HilbertKernel> kernel_;
  RenyiIntegrand base_;
};

double phi(const SpectrumSolution& s, double x, const KernelConfig& cfg = {});
double sigma(const SpectrumSolution& s, double lambda, const KernelConfig& cfg = {});
double moment(const SpectrumSolution& s, double p, const KernelConfig& cfg = {});
double u_of(const SpectrumSolution& s, double q, const KernelConfig& cfg = {});
DensityGrid export_grid(const SpectrumSolution& s, int n_points, const KernelConfig& cfg = {});

// ---------------------------------------------------------------------------

template <class Cdf>
double ks_distance(std::span<const double> samples, const Cdf& cdf) {
  std::vector<double> v(samples.begin(), samples.end());
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double F = cdf(v[i]);
    d = std::max({d, std::abs(F - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - F)});
  }
  return d;
}

}  // namespace entspec
