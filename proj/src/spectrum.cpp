#include "entspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "entspec/errors.hpp"
#include "near_one.hpp"

namespace entspec {

namespace {

constexpr double kPi = std::numbers::pi;

// Tolerated negative part of the regular factor 1 - A x + B h(x). Applied to
// the factor rather than to phi itself: next to an edge the division by
// sqrt(1 - x^2) would amplify round-off in a vanishing numerator.
constexpr double kNegativeTolerance = 1e-10;

constexpr double kMomentTolerance = 1e-12;

}  // namespace

// ---------------------------------------------------------------------------

double CdfTable::operator()(double v) const {
  if (x.empty()) return 0.0;
  if (v <= x.front()) return v < x.front() ? 0.0 : F.front();
  if (v >= x.back()) return 1.0;
  const auto it = std::upper_bound(x.begin(), x.end(), v);
  const std::size_t i = static_cast<std::size_t>(it - x.begin());
  const double t = (v - x[i - 1]) / (x[i] - x[i - 1]);
  return F[i - 1] + t * (F[i] - F[i - 1]);
}

double marchenko_pastur_cdf(double lambda) {
  if (lambda <= 0.0) return 0.0;
  if (lambda >= 4.0) return 1.0;
  const double p = std::asin(0.5 * std::sqrt(lambda));
  return (2.0 * p + std::sin(2.0 * p)) / kPi;
}

CdfTable CdfTable::marchenko_pastur(int points) {
  CdfTable t;
  t.x.resize(points);
  t.F.resize(points);
  for (int k = 0; k < points; ++k) {
    // uniform in phi, so the table resolves the lambda^(-1/2) edge
    const double p = 0.5 * kPi * k / (points - 1);
    const double s = std::sin(p);
    t.x[k] = 4.0 * s * s;
    t.F[k] = (2.0 * p + std::sin(2.0 * p)) / kPi;
  }
  t.x.back() = 4.0;
  t.F.back() = 1.0;
  return t;
}

double wasserstein1(std::span<const double> samples, const CdfTable& cdf) {
  // int |F_emp - F| over the union of breakpoints; on each piece F_emp is
  // constant and F is linear, so each piece integrates exactly.
  std::vector<double> v(samples.begin(), samples.end());
  std::sort(v.begin(), v.end());
  std::vector<double> cuts(v);
  cuts.insert(cuts.end(), cdf.x.begin(), cdf.x.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const double n = static_cast<double>(v.size());

  double total = 0.0;
  std::size_t below = 0;  // samples <= left end of the current piece
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double l = cuts[i];
    const double r = cuts[i + 1];
    while (below < v.size() && v[below] <= l) ++below;
    const double e = static_cast<double>(below) / n;
    const double d0 = cdf(l) - e;
    const double d1 = cdf(r) - e;
    const double w = r - l;
    if ((d0 >= 0.0) == (d1 >= 0.0)) {
      total += 0.5 * w * std::abs(d0 + d1);
    } else {
      const double z = w * d0 / (d0 - d1);
      total += 0.5 * (z * std::abs(d0) + (w - z) * std::abs(d1));
    }
  }
  return total;
}

// ---------------------------------------------------------------------------

Density::Density(SpectrumSolution solution, const KernelConfig& cfg)
    : s_(std::move(solution)), cfg_(cfg), base_(AlphaOffset{s_.support.alpha_minus_one()}, s_.point.q) {
  if (s_.B != 0.0) kernel_.emplace(AlphaOffset{s_.support.alpha_minus_one()}, s_.point.q, cfg_);
}

double Density::numerator(const Angle& a) const {
  double v = 1.0 - s_.A * a.cos();
  if (kernel_) v += s_.B * kernel_->h(a);
  return v;
}

double Density::checked_phi(const Angle& a) const {
  const double n = numerator(a);
  if (n < 0.0) {
    if (n < -kNegativeTolerance) {
      throw PhaseError("density is negative (" + std::to_string(n) + ") at x = " + std::to_string(a.cos()) +
                       "; the solution does not belong to its phase");
    }
    return 0.0;
  }
  return n / (kPi * a.sin());
}

double Density::phi(double x) const {
  if (!(std::abs(x) < 1.0)) throw DomainError("phi: |x| must be < 1, got " + std::to_string(x));
  return checked_phi(Angle::from_cos(x));
}

double Density::sigma(double lambda) const {
  const auto& sp = s_.support;
  if (!(lambda >= sp.a && lambda <= sp.b)) return 0.0;
  const double x = lambda / sp.delta - sp.alpha;
  if (x >= 1.0) return 0.0;
  if (x <= -1.0) {
    // left edge: regular (zero) when a > 0, integrable divergence at a = 0
    if (sp.a > 0.0) return 0.0;
    return numerator(Angle::from_theta(kPi)) > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  // lambda - a is exact near the left edge, b - lambda near the right one.
  const Angle ang = x < 0.0 ? Angle::from_comp(2.0 * std::asin(std::sqrt(0.5 * (lambda - sp.a) / sp.delta)))
                            : Angle::from_theta(2.0 * std::asin(std::sqrt(0.5 * (sp.b - lambda) / sp.delta)));
  return checked_phi(ang) / sp.delta;
}

double Density::log_lambda(const Angle& a) const { return std::log(s_.support.delta) + base_.log_base(a); }

// (1/pi) int_0^pi numerator(theta) lambda^p dtheta, or with lambda^p ln lambda.
double Density::sea_integral(double p, bool log_weight) const {
  const auto r = integrate_angle(
      [&](const Angle& a) {
        const double ll = log_lambda(a);
        double w = p == 0.0 ? 1.0 : std::exp(p * ll);
        if (log_weight) w = w == 0.0 ? 0.0 : w * ll;
        return numerator(a) * w;
      },
      kMomentTolerance);
  if (!(r.error <= 1e-10 * std::max(1.0, r.l1))) {
    throw AccuracyError("moment quadrature did not converge", r.error);
  }
  return r.value / kPi;
}

double Density::moment(double p) const {
  if (!(p >= 0.0)) throw DomainError("moment: p must be >= 0");
  const double m = sea_integral(p, false);
  if (!s_.mu) return m;
  const double n = static_cast<double>(s_.point.N.value());
  return (n - 1.0) / n * m + std::exp(p * std::log(n * *s_.mu)) / n;
}

double Density::u_of(double q) const {
  if (!(q > 0.0)) throw DomainError("u_of: q must be positive");
  if (s_.mu) {
    // evaporation relation, valid for large N
    const double n = static_cast<double>(s_.point.N.value());
    const double mu = *s_.mu;
    if (q == 1.0) return mu * std::log(n * mu);
    return std::log(std::exp((q - 1.0) * std::log(n) + q * std::log(mu)) - mu + 1.0) / (q - 1.0);
  }
  // u = int sigma lambda ln lambda at q = 1
  if (q == 1.0) return sea_integral(1.0, true);
  return std::log(moment(q)) / (q - 1.0);
}

DensityGrid Density::export_grid(int n_points) const {
  if (n_points < 16) throw DomainError("export_grid: n_points must be >= 16, got " + std::to_string(n_points));
  const auto& sp = s_.support;
  DensityGrid g;
  g.phase = s_.phase;
  g.mu = s_.mu;
  g.lambdas.resize(n_points);
  g.densities.resize(n_points);
  std::vector<double> weights(n_points);  // numerator(theta) / pi
  const int last = n_points - 1;
  for (int k = 0; k <= last; ++k) {
    // theta from pi down to 0: Chebyshev-Lobatto nodes, ascending lambda
    const Angle a = 2 * k <= last ? Angle::from_comp(kPi * k / last) : Angle::from_theta(kPi * (last - k) / last);
    g.lambdas[k] = k == 0 ? sp.a : k == last ? sp.b : sp.delta * std::exp(base_.log_base(a));
    weights[k] = std::max(0.0, numerator(a)) / kPi;
    g.densities[k] = (k == 0 || k == last) ? 0.0 : checked_phi(a) / sp.delta;
  }
  if (sp.a == 0.0 && weights[0] > 0.0) {
    // lambda^(-1/2) divergence at lambda = 0: report the density half-way to the first node
    g.left_divergent = true;
    g.densities[0] = sigma(0.5 * g.lambdas[1]);
  }
  double mass = 0.0;
  for (int k = 0; k < last; ++k) mass += 0.5 * (weights[k] + weights[k + 1]) * (kPi / last);
  g.mass = mass;
  return g;
}

CdfTable Density::cdf_table(int points) const {
  if (points < 3) throw DomainError("cdf_table: points must be >= 3");
  // cumulative integral in theta; each panel uses the parabola through it and
  // the next node
  const int panels = points - 1;
  const double h = kPi / panels;
  std::vector<double> w(points);
  std::vector<double> lam(points);
  for (int k = 0; k < points; ++k) {
    const Angle a = 2 * k <= panels ? Angle::from_comp(h * k) : Angle::from_theta(h * (panels - k));
    w[k] = std::max(0.0, numerator(a)) / kPi;
    lam[k] = s_.support.delta * std::exp(base_.log_base(a));
  }
  lam.front() = s_.support.a;
  lam.back() = s_.support.b;
  CdfTable t;
  t.x = lam;
  t.F.assign(points, 0.0);
  for (int k = 1; k < points; ++k) {
    double inc = 0.5 * h * (w[k - 1] + w[k]);
    if (k + 1 < points) {
      // Simpson-corrected increment over [k-1, k] using the next node
      inc = h * (5.0 * w[k - 1] + 8.0 * w[k] - w[k + 1]) / 12.0;
    }
    t.F[k] = t.F[k - 1] + inc;
  }
  const double total = t.F.back();
  for (double& f : t.F) f /= total;
  // x must be strictly increasing for interpolation
  for (int k = 1; k < points; ++k) t.x[k] = std::max(t.x[k], std::nextafter(t.x[k - 1], INFINITY));
  return t;
}

// ---------------------------------------------------------------------------

double phi(const SpectrumSolution& s, double x, const KernelConfig& cfg) { return Density(s, cfg).phi(x); }
double sigma(const SpectrumSolution& s, double lambda, const KernelConfig& cfg) {
  return Density(s, cfg).sigma(lambda);
}
double moment(const SpectrumSolution& s, double p, const KernelConfig& cfg) { return Density(s, cfg).moment(p); }
double u_of(const SpectrumSolution& s, double q, const KernelConfig& cfg) { return Density(s, cfg).u_of(q); }
DensityGrid export_grid(const SpectrumSolution& s, int n_points, const KernelConfig& cfg) {
  return Density(s, cfg).export_grid(n_points);
}

}  // namespace entspec
