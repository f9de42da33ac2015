#include "entspec/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

namespace entspec {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_integer(double q) { return q == std::floor(q); }

// Lanczos approximation with N = 13, g = 6.024680040776729583740234375
// (Godfrey coefficients in rational form, as used by Boost.Math for double).
constexpr double kLanczosG = 6.024680040776729583740234375;
constexpr std::array<double, 13> kLanczosNum = {
    23531376880.41075968857200767445163675473,
    42919803642.64909876895789904700198885093,
    35711959237.35566804944018545154716670596,
    17921034426.03720969991975575445893111267,
    6039542586.35202800506429164430729792107,
    1439720407.311721673663223072794912393972,
    248874557.8620541565114603864132294232163,
    31426415.58540019438061423162831820536287,
    2876370.628935372441225409051620849613599,
    186056.2653952234950402949897160456992822,
    8071.672002365816210638002902272250613822,
    210.8242777515793458725097339207133627117,
    2.506628274631000270164908177133837338626};
constexpr std::array<double, 13> kLanczosDenom = {
    0.0,       39916800.0, 120543840.0, 150917976.0, 105258076.0, 45995730.0, 13339535.0,
    2637558.0, 357423.0,   32670.0,     1925.0,      66.0,        1.0};

double lanczos_sum(double z) {
  double num = 0.0;
  double den = 0.0;
  if (z <= 1.0) {
    for (std::size_t i = kLanczosNum.size(); i-- > 0;) {
      num = num * z + kLanczosNum[i];
      den = den * z + kLanczosDenom[i];
    }
    return num / den;
  }
  // Horner in 1/z keeps the degree-12 polynomials finite for large z.
  const double w = 1.0 / z;
  for (std::size_t i = 0; i < kLanczosNum.size(); ++i) {
    num = num * w + kLanczosNum[i];
    den = den * w + kLanczosDenom[i];
  }
  return num / den;
}

double weight_sin2(const Angle& a) {
  const double s = a.sin();
  return s * s;
}
double weight_minus_one_plus_cos(const Angle& a) { return -a.one_plus_cos(); }
double weight_one_minus_cos(const Angle& a) { return a.one_minus_cos(); }

// (1/pi) int_0^pi weight(theta) f(cos theta) dtheta
double regular_integral(const RenyiIntegrand& f, const KernelConfig& cfg,
                        double (*weight)(const Angle&)) {
  const double tol = std::min(1e-8, std::sqrt(cfg.tolerance));
  const auto r = integrate_angle([&](const Angle& a) { return weight(a) * f(a); }, tol);
  if (!(r.error <= std::sqrt(cfg.tolerance) * std::max(1.0, r.l1))) {
    throw AccuracyError("kernel endpoint quadrature did not converge", r.error);
  }
  return r.value / kPi;
}

// Clenshaw for sum_{k=0}^{n-1} c_k T_{k+1}(x).
double shifted_chebyshev_t_sum(std::span<const double> c, double x) {
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) {
    const double b0 = 2.0 * x * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  // b1 = sum c_k U_k(x), b2 = sum c_k U_{k-1}(x), and T_{k+1} = x U_k - U_{k-1}.
  return x * b1 - b2;
}

}  // namespace

void KernelConfig::validate() const {
  if (chebyshev_order < 8) {
    throw DomainError("KernelConfig: chebyshev_order must be >= 8, got " +
                      std::to_string(chebyshev_order));
  }
  if (quadrature_points < 2 * chebyshev_order) {
    throw DomainError("KernelConfig: quadrature_points must be >= 2 * chebyshev_order");
  }
  if (!(tolerance > 0.0)) {
    throw DomainError("KernelConfig: tolerance must be positive");
  }
}

double log_gamma(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw DomainError("log_gamma: argument must be positive and finite, got " + std::to_string(z));
  }
  const double zgh = z + kLanczosG - 0.5;
  return std::log(lanczos_sum(z)) + (z - 0.5) * std::log(zgh) - zgh;
}

double log_gamma_ratio(double z, double delta) {
  if (!(z > 0.0 && z + delta > 0.0) || !std::isfinite(z) || !std::isfinite(delta)) {
    throw DomainError("log_gamma_ratio: arguments must be positive and finite");
  }
  return std::log(boost::math::tgamma_delta_ratio(z, delta));
}

// ---------------------------------------------------------------------------

RenyiIntegrand::RenyiIntegrand(double alpha, double q) : RenyiIntegrand(AlphaOffset{alpha - 1.0}, q) {
  alpha_ = alpha;
}

RenyiIntegrand::RenyiIntegrand(AlphaOffset alpha_minus_one, double q)
    : alpha_(1.0 + alpha_minus_one.value), q_(q), alpha_minus_one_(alpha_minus_one.value) {
  const double alpha = alpha_;
  if (!(q > 0.0) || !std::isfinite(q)) {
    throw DomainError("kernel: q must be positive, got " + std::to_string(q));
  }
  if (!std::isfinite(alpha)) {
    throw DomainError("kernel: alpha must be finite");
  }
  if (alpha < 1.0 && !(is_integer(q) && q >= 2.0)) {
    throw DomainError("kernel: alpha < 1 requires integer q >= 2 (fractional power of a negative base), got alpha=" +
                      std::to_string(alpha) + ", q=" + std::to_string(q));
  }
}

double RenyiIntegrand::log_base(const Angle& a) const {
  if (alpha_minus_one_ == 0.0) {
    // y + 1 = 2 sin^2(comp / 2), taken in log form so that it never underflows.
    return std::numbers::ln2 + 2.0 * std::log(std::sin(0.5 * a.comp));
  }
  return std::log(alpha_minus_one_ + a.one_plus_cos());
}

double RenyiIntegrand::operator()(const Angle& a) const {
  if (alpha_minus_one_ < 0.0) {
    return operator()(a.cos());
  }
  const double lb = log_base(a);
  if (q_ == 1.0) return lb;
  return std::expm1((q_ - 1.0) * lb) / (q_ - 1.0);
}

double RenyiIntegrand::operator()(double y) const {
  if (alpha_minus_one_ < 0.0) {
    return (std::pow(y + alpha_, q_ - 1.0) - 1.0) / (q_ - 1.0);
  }
  return operator()(Angle::from_cos(y));
}

double RenyiIntegrand::divided_difference(const Angle& a, const Angle& b, double log_weight) const {
  if (alpha_minus_one_ < 0.0) {
    // integer q >= 2: f is a polynomial in z = y + alpha of degree m = q - 1
    const double za = a.cos() + alpha_;
    const double zb = b.cos() + alpha_;
    const int m = static_cast<int>(q_) - 1;
    double sum = 0.0;
    double pa = 1.0;
    for (int j = 0; j < m; ++j) {
      sum += pa * std::pow(zb, m - 1 - j);
      pa *= za;
    }
    return std::exp(log_weight) * sum / m;
  }
  // With bases z = y + alpha, let zmax be the larger and rho = zmin / zmax.
  // Then (f(b) - f(a)) / (z_b - z_a) = zmax^(q-2) (1 - rho^(q-1)) / ((q-1)(1 - rho)),
  // which is positive; it is assembled in logs because near y = -1 with
  // alpha = 1 both the bases and the weight underflow.
  const double la = log_base(a);
  const double lb = log_base(b);
  const double lmax = std::max(la, lb);
  const double log_d = log_abs_cos_difference(a, b);
  if (log_d == -std::numeric_limits<double>::infinity()) {
    return std::exp(log_weight + (q_ - 2.0) * la);  // f'(x) = (x + alpha)^(q-2)
  }
  const double log_one_minus_rho = std::min(0.0, log_d - lmax);
  // rho from the exact difference when the bases are close, from the logs otherwise
  const double log_rho = log_one_minus_rho < -std::numbers::ln2 ? std::log1p(-std::exp(log_one_minus_rho))
                                                                 : std::min(la, lb) - lmax;
  double log_num = 0.0;  // ln[(1 - rho^(q-1)) / (q - 1)]
  const double e = (q_ - 1.0) * log_rho;
  if (q_ == 1.0) {
    log_num = std::log(-log_rho);
  } else if (e > 30.0) {
    log_num = e - std::log(1.0 - q_) + std::log1p(-std::exp(-e));
  } else {
    log_num = std::log(-std::expm1(e) / (q_ - 1.0));
  }
  return std::exp(log_weight + (q_ - 2.0) * lmax + log_num - log_one_minus_rho);
}

// ---------------------------------------------------------------------------

namespace {

KernelMoments moments_of(const RenyiIntegrand& f, const KernelConfig& cfg) {
  cfg.validate();
  return {regular_integral(f, cfg, &weight_minus_one_plus_cos),
          regular_integral(f, cfg, &weight_one_minus_cos), regular_integral(f, cfg, &weight_sin2)};
}

}  // namespace

KernelMoments kernel_moments(double alpha, double q, const KernelConfig& cfg) {
  return moments_of(RenyiIntegrand(alpha, q), cfg);
}

KernelMoments kernel_moments(AlphaOffset alpha_minus_one, double q, const KernelConfig& cfg) {
  return moments_of(RenyiIntegrand(alpha_minus_one, q), cfg);
}

HilbertKernel::HilbertKernel(double alpha, double q, const KernelConfig& cfg) : f_(alpha, q), cfg_(cfg) {
  build();
}

HilbertKernel::HilbertKernel(AlphaOffset alpha_minus_one, double q, const KernelConfig& cfg)
    : f_(alpha_minus_one, q), cfg_(cfg) {
  build();
}

void HilbertKernel::build() {
  const KernelMoments m = moments_of(f_, cfg_);
  h_right_ = m.h_right;
  h_left_ = m.h_left;
  g_ = m.g;

  // Chebyshev-U coefficients by the discrete sine transform on interior nodes.
  const int max_order = std::max(kMaxChebyshevOrder, cfg_.chebyshev_order);
  for (int order = cfg_.chebyshev_order; order <= max_order; order *= 2) {
    const int points = std::max(cfg_.quadrature_points, 2 * order);
    // sin(m pi / (points + 1)) has period 2 (points + 1) in m.
    const std::size_t period = 2 * static_cast<std::size_t>(points + 1);
    std::vector<double> sine_table(period);
    for (std::size_t m = 0; m < period; ++m) {
      sine_table[m] = std::sin(kPi * static_cast<double>(m) / (points + 1));
    }
    std::vector<double> weighted(points);
    for (int k = 0; k < points; ++k) {
      const Angle a = Angle::from_theta(kPi * (k + 1) / (points + 1));
      weighted[k] = sine_table[k + 1] * f_(a);
    }
    std::vector<double> c(order, 0.0);
    for (int n = 0; n < order; ++n) {
      double acc = 0.0;
      for (int k = 0; k < points; ++k) {
        acc += weighted[k] * sine_table[(static_cast<std::size_t>(n + 1) * (k + 1)) % period];
      }
      c[n] = 2.0 * acc / (points + 1);
    }
    double norm = 0.0;
    double tail = 0.0;
    for (int n = 0; n < order; ++n) {
      norm += std::abs(c[n]);
      if (n >= order - order / 4) tail += std::abs(c[n]);
    }
    chebyshev_residual_ = tail / std::max(1.0, norm);
    coeffs_ = std::move(c);
    if (chebyshev_residual_ <= 0.01 * cfg_.tolerance) {
      method_ = Method::Chebyshev;
      break;
    }
    if (order > max_order / 2) break;
  }
  if (method_ != Method::Chebyshev) coeffs_.clear();
}

double HilbertKernel::h(double x) const {
  if (!(std::abs(x) <= 1.0)) {
    throw DomainError("h_kernel: |x| must be <= 1, got " + std::to_string(x));
  }
  if (x == 1.0) return h_right_;
  if (x == -1.0) return h_left_;
  if (method_ == Method::Chebyshev) return -shifted_chebyshev_t_sum(coeffs_, x);
  return h_by_quadrature(Angle::from_cos(x));
}

double HilbertKernel::h(const Angle& x) const {
  if (x.theta == 0.0) return h_right_;
  if (x.comp == 0.0) return h_left_;
  if (method_ == Method::Chebyshev) return -shifted_chebyshev_t_sum(coeffs_, x.cos());
  return h_by_quadrature(x);
}

double HilbertKernel::h_by_chebyshev(double x) const {
  if (method_ != Method::Chebyshev) {
    throw AccuracyError("h_kernel: Chebyshev expansion did not converge at order " +
                            std::to_string(std::max(kMaxChebyshevOrder, cfg_.chebyshev_order)),
                        chebyshev_residual_);
  }
  return -shifted_chebyshev_t_sum(coeffs_, x);
}

double HilbertKernel::h_by_quadrature(const Angle& x) const {
  // h(x) = (1/pi) int sqrt(1-y^2) (f(y) - f(x)) / (y - x) dy - x f(x)
  // The divided difference varies on the scale of x + alpha next to x, so the
  // range is split at x.
  const double tol = std::min(1e-8, std::sqrt(cfg_.tolerance));
  const double xf = x.cos() * f_(x);
  if (std::abs(xf) > 1e8) {
    // Only for q < 1 within (x + alpha) < ~1e-19 of the left edge: the two
    // terms cancel to below round-off, and h is taken at its edge limit.
    return h_left_;
  }
  auto integrand = [&](const Angle& y) { return f_.divided_difference(x, y, 2.0 * std::log(y.sin())); };
  const auto left = integrate_angle(integrand, tol, Angle{0.0, kPi}, x);
  const auto right = integrate_angle(integrand, tol, x, Angle{kPi, 0.0});
  const double error = left.error + right.error;
  if (!(error <= std::sqrt(cfg_.tolerance) * std::max(1.0, left.l1 + right.l1))) {
    throw AccuracyError("h_kernel quadrature did not converge", error);
  }
  return (left.value + right.value) / kPi - xf;
}

double h_kernel(double x, double alpha, double q, const KernelConfig& cfg) {
  return HilbertKernel(alpha, q, cfg).h(x);
}

double g_kernel(double alpha, double q, const KernelConfig& cfg) {
  return HilbertKernel(alpha, q, cfg).g();
}

}  // namespace entspec
