#include "entspec/phase_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "entspec/critical.hpp"
#include "entspec/errors.hpp"
#include "near_one.hpp"
#include "root_finding.hpp"

namespace entspec {

namespace {

const double kHalfLogPi = 0.5 * std::log(std::numbers::pi);

// Accepted mismatch between the requested u and the u of the returned solution.
constexpr double kUTolerance = 1e-8;

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

void require_solver_q(double q) {
  if (!(q > 0.5)) {
    throw DomainError("phase solver: q must exceed 1/2 (critical lines undefined), got " + fmt(q));
  }
}

// l(q) = ln[ sqrt(pi) Gamma(q+2) / (2^q Gamma(q+1/2)) ] - ln(q+1); l(1) = 0.
double log_typical_ratio(double q) {
  return kHalfLogPi - log_gamma_ratio(q + 0.5, 0.5) - q * std::numbers::ln2;
}

// (q + 1 - R(q)) / (q - 1) with R = sqrt(pi) Gamma(q+2) / (2^q Gamma(q+1/2)).
double typical_slope(double q) {
  return detail::through_one(q, 2.0 - 2.0 * std::numbers::ln2, [](double p) {
    return -(p + 1.0) * std::expm1(log_typical_ratio(p)) / (p - 1.0);
  });
}

// (q delta^(q-1) - 1) / (q - 1)
double xi_factor(double delta, double q) {
  return 1.0 + q * detail::expm1_over(std::log(delta), q);
}

}  // namespace

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Entangled:
      return "Entangled";
    case Phase::Typical:
      return "Typical";
    case Phase::Separable:
      return "Separable";
  }
  return "unknown";
}

void PhasePoint::validate() const {
  if (!(q > 0.0) || !std::isfinite(q)) throw DomainError("phase point: q must be positive, got " + fmt(q));
  if (!(u >= 0.0) || !std::isfinite(u)) throw DomainError("phase point: u must be >= 0, got " + fmt(u));
  if (N) {
    if (*N < 2) throw DomainError("phase point: N must be >= 2, got " + std::to_string(*N));
    if (u > std::log(static_cast<double>(*N))) {
      throw PhaseError("phase point: u = " + fmt(u) + " exceeds ln N = " +
                       fmt(std::log(static_cast<double>(*N))));
    }
  }
}

SupportParams SupportParams::from_delta_alpha(double delta, double alpha) {
  return {delta * (alpha - 1.0), delta * (alpha + 1.0), delta, alpha};
}

SupportParams SupportParams::from_delta_offset(double delta, double alpha_minus_one) {
  return {delta * alpha_minus_one, delta * (2.0 + alpha_minus_one), delta, 1.0 + alpha_minus_one};
}

// u_C and u_E carry a few ulps of rounding; an input that rounds onto a
// critical value counts as sitting on it.
namespace {
bool on_level(double u, double level) {
  return std::abs(u - level) <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(level));
}
}  // namespace

Phase classify(const PhasePoint& point) {
  point.validate();
  require_solver_q(point.q);
  const double uc = u_C(point.q);
  const double ue = u_E(point.q);
  if (point.u < uc && !on_level(point.u, uc)) return Phase::Entangled;
  if (point.u <= ue || on_level(point.u, ue)) return Phase::Typical;
  if (!point.N) {
    throw PhaseError("classify: u = " + fmt(point.u) + " is beyond u_E(q) = " + fmt(u_E(point.q)) +
                     "; the separable phase needs N");
  }
  return Phase::Separable;
}

SpectrumSolution solve(const PhasePoint& point, const KernelConfig& cfg) {
  switch (classify(point)) {
    case Phase::Entangled:
      return solve_entangled(point, cfg);
    case Phase::Typical:
      return solve_typical(point, cfg);
    case Phase::Separable:
      return solve_separable(point);
  }
  throw PhaseError("solve: unknown phase");
}

Multipliers multipliers(const SpectrumSolution& s) {
  const double q = s.point.q;
  const double u = s.point.u;
  if (s.phase == Phase::Separable) {
    const double mu = s.mu.value();
    if (mu >= 1.0) {
      return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    }
    const auto N = static_cast<double>(s.point.N.value());
    const double xi = 1.0 / (1.0 - mu);
    const double log_n_mu = std::log(N * mu);
    // xi = -beta (q (N mu)^(q-1) - 1) / ((q-1) N^(q-1) mu^q)
    const double beta = -xi * mu * std::exp((q - 1.0) * log_n_mu) / xi_factor(N * mu, q);
    return {beta, xi};
  }
  const double delta = s.support.delta;
  // K = beta e^{-(q-1)u}, from B = (1/2) beta q delta^q e^{-(q-1)u}
  const double K = 2.0 * s.B / (q * std::pow(delta, q));
  const double beta = K * std::exp((q - 1.0) * u);
  const double xi = 2.0 * s.A / delta - K * xi_factor(delta, q);
  return {beta, xi};
}

// ---------------------------------------------------------------------------
// Entangled phase

SpectrumSolution entangled_at_alpha(double q, double alpha, const KernelConfig& cfg) {
  if (!(alpha >= 1.0)) throw DomainError("entangled_at_alpha: alpha must be >= 1, got " + fmt(alpha));
  return entangled_at_offset(q, alpha - 1.0, cfg);
}

SpectrumSolution entangled_at_offset(double q, double eps, const KernelConfig& cfg) {
  require_solver_q(q);
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw DomainError("entangled_at_offset: alpha - 1 must be >= 0, got " + fmt(eps));
  }
  const double alpha = 1.0 + eps;
  const KernelMoments k = kernel_moments(AlphaOffset{eps}, q, cfg);
  const double sum = k.h_right + k.h_left;
  const double A = -(k.h_right - k.h_left) / sum;
  const double B = -2.0 / sum;
  const double delta = 1.0 / (1.0 + eps - 0.5 * A - B * k.g);
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw NumericalError("entangled_at_alpha: non-positive support width at alpha = " + fmt(alpha));
  }
  // Multiply the saddle-point equation by lambda sigma(lambda) and integrate:
  //   -1 + K (q M - 1)/(q - 1) + xi = 0,  M = int sigma lambda^q = e^{(q-1)u},
  // which fixes u from (A, B, delta) without a moment integral.
  const double K = 2.0 * B / (q * std::pow(delta, q));
  const double xi = 2.0 * A / delta - K * xi_factor(delta, q);
  const double r = (1.0 - xi - K) / (q * K);

  SpectrumSolution s;
  s.phase = eps > 0.0 ? Phase::Entangled : Phase::Typical;
  s.boundary = eps == 0.0;
  s.point = {q, detail::log1p_over(r, q), std::nullopt};
  s.support = SupportParams::from_delta_offset(delta, eps);
  s.A = A;
  s.B = B;
  s.beta = K * (1.0 + (q - 1.0) * r);
  s.xi = xi;
  return s;
}

SpectrumSolution solve_entangled(const PhasePoint& point, const KernelConfig& cfg, EntangledRoute route) {
  point.validate();
  const double q = point.q;
  const double u = point.u;
  require_solver_q(q);
  if (!(u > 0.0)) {
    throw DomainError("solve_entangled: u = 0 is the maximally entangled point (delta spectrum at lambda = 1)");
  }
  const double uc = u_C(q);
  if (u >= uc || on_level(u, uc)) {
    throw PhaseError("solve_entangled: u = " + fmt(u) + " is not below u_C(q) = " + fmt(uc));
  }

  const bool has_closed_form = q == 1.0 || q == 2.0;
  if (route == EntangledRoute::ClosedForm && !has_closed_form) {
    throw DomainError("solve_entangled: closed forms exist only for q = 1 and q = 2");
  }
  if (has_closed_form && route != EntangledRoute::Kernel) {
    SpectrumSolution s;
    s.phase = Phase::Entangled;
    s.point = point;
    double alpha = 0.0;
    if (q == 2.0) {
      alpha = closed_form::purity_alpha(u);
      const auto c = closed_form::purity(alpha);
      s.A = c.A;
      s.B = c.B;
      s.support = SupportParams::from_delta_alpha(c.delta, alpha);
    } else {
      alpha = closed_form::von_neumann_alpha(u);
      const auto c = closed_form::von_neumann(alpha);
      s.A = c.A;
      s.B = c.B;
      s.support = SupportParams::from_delta_alpha(c.delta, alpha);
    }
    const Multipliers m = multipliers(s);
    s.beta = m.beta;
    s.xi = m.xi;
    return s;
  }

  // u decreases from u_C at alpha = 1 to 0 as alpha -> infinity. The root is
  // sought in ln(alpha - 1): close to alpha = 1, u_C - u grows like
  // (alpha - 1)^(q - 1/2) for q < 1, so alpha - 1 can be far below epsilon.
  auto residual = [&](double s) { return entangled_at_offset(q, std::exp(s), cfg).point.u - u; };
  double s_lo = std::log(1e-9);
  double f_lo = residual(s_lo);
  while (f_lo < 0.0) {
    s_lo -= 40.0;
    if (s_lo < -700.0) {
      throw NumericalError("solve_entangled: could not bracket alpha - 1 from below for u = " + fmt(u) +
                           " (u(alpha = 1 + 1e-304) - u = " + fmt(f_lo) + ")");
    }
    f_lo = residual(s_lo);
  }
  double s_hi = 0.0;
  double f_hi = residual(s_hi);
  while (f_hi > 0.0) {
    s_hi += 2.0;
    if (s_hi > 60.0) {
      throw NumericalError("solve_entangled: could not bracket alpha for u = " + fmt(u) + " (alpha up to e^60)");
    }
    f_hi = residual(s_hi);
  }
  if (s_hi > 0.0) s_lo = std::max(s_lo, s_hi - 2.0);
  detail::RootOptions opt;
  opt.x_tolerance = 0.0;
  opt.x_absolute = 1e-13;
  opt.max_iterations = 400;
  const double root = detail::bracketed_root(residual, s_lo, s_hi, residual(s_lo), f_hi, opt, "solve_entangled");
  SpectrumSolution s = entangled_at_offset(q, std::exp(root), cfg);
  if (!(std::abs(s.point.u - u) <= kUTolerance)) {
    throw NumericalError("solve_entangled: u mismatch " + fmt(s.point.u - u) + " at alpha - 1 = " +
                         fmt(std::exp(root)));
  }
  s.phase = Phase::Entangled;
  s.boundary = false;
  s.point = point;
  return s;
}

// ---------------------------------------------------------------------------
// Typical phase

double typical_u(double delta, double q) {
  if (!(delta > 0.0)) throw DomainError("typical_u: delta must be positive, got " + fmt(delta));
  if (!(q > 0.0)) throw DomainError("typical_u: q must be positive, got " + fmt(q));
  const double at_one = 1.0 - 0.25 * delta + std::log(0.5 * delta);
  return detail::through_one(q, at_one, [delta](double p) {
    const double bracket = std::log((p + 1.0) / delta - 0.5 * (p - 1.0)) + p * std::log(2.0 * delta) +
                           log_gamma_ratio(p + 0.5, 1.5) - kHalfLogPi;
    return bracket / (p - 1.0);
  });
}

SpectrumSolution typical_at_delta(double q, double delta) {
  require_solver_q(q);
  if (!(delta > 0.0 && delta <= 2.0)) {
    throw DomainError("typical_at_delta: delta must lie in (0, 2], got " + fmt(delta));
  }
  const double lever = 2.0 / delta - 1.0;
  const double R = (q + 1.0) * std::exp(log_typical_ratio(q));

  SpectrumSolution s;
  s.phase = Phase::Typical;
  s.point = {q, typical_u(delta, q), std::nullopt};
  s.support = SupportParams::from_delta_alpha(delta, 1.0);
  s.A = 1.0 - lever * typical_slope(q);
  s.B = lever * R;
  const Multipliers m = multipliers(s);
  s.beta = m.beta;
  s.xi = m.xi;
  return s;
}

SpectrumSolution solve_typical(const PhasePoint& point, const KernelConfig&) {
  point.validate();
  const double q = point.q;
  const double u = point.u;
  require_solver_q(q);
  const double uc = u_C(q);
  const double ue = u_E(q);
  const bool at_c = on_level(u, uc);
  const bool at_e = on_level(u, ue);
  if ((u < uc && !at_c) || (u > ue && !at_e)) {
    throw PhaseError("solve_typical: u = " + fmt(u) + " outside [u_C, u_E] = [" + fmt(uc) + ", " + fmt(ue) + "]");
  }
  const double delta_c = critical_constants(q).delta_C;
  double delta = 0.0;
  if (at_c) {
    delta = delta_c;
  } else if (at_e) {
    delta = 2.0;
  } else {
    // u(delta) increases on [delta_C, 2]; the sign check at both ends is the
    // numerical monotonicity guard.
    auto residual = [&](double d) { return typical_u(d, q) - u; };
    detail::RootOptions opt;
    opt.x_tolerance = 1e-15;
    delta = detail::bracketed_root(residual, delta_c, 2.0, residual(delta_c), residual(2.0), opt,
                                   "solve_typical");
  }
  SpectrumSolution s = typical_at_delta(q, delta);
  if (!(std::abs(s.point.u - u) <= kUTolerance)) {
    throw NumericalError("solve_typical: u mismatch " + fmt(s.point.u - u));
  }
  s.point = point;
  s.boundary = at_c || at_e;
  // Pin the exact endpoint values of the multipliers at the boundaries.
  const Multipliers m = multipliers(s);
  s.beta = at_e ? 0.0 : m.beta;
  s.xi = m.xi;
  return s;
}

// ---------------------------------------------------------------------------
// Separable phase

double separable_mu(double q, double u, std::int64_t N) {
  if (N < 2) throw DomainError("separable_mu: N must be >= 2");
  if (!(q > 0.0)) throw DomainError("separable_mu: q must be positive");
  const double n = static_cast<double>(N);
  const double log_n = std::log(n);
  if (!(u > 0.0) || u > log_n) {
    throw PhaseError("separable_mu: u = " + fmt(u) + " must lie in (0, ln N]");
  }
  if (u == log_n) return 1.0;
  // Left side of the evaporation equation, as a function of mu, in u units.
  auto lhs_u = [&](double mu) {
    if (q == 1.0) return mu * std::log(n * mu);
    const double power = std::exp((q - 1.0) * log_n + q * std::log(mu));
    return std::log(power - mu + 1.0) / (q - 1.0);
  };
  // Stationary point mu* = q^{-1/(q-1)} / N; the root lies on the increasing
  // branch [mu*, 1].
  const double mu_min = std::exp(-detail::log1p_over(1.0, q)) / n;
  auto residual = [&](double mu) { return lhs_u(mu) - u; };
  detail::RootOptions opt;
  opt.x_tolerance = 1e-15;
  return detail::bracketed_root(residual, mu_min, 1.0, residual(mu_min), residual(1.0), opt,
                                "separable_mu");
}

SpectrumSolution solve_separable(const PhasePoint& point) {
  point.validate();
  if (!point.N) throw PhaseError("solve_separable: N is required in the separable phase");
  const double q = point.q;
  const double ue = u_E(q);
  if (!(point.u > ue) || on_level(point.u, ue)) {
    throw PhaseError("solve_separable: u = " + fmt(point.u) + " is not above u_E(q) = " + fmt(ue));
  }
  const double n = static_cast<double>(*point.N);
  const double mu = separable_mu(q, point.u, *point.N);
  // Sea eigenvalues: (N-1) lambda / (1 - mu) is Marchenko-Pastur on [0, 4];
  // in units of N lambda the sea spans [0, 4 s].
  const double s_scale = (1.0 - mu) * n / (n - 1.0);

  SpectrumSolution s;
  s.phase = Phase::Separable;
  s.point = point;
  s.support = SupportParams::from_delta_alpha(2.0 * s_scale, 1.0);
  s.A = 1.0;
  s.B = 0.0;
  s.mu = mu;
  const Multipliers m = multipliers(s);
  s.beta = m.beta;
  s.xi = m.xi;
  return s;
}

// ---------------------------------------------------------------------------

namespace closed_form {

VonNeumann von_neumann(double alpha) {
  if (!(alpha >= 1.0)) throw DomainError("von_neumann: alpha must be >= 1");
  const double s = std::sqrt((alpha - 1.0) * (alpha + 1.0));
  const double w = alpha + s;  // alpha - s = 1 / w
  VonNeumann c;
  c.A = w * std::log(2.0 / w);
  c.B = w;
  c.delta = 4.0 / (3.0 * alpha + s);
  c.beta = 0.5 * w * (3.0 * alpha + s);
  c.u = std::log1p(-0.5 / c.beta) + 1.0 / c.beta;
  return c;
}

double von_neumann_alpha(double u) {
  const double uc = 2.0 / 3.0 + std::log(2.0 / 3.0);
  if (!(u > 0.0 && u <= uc)) throw PhaseError("von_neumann_alpha: u must lie in (0, u_C(1)]");
  // u(t) = ln(1 - t/2) + t with t = 1/beta in (0, 2/3], increasing in t.
  auto residual = [u](double t) { return std::log1p(-0.5 * t) + t - u; };
  detail::RootOptions opt;
  opt.x_tolerance = 1e-15;
  const double t = detail::bracketed_root(residual, 0.0, 2.0 / 3.0, -u, uc - u, opt, "von_neumann_alpha");
  // beta = w^2 + 1/2 with w = alpha + sqrt(alpha^2 - 1)
  const double w = std::sqrt(std::max(1.0, 1.0 / t - 0.5));
  return 0.5 * (w + 1.0 / w);
}

Purity purity(double alpha) {
  if (!(alpha >= 1.0)) throw DomainError("purity: alpha must be >= 1");
  return {-2.0 * (alpha - 1.0), 2.0, 1.0 / alpha};
}

double purity_alpha(double u) {
  if (!(u > 0.0)) throw DomainError("purity_alpha: u must be positive");
  return 0.5 / std::sqrt(std::expm1(u));
}

}  // namespace closed_form

}  // namespace entspec
