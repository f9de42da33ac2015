#include "entspec/coulomb_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "entspec/errors.hpp"
#include "entspec/rng.hpp"
#include "entspec/spectrum.hpp"
#include "near_one.hpp"
#include "root_finding.hpp"

namespace entspec {

namespace {

constexpr double kCollisionSpacing = 1e-14;
constexpr double kConstraintTolerance = 1e-10;
constexpr int kMaxRestarts = 3;

// (q x^(q-1) - 1) / (q - 1); 1 + ln x at q = 1
double entropy_force(double x, double q) { return 1.0 + q * detail::expm1_over(std::log(x), q); }

// q x^(q-2), the derivative of entropy_force
double entropy_force_slope(double x, double q) { return q * std::exp((q - 2.0) * std::log(x)); }

// Regularised entropy functional on scaled eigenvalues x = N lambda:
// D = (1/N) sum x^q - (1/N) sum x + 1 and u = ln(D) / (q - 1); at q = 1
// D = 1 and u = (1/N) sum x ln x.
struct Entropy {
  double D;
  double u;
};

Entropy entropy_of_scaled(std::span<const double> x, double q) {
  const double n = static_cast<double>(x.size());
  if (q == 1.0) {
    double s = 0.0;
    for (double v : x) s += v > 0.0 ? v * std::log(v) : 0.0;
    return {1.0, s / n};
  }
  double p = 0.0;
  double m = 0.0;
  for (double v : x) {
    p += v > 0.0 ? std::exp(q * std::log(v)) : 0.0;
    m += v;
  }
  const double D = p / n - m / n + 1.0;
  return {D, std::log(D) / (q - 1.0)};
}

std::string describe_history(const std::vector<double>& history) {
  std::ostringstream s;
  s.precision(3);
  s << "residual history:";
  const std::size_t from = history.size() > 12 ? history.size() - 12 : 0;
  if (from > 0) s << " ...";
  for (std::size_t i = from; i < history.size(); ++i) s << ' ' << history[i];
  return s.str();
}

// Saddle-point system in z = (x_1..x_N, xi, beta).
class SaddleSystem {
 public:
  SaddleSystem(std::int64_t n, double q, double u) : n_(static_cast<int>(n)), q_(q), u_(u) {}

  int size() const { return n_ + 2; }

  // For q <= 1 the entropy force diverges at lambda = 0 and keeps the
  // spectrum off the wall.
  bool has_wall() const { return q_ > 1.0; }

  // F = (dV/dlambda_j, mean - 1, u(x) - u); with the wall active the first
  // row is replaced by x_1 = 0.
  Eigen::VectorXd residual(const Eigen::VectorXd& z, bool wall) const {
    const int n = n_;
    const double nd = n;
    const auto x = std::span<const double>(z.data(), n);
    const Entropy e = entropy_of_scaled(x, q_);
    const double xi = z[n];
    const double beta = z[n + 1];
    Eigen::VectorXd F(n + 2);
    for (int j = 0; j < n; ++j) {
      double rep = 0.0;
      for (int k = 0; k < n; ++k) {
        if (k != j) rep += 1.0 / (x[k] - x[j]);
      }
      F[j] = 2.0 / nd * rep + beta * entropy_force(x[j], q_) / e.D + xi;
    }
    if (wall) F[0] = x[0];
    F[n] = std::accumulate(x.begin(), x.end(), 0.0) / nd - 1.0;
    F[n + 1] = e.u - u_;
    return F;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& z, bool wall) const {
    const int n = n_;
    const double nd = n;
    const auto x = std::span<const double>(z.data(), n);
    const Entropy e = entropy_of_scaled(x, q_);
    const double beta = z[n + 1];
    std::vector<double> g(n);
    for (int k = 0; k < n; ++k) g[k] = entropy_force(x[k], q_);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n + 2, n + 2);
    for (int j = 0; j < n; ++j) {
      double diag = 0.0;
      for (int k = 0; k < n; ++k) {
        if (k == j) continue;
        const double inv = 1.0 / (x[k] - x[j]);
        const double c = 2.0 / nd * inv * inv;
        J(j, k) = -c;
        diag += c;
      }
      // d/dx_k of beta g(x_j) / D, with dD/dx_k = (q - 1) g(x_k) / N
      const double outer = -beta * g[j] / (e.D * e.D) * (q_ - 1.0) / nd;
      for (int k = 0; k < n; ++k) J(j, k) += outer * g[k];
      J(j, j) += diag + (x[j] > 0.0 ? beta * entropy_force_slope(x[j], q_) / e.D : 0.0);
      J(j, n) = 1.0;
      J(j, n + 1) = g[j] / e.D;
    }
    if (wall) {
      J.row(0).setZero();
      J(0, 0) = 1.0;
    }
    for (int k = 0; k < n; ++k) {
      J(n, k) = 1.0 / nd;
      J(n + 1, k) = g[k] / (nd * e.D);
    }
    return J;
  }

  // dV/dlambda_1 at the current point, the wall's KKT quantity.
  double wall_force(const Eigen::VectorXd& z) const { return residual(z, false)[0]; }

 private:
  int n_;
  double q_;
  double u_;
};

double max_abs(const Eigen::VectorXd& F, int from, int to) {
  double m = 0.0;
  for (int i = from; i < to; ++i) m = std::max(m, std::abs(F[i]));
  return m;
}

double min_spacing(const Eigen::VectorXd& z, int n) {
  double s = std::numeric_limits<double>::infinity();
  for (int k = 0; k + 1 < n; ++k) s = std::min(s, z[k + 1] - z[k]);
  return s;
}

// Largest t in (0, 1] keeping x ordered (gaps shrink at most by half) and
// non-negative.
double admissible_step(const Eigen::VectorXd& z, const Eigen::VectorXd& dz, int n, bool wall) {
  double t = 1.0;
  for (int k = 0; k + 1 < n; ++k) {
    const double closing = dz[k] - dz[k + 1];
    if (closing > 0.0) t = std::min(t, 0.5 * (z[k + 1] - z[k]) / closing);
  }
  if (!wall && dz[0] < 0.0) t = std::min(t, 0.5 * z[0] / -dz[0]);
  return t;
}

// Initial multipliers by least squares on the lambda rows for fixed x.
void fit_multipliers(Eigen::VectorXd& z, const SaddleSystem& sys, int n, bool wall) {
  z[n] = 0.0;
  z[n + 1] = 0.0;
  const Eigen::VectorXd F0 = sys.residual(z, false);  // repulsion only
  z[n + 1] = 1.0;
  const Eigen::VectorXd F1 = sys.residual(z, false);
  const int first = wall ? 1 : 0;
  Eigen::MatrixXd M(n - first, 2);
  Eigen::VectorXd rhs(n - first);
  for (int j = first; j < n; ++j) {
    M(j - first, 0) = 1.0;
    M(j - first, 1) = F1[j] - F0[j];
    rhs[j - first] = -F0[j];
  }
  const Eigen::Vector2d c = M.colPivHouseholderQr().solve(rhs);
  z[n] = c[0];
  z[n + 1] = c[1];
}

struct NewtonOutcome {
  bool converged = false;
  bool collided = false;
  bool wall = false;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> history;
};

NewtonOutcome newton(Eigen::VectorXd& z, const SaddleSystem& sys, int n, const OracleConfig& cfg) {
  NewtonOutcome out;
  bool wall = sys.has_wall() && z[0] <= 0.0;
  if (wall) z[0] = 0.0;
  fit_multipliers(z, sys, n, wall);
  Eigen::VectorXd F = sys.residual(z, wall);
  double merit = F.squaredNorm();
  for (int it = 0; it < cfg.max_iterations; ++it) {
    out.iterations = it + 1;
    const double res = max_abs(F, wall ? 1 : 0, n);
    const double cons = max_abs(F, n, n + 2);
    out.history.push_back(std::max(res, cons));
    if (res <= cfg.step_tolerance && cons <= kConstraintTolerance) {
      if (wall && sys.wall_force(z) < -cfg.step_tolerance) {
        // the wall pulls: release it and continue in the interior
        wall = false;
        z[0] = 0.5 * z[1];
        F = sys.residual(z, wall);
        merit = F.squaredNorm();
        continue;
      }
      out.converged = true;
      break;
    }
    const Eigen::MatrixXd J = sys.jacobian(z, wall);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
    Eigen::VectorXd dz = lu.solve(-F);
    if (!dz.allFinite()) break;
    if (wall) dz[0] = 0.0;
    if (!wall && sys.has_wall() && z[0] + dz[0] < 0.0 && sys.wall_force(z) > 0.0) {
      // the step drives the smallest eigenvalue through lambda = 0: pin it there
      wall = true;
      z[0] = 0.0;
      F = sys.residual(z, wall);
      merit = F.squaredNorm();
      continue;
    }
    const bool log_step = !sys.has_wall();
    double t = admissible_step(z, dz, n, wall || log_step);
    Eigen::VectorXd trial;
    Eigen::VectorXd Ft;
    bool accepted = false;
    for (int h = 0; h < 40; ++h, t *= 0.5) {
      trial = z + t * dz;
      if (log_step) {
        // Newton step taken in ln x: an eigenvalue approaching lambda = 0
        // moves by decades rather than by halvings
        for (int k = 0; k < n; ++k) trial[k] = z[k] * std::exp(t * dz[k] / z[k]);
        if (min_spacing(trial, n) <= 0.0) continue;
      }
      Ft = sys.residual(trial, wall);
      if (Ft.allFinite() && Ft.squaredNorm() <= (1.0 - 1e-4 * t) * merit) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    z = trial;
    F = Ft;
    merit = F.squaredNorm();
    if (min_spacing(z, n) < kCollisionSpacing) {
      out.collided = true;
      break;
    }
  }
  out.wall = wall;
  out.residual = max_abs(F, wall ? 1 : 0, n);
  return out;
}

// Scaled configuration x(t) = 1 + t (y - 1) with u(x(t)) = u.
std::vector<double> contracted_start(const std::vector<double>& y, double q, double u) {
  auto config = [&](double t) {
    std::vector<double> x(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) x[k] = 1.0 + t * (y[k] - 1.0);
    return x;
  };
  auto residual = [&](double t) { return entropy_of_scaled(config(t), q).u - u; };
  detail::RootOptions opt;
  opt.x_tolerance = 1e-14;
  const double t = detail::bracketed_root(residual, 0.0, 1.0, -u, residual(1.0), opt, "oracle start");
  return config(t);
}

// Sea of N - 1 quantiles plus one evaporated eigenvalue m, with u(x) = u.
std::vector<double> evaporated_start(std::int64_t N, double q, double u) {
  const auto sea = marchenko_pastur_quantiles(N - 1);
  const double n = static_cast<double>(N);
  auto config = [&](double m) {
    std::vector<double> x(sea.size());
    const double scale = (n - m) / (n - 1.0);
    for (std::size_t k = 0; k < sea.size(); ++k) x[k] = scale * sea[k];
    x.push_back(m);
    return x;
  };
  auto residual = [&](double m) { return entropy_of_scaled(config(m), q).u - u; };
  const double lo = 1.2 * sea.back();
  const double hi = n * (1.0 - 1e-9);
  const double f_lo = residual(lo);
  if (f_lo >= 0.0) return config(lo);
  detail::RootOptions opt;
  opt.x_tolerance = 1e-14;
  return config(detail::bracketed_root(residual, lo, hi, f_lo, residual(hi), opt, "oracle evaporated start"));
}

}  // namespace

std::vector<double> CoulombGasState::scaled() const {
  std::vector<double> x(eigenvalues.size());
  const double n = static_cast<double>(eigenvalues.size());
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = n * eigenvalues[k];
  return x;
}

void OracleConfig::validate() const {
  if (N < 8) throw DomainError("oracle: N must be >= 8, got " + std::to_string(N));
  if (!(q > 0.0)) throw DomainError("oracle: q must be positive");
  if (max_iterations < 1) throw DomainError("oracle: max_iterations must be positive");
  if (!(step_tolerance > 0.0)) throw DomainError("oracle: step_tolerance must be positive");
  if (target_u.has_value() == target_beta.has_value()) {
    throw DomainError("oracle: exactly one of target u and target beta must be given");
  }
}

double entropy_deficit(std::span<const double> lambdas, double q) {
  std::vector<double> x(lambdas.begin(), lambdas.end());
  const double n = static_cast<double>(x.size());
  for (double& v : x) v *= n;
  return entropy_of_scaled(x, q).u;
}

std::vector<double> marchenko_pastur_quantiles(std::int64_t n) {
  std::vector<double> y(n);
  detail::RootOptions opt;
  opt.x_tolerance = 1e-15;
  for (std::int64_t k = 0; k < n; ++k) {
    const double p = (static_cast<double>(k) + 0.5) / static_cast<double>(n);
    auto f = [p](double l) { return marchenko_pastur_cdf(l) - p; };
    y[k] = detail::bracketed_root(f, 0.0, 4.0, -p, 1.0 - p, opt, "marchenko_pastur_quantiles");
  }
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  for (double& v : y) v /= mean;
  return y;
}

CoulombGasState minimize_potential(const OracleConfig& cfg) {
  cfg.validate();
  if (!cfg.target_u) throw DomainError("minimize_potential: a target u is required");
  const double u = *cfg.target_u;
  const double log_n = std::log(static_cast<double>(cfg.N));
  if (!(u > 0.0 && u < log_n)) throw DomainError("minimize_potential: u must lie in (0, ln N)");
  const auto mp = marchenko_pastur_quantiles(cfg.N);
  const double u_mp = entropy_of_scaled(mp, cfg.q).u;
  const auto start = u < u_mp ? contracted_start(mp, cfg.q, u) : evaporated_start(cfg.N, cfg.q, u);
  return minimize_potential(cfg, start);
}

CoulombGasState minimize_potential(const OracleConfig& cfg, std::span<const double> initial_scaled) {
  cfg.validate();
  if (!cfg.target_u) throw DomainError("minimize_potential: a target u is required");
  if (static_cast<std::int64_t>(initial_scaled.size()) != cfg.N) {
    throw DomainError("minimize_potential: initial configuration must have N entries");
  }
  const int n = static_cast<int>(cfg.N);
  const SaddleSystem sys(cfg.N, cfg.q, *cfg.target_u);
  std::vector<double> x0(initial_scaled.begin(), initial_scaled.end());
  std::sort(x0.begin(), x0.end());
  CounterRng rng(cfg.seed);

  std::vector<double> history;
  for (int attempt = 0; attempt <= kMaxRestarts; ++attempt) {
    Eigen::VectorXd z(n + 2);
    for (int k = 0; k < n; ++k) z[k] = x0[k];
    if (attempt > 0) {
      // jitter by a fraction of the local spacing, then restore the order
      for (int k = 0; k < n; ++k) {
        const double gap = k + 1 < n ? x0[k + 1] - x0[k] : x0[k] - x0[k - 1];
        z[k] = std::max(0.0, z[k] + 0.1 * gap * rng.uniform(-1.0, 1.0));
      }
      std::sort(z.data(), z.data() + n);
    }
    if (min_spacing(z, n) < kCollisionSpacing) continue;
    NewtonOutcome r = newton(z, sys, n, cfg);
    history.insert(history.end(), r.history.begin(), r.history.end());
    if (!r.converged) continue;

    CoulombGasState s;
    const double sum = z.head(n).sum();
    s.eigenvalues.resize(n);
    for (int k = 0; k < n; ++k) s.eigenvalues[k] = z[k] / sum;
    s.xi = z[n];
    s.beta = z[n + 1];
    s.energy = entropy_deficit(s.eigenvalues, cfg.q);
    s.residual = r.residual;
    s.iterations = r.iterations;
    s.restarts = attempt;
    s.wall_contact = r.wall;
    return s;
  }
  throw NumericalError("minimize_potential: no convergence after " + std::to_string(kMaxRestarts) +
                       " restarts (N = " + std::to_string(cfg.N) + ", q = " + std::to_string(cfg.q) +
                       ", u = " + std::to_string(*cfg.target_u) + "); " + describe_history(history));
}

// ---------------------------------------------------------------------------

ChainResult metropolis_sample(const OracleConfig& cfg, int sweeps, const ChainOptions& opt) {
  cfg.validate();
  if (!cfg.target_beta) throw DomainError("metropolis_sample: a target beta is required");
  if (sweeps < 1) throw DomainError("metropolis_sample: sweeps must be >= 1");
  const int n = static_cast<int>(cfg.N);
  const double nd = n;
  const double q = cfg.q;
  const double beta = *cfg.target_beta;
  const int burn_in = opt.burn_in_sweeps >= 0 ? opt.burn_in_sweeps : 10 * n;
  const int thin = opt.thin_sweeps > 0 ? opt.thin_sweeps : n;

  std::vector<double> x = opt.initial_scaled.empty() ? marchenko_pastur_quantiles(cfg.N) : opt.initial_scaled;
  if (static_cast<std::int64_t>(x.size()) != cfg.N) {
    throw DomainError("metropolis_sample: initial configuration must have N entries");
  }
  for (double v : x) {
    if (!(v > 0.0)) throw DomainError("metropolis_sample: initial configuration must be positive");
  }
  CounterRng rng(cfg.seed, opt.rng_counter);

  // sum of x^q (or x ln x at q = 1), updated per move and refreshed per sweep
  auto term = [q](double v) { return q == 1.0 ? v * std::log(v) : std::exp(q * std::log(v)); };
  auto energy_from = [&](double s_q) {
    if (q == 1.0) return s_q / nd;
    return std::log(s_q / nd) / (q - 1.0);
  };
  double s_q = 0.0;
  for (double v : x) s_q += term(v);
  double energy = energy_from(s_q);

  double step = opt.step > 0.0 ? opt.step : 0.5;
  long accepted = 0;
  long proposed = 0;
  const double weight = beta * nd * nd;

  auto sweep = [&]() {
    long acc = 0;
    for (int m = 0; m < n; ++m) {
      const int i = static_cast<int>(rng.index(n));
      int j = static_cast<int>(rng.index(n - 1));
      if (j >= i) ++j;
      const double d = rng.uniform(-step, step);
      const double xi_new = x[i] + d;
      const double xj_new = x[j] - d;
      const double log_u = std::log(rng.uniform());
      if (xi_new <= 0.0 || xj_new <= 0.0) continue;
      double dlog = 0.0;
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        dlog += std::log(std::abs((xi_new - x[k]) * (xj_new - x[k]) / ((x[i] - x[k]) * (x[j] - x[k]))));
      }
      dlog += std::log(std::abs((xi_new - xj_new) / (x[i] - x[j])));
      const double s_new = s_q - term(x[i]) - term(x[j]) + term(xi_new) + term(xj_new);
      const double e_new = energy_from(s_new);
      const double log_accept = 2.0 * dlog - weight * (e_new - energy);
      if (log_u < log_accept) {
        x[i] = xi_new;
        x[j] = xj_new;
        s_q = s_new;
        energy = e_new;
        ++acc;
      }
    }
    s_q = 0.0;
    for (double v : x) s_q += term(v);
    energy = energy_from(s_q);
    return acc;
  };

  for (int s = 0; s < burn_in; ++s) {
    const double rate = static_cast<double>(sweep()) / nd;
    step = std::clamp(step * std::exp(rate - 0.5), 1e-9, nd);
  }

  ChainResult out;
  for (int s = 1; s <= sweeps; ++s) {
    accepted += sweep();
    proposed += n;
    if (s % thin == 0) {
      CoulombGasState st;
      std::vector<double> lam(x);
      const double sum = std::accumulate(lam.begin(), lam.end(), 0.0);
      for (double& v : lam) v /= sum;
      std::sort(lam.begin(), lam.end());
      st.eigenvalues = std::move(lam);
      st.beta = beta;
      st.xi = std::numeric_limits<double>::quiet_NaN();
      st.energy = entropy_deficit(st.eigenvalues, q);
      st.residual = std::numeric_limits<double>::quiet_NaN();
      out.states.push_back(std::move(st));
    }
  }
  out.acceptance = static_cast<double>(accepted) / static_cast<double>(proposed);
  out.step = step;
  out.warning = out.acceptance < 0.1 || out.acceptance > 0.9;
  out.final_scaled = x;
  out.rng_counter = rng.counter();
  return out;
}

// ---------------------------------------------------------------------------

Comparison compare_samples(std::span<const double> scaled, double u_sample, const SpectrumSolution& solution) {
  const Density d(solution);
  const CdfTable cdf = d.cdf_table();
  return {wasserstein1(scaled, cdf), ks_distance(scaled, cdf), std::abs(u_sample - solution.point.u)};
}

Comparison compare(const CoulombGasState& state, const SpectrumSolution& solution) {
  std::vector<double> x = state.scaled();
  std::sort(x.begin(), x.end());
  if (solution.phase == Phase::Separable && !x.empty()) x.pop_back();
  return compare_samples(x, state.energy, solution);
}

}  // namespace entspec
