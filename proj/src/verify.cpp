#include "entspec/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "entspec/coulomb_oracle.hpp"
#include "entspec/critical.hpp"
#include "entspec/errors.hpp"
#include "entspec/haar_sampler.hpp"
#include "entspec/phase_solver.hpp"
#include "entspec/special.hpp"
#include "entspec/spectrum.hpp"

namespace entspec {

namespace {

constexpr double kLn2 = std::numbers::ln2;

class Suite {
 public:
  explicit Suite(VerifyReport& report) : report_(report) {}

  // residual = |f() - expected|
  void near(std::string name, const std::function<double()>& f, double expected, double tol) {
    run(std::move(name), tol, [&] { return std::abs(f() - expected); });
  }

  // residual = f(), a non-negative distance
  void below(std::string name, const std::function<double()>& f, double tol) { run(std::move(name), tol, f); }

 private:
  void run(std::string name, double tol, const std::function<double()>& residual) {
    CheckResult c;
    c.name = std::move(name);
    c.tolerance = tol;
    try {
      c.residual = residual();
      c.passed = c.residual <= tol;
    } catch (const std::exception& e) {
      c.residual = std::numeric_limits<double>::quiet_NaN();
      c.detail = e.what();
    }
    report_.checks.push_back(std::move(c));
  }

  VerifyReport& report_;
};

void fast_checks(Suite& s) {
  s.near("critical.u_C(1)", [] { return u_C(1.0); }, 2.0 / 3.0 + std::log(2.0 / 3.0), 1e-12);
  s.near("critical.u_C(2)", [] { return u_C(2.0); }, std::log(1.25), 1e-12);
  s.near("critical.u_E(1)", [] { return u_E(1.0); }, 0.5, 1e-12);
  s.near("critical.u_E(2)", [] { return u_E(2.0); }, kLn2, 1e-12);
  s.near("critical.u_C(10)", [] { return u_C(10.0); }, 0.2275, 0.005);
  s.near("critical.u_E(10)", [] { return u_E(10.0); }, 1.0810, 0.005);
  s.near("critical.u_C_minimum.q", [] { return u_C_minimum().q_star; }, 3.733, 0.05);
  s.near("critical.u_C_minimum.u", [] { return u_C_minimum().u_star; }, 0.214, 0.005);

  s.near("special.h_kernel(0,2,2)", [] { return h_kernel(0.0, 2.0, 2.0); }, 0.5, 1e-10);
  s.near("special.g_kernel(2,2)", [] { return g_kernel(2.0, 2.0); }, 0.5, 1e-10);

  s.near("phase_solver.beta_at_u_C(1)", [] { return solve({1.0, u_C(1.0), {}}).beta; }, 1.5, 1e-8);
  s.near("phase_solver.beta_at_u_E(2)", [] { return solve({2.0, kLn2, {}}).beta; }, 0.0, 1e-12);

  for (double u : {0.05, 0.1, 0.2}) {
    s.below("phase_solver.q2_closed_form(u=" + std::to_string(u).substr(0, 4) + ")", [u] {
      const auto k = solve_entangled({2.0, u, {}}, {}, EntangledRoute::Kernel);
      const auto c = solve_entangled({2.0, u, {}}, {}, EntangledRoute::ClosedForm);
      return std::max({std::abs(k.A - c.A), std::abs(k.B - c.B), std::abs(k.support.delta - c.support.delta),
                       std::abs(k.support.alpha - c.support.alpha)});
    }, 1e-8);
  }

  for (double q : {0.8, 1.0, 2.0, 5.0, 10.0}) {
    s.below("phase_solver.continuity_at_u_C(q=" + std::to_string(q).substr(0, 4) + ")", [q] {
      const auto e = entangled_at_alpha(q, 1.0);
      const auto t = typical_at_delta(q, critical_constants(q).delta_C);
      return std::max({std::abs(e.A - t.A), std::abs(e.B - t.B), std::abs(e.support.delta - t.support.delta)});
    }, 1e-8);
  }

  struct Point {
    double q;
    double u;
    std::optional<std::int64_t> N;
  };
  for (const Point& p : {Point{1.0, 0.1, {}}, Point{2.0, 0.5, {}}, Point{5.0, 0.6, {}}, Point{0.8, 0.3, {}},
                         Point{2.0, 1.0, 100}}) {
    const std::string tag = "(q=" + std::to_string(p.q).substr(0, 3) + ",u=" + std::to_string(p.u).substr(0, 3) + ")";
    s.below("spectrum.self_consistency" + tag, [p] {
      const Density d(solve({p.q, p.u, p.N}));
      return std::max({std::abs(d.moment(0.0) - 1.0), std::abs(d.moment(1.0) - 1.0), std::abs(d.u_of(p.q) - p.u)});
    }, 1e-6);
  }
}

void full_checks(Suite& s, std::uint64_t seed) {
  s.below("coulomb_oracle.newton_wasserstein(N=64,q=2,u=0.1)", [] {
    OracleConfig c;
    c.N = 64;
    c.q = 2.0;
    c.target_u = 0.1;
    return compare(minimize_potential(c), solve({2.0, 0.1, {}})).wasserstein1;
  }, 0.05);

  const double target = std::log(1.0 - 1.0 / 6.0) + 1.0 / 3.0;
  s.below("coulomb_oracle.metropolis_thermometry(N=64,q=1,beta=3)", [seed, target] {
    OracleConfig c;
    c.N = 64;
    c.q = 1.0;
    c.target_beta = 3.0;
    c.seed = seed;
    const auto r = metropolis_sample(c, 4000);
    double m = 0.0;
    for (const auto& st : r.states) m += st.energy;
    m /= static_cast<double>(r.states.size());
    return std::abs(m - target) / target;
  }, 0.05);

  std::vector<double> pooled;
  double u2 = 0.0;
  constexpr int kSamples = 100;
  for (const auto& sp : sample_spectra(256, kSamples, seed)) {
    pooled.insert(pooled.end(), sp.scaled_eigenvalues.begin(), sp.scaled_eigenvalues.end());
    u2 += u_estimate(sp, 2.0) / kSamples;
  }
  s.below("haar_sampler.ks_vs_marchenko_pastur(N=256)",
          [&] { return ks_distance(std::span<const double>(pooled), marchenko_pastur_cdf); }, 0.05);
  s.near("haar_sampler.mean_u(q=2)", [&] { return u2; }, kLn2, 0.02);
}

}  // namespace

bool VerifyReport::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

VerifyReport run_verify(VerifyLevel level, std::uint64_t seed) {
  VerifyReport report;
  report.level = level;
  report.seed = seed;
  Suite s(report);
  fast_checks(s);
  if (level == VerifyLevel::Full) full_checks(s, seed);
  return report;
}

}  // namespace entspec
