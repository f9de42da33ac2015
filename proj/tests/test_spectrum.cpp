#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "entspec/critical.hpp"
#include "entspec/errors.hpp"
#include "entspec/phase_solver.hpp"
#include "entspec/spectrum.hpp"

using namespace entspec;

namespace {

constexpr double kPi = std::numbers::pi;

const SpectrumSolution& mp2() {
  static const SpectrumSolution s = solve({2.0, std::numbers::ln2, {}});
  return s;
}

// Least-squares slope of ln sigma against ln(distance to the edge).
double edge_exponent(const Density& d, double edge, double sign, double from, double to) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (double e = from; e <= to * 1.0001; e *= std::pow(10.0, 0.1)) {
    const double x = std::log(e);
    const double y = std::log(d.sigma(edge + sign * e));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("phi and sigma at reference points") {
  for (double u : {0.05, 0.1, 0.2}) CHECK(std::abs(phi(solve({2.0, u, {}}), 0.0) - 2.0 / kPi) < 1e-10);
  CHECK(std::abs(phi(mp2(), 0.0) - 1.0 / kPi) < 1e-12);
  CHECK(std::abs(sigma(mp2(), 1.0) - std::sqrt(3.0) / (2.0 * kPi)) < 1e-12);

  const auto s = solve({2.0, 0.1, {}});
  const double alpha = 0.5 / std::sqrt(std::expm1(0.1));
  CHECK(std::abs(sigma(s, 1.0) - 2.0 * alpha / kPi) < 1e-10);
  CHECK(std::abs(sigma(s, 1.0) - 0.98152) < 1e-5);
  CHECK(sigma(s, s.support.b + 0.1) == 0.0);
  CHECK(sigma(s, s.support.a - 0.1) == 0.0);

  const Density d(s);
  CHECK(d.phi(0.999999) < 1e-2);
  CHECK(d.phi(-0.999999) < 1e-2);
  CHECK_THROWS_AS(d.phi(1.0), DomainError);
}

TEST_CASE("sigma matches the Marchenko-Pastur law") {
  for (double l = 0.01; l < 4.0; l += 0.037) {
    CHECK(std::abs(sigma(mp2(), l) - std::sqrt((4.0 - l) / l) / (2.0 * kPi)) < 1e-11);
  }
}

TEST_CASE("moments and u functionals") {
  const auto s = solve({2.0, 0.1, {}});
  CHECK(std::abs(moment(s, 0.0) - 1.0) < 1e-10);
  CHECK(std::abs(moment(s, 1.0) - 1.0) < 1e-10);
  const double alpha = 0.5 / std::sqrt(std::expm1(0.1));
  CHECK(std::abs(moment(s, 2.0) - std::exp(0.1)) < 1e-10);
  CHECK(std::abs(moment(s, 2.0) - (1.0 + 0.25 / (alpha * alpha))) < 1e-10);

  CHECK(std::abs(u_of(mp2(), 2.0) - std::numbers::ln2) < 1e-10);
  CHECK(std::abs(u_of(mp2(), 1.0) - 0.5) < 1e-10);
  // cross-order: the MP law sits on the evaporation line for every order
  for (double q : {0.7, 3.0, 5.0}) CHECK(std::abs(u_of(mp2(), q) - u_E(q)) < 1e-9);
  CHECK_THROWS_AS(moment(s, -1.0), DomainError);
}

TEST_CASE("moments against an independent quadrature of sigma") {
  for (double q : {0.8, 1.0, 3.0}) {
    const auto s = solve({q, 0.6 * u_C(q), {}});
    const Density d(s);
    // lambda = a + (b - a) sin^2(t/2) removes the square-root edges
    const double a = s.support.a;
    const double w = s.support.b - a;
    for (double p : {0.5, 2.0, 2.5}) {
      auto f = [&](double t) {
        const double st = std::sin(0.5 * t);
        const double l = a + w * st * st;
        return d.sigma(l) * std::pow(l, p) * w * 0.5 * std::sin(t);
      };
      const double m = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, kPi, 15, 1e-13);
      CHECK(std::abs(d.moment(p) - m) < 1e-9);
    }
  }
}

TEST_CASE("self-consistency on a grid spanning all phases") {
  for (int i = 0; i < 20; ++i) {
    const double q = 0.6 + (10.0 - 0.6) * i / 19.0;
    const double uE = u_E(q);
    const double top = 1.3 * uE + 0.2;
    for (int j = 0; j < 20; ++j) {
      const double u = top * (j + 0.5) / 20.0;
      const PhasePoint p{q, u, 100};
      const Density d(solve(p));
      CHECK_MESSAGE(std::abs(d.moment(0.0) - 1.0) < 1e-6, "q=" << q << " u=" << u);
      CHECK_MESSAGE(std::abs(d.moment(1.0) - 1.0) < 1e-6, "q=" << q << " u=" << u);
      CHECK_MESSAGE(std::abs(d.u_of(q) - u) < 1e-6, "q=" << q << " u=" << u);
    }
  }
}

TEST_CASE("edge behaviour") {
  // both edges vanish as a square root in the entangled phase
  for (double q : {1.0, 2.0, 5.0}) {
    const auto s = solve({q, 0.5 * u_C(q), {}});
    const Density d(s);
    CHECK(std::abs(edge_exponent(d, s.support.b, -1.0, 1e-8, 1e-7) - 0.5) < 0.05);
    CHECK(std::abs(edge_exponent(d, s.support.a, +1.0, 1e-8, 1e-7) - 0.5) < 0.05);
  }
  // inverse square-root divergence at lambda = 0 in the typical phase
  for (double q : {1.0, 2.0, 5.0}) {
    const auto s = solve({q, 0.5 * (u_C(q) + u_E(q)), {}});
    const Density d(s);
    CHECK(std::abs(edge_exponent(d, 0.0, +1.0, 1e-8, 1e-7) + 0.5) < 0.05);
    CHECK(std::abs(edge_exponent(d, s.support.b, -1.0, 1e-8, 1e-7) - 0.5) < 0.05);
  }
}

TEST_CASE("right edge grows with u") {
  for (double q : {0.8, 2.0, 6.0}) {
    double prev = 0.0;
    for (int k = 1; k <= 25; ++k) {
      const double b = solve({q, u_E(q) * k / 25.0, {}}).support.b;
      CHECK(b >= prev);
      prev = b;
    }
  }
}

TEST_CASE("grid export") {
  CHECK_THROWS_AS(export_grid(mp2(), 4), DomainError);
  const auto g = export_grid(mp2(), 64);
  CHECK(g.left_divergent);
  CHECK(g.lambdas.front() == 0.0);
  CHECK(g.lambdas.back() == 4.0);
  CHECK(g.densities.back() == 0.0);
  CHECK(std::isfinite(g.densities.front()));
  for (std::size_t k = 1; k < g.lambdas.size(); ++k) CHECK(g.lambdas[k] > g.lambdas[k - 1]);
  for (double v : g.densities) CHECK(v >= 0.0);

  const auto e = export_grid(solve({2.0, 0.1, {}}), 128);
  CHECK_FALSE(e.left_divergent);
  CHECK(std::abs(e.mass - 1.0) < 1e-4);

  const auto sep = export_grid(solve({2.0, std::log(4.0), 100}), 64);
  REQUIRE(sep.mu.has_value());
  CHECK(std::abs(*sep.mu - 0.178277) < 1e-6);
  CHECK(sep.phase == Phase::Separable);
  CHECK(std::abs(sep.mass - 1.0) < 1e-4);
}

TEST_CASE("grid mass over the phase diagram") {
  for (double q : {2.0, 3.0, 5.0, 10.0}) {
    for (double u : {0.3 * u_C(q), 0.9 * u_C(q), 0.5 * (u_C(q) + u_E(q)), u_E(q)}) {
      const auto g = export_grid(solve({q, u, {}}), 256);
      CHECK_MESSAGE(std::abs(g.mass - 1.0) < 1e-4, "q=" << q << " u=" << u);
    }
  }
}

TEST_CASE("distribution function and distances") {
  const Density d(solve({2.0, 0.1, {}}));
  const CdfTable t = d.cdf_table();
  CHECK(t(d.solution().support.a - 1.0) == 0.0);
  CHECK(t(d.solution().support.b + 1.0) == 1.0);
  // semicircle: symmetric about its centre
  const double c = d.solution().support.alpha * d.solution().support.delta;
  CHECK(std::abs(t(c) - 0.5) < 1e-8);

  const CdfTable mp = CdfTable::marchenko_pastur();
  for (double l : {0.1, 0.7, 2.0, 3.9}) CHECK(std::abs(mp(l) - marchenko_pastur_cdf(l)) < 1e-5);

  // quantile samples of the law itself are close in both distances
  std::vector<double> qs;
  for (int k = 0; k < 2000; ++k) {
    const double p = (k + 0.5) / 2000.0;
    double lo = 0.0, hi = 4.0;
    for (int it = 0; it < 60; ++it) {
      const double m = 0.5 * (lo + hi);
      (marchenko_pastur_cdf(m) < p ? lo : hi) = m;
    }
    qs.push_back(0.5 * (lo + hi));
  }
  CHECK(ks_distance(std::span<const double>(qs), marchenko_pastur_cdf) <= 0.5 / 2000.0 + 1e-9);
  CHECK(wasserstein1(qs, mp) < 1e-3);
  // a point mass at the mean is W1 = E|X - 1| away
  std::vector<double> ones(50, 1.0);
  auto absdev = [](double t) {
    const double s = std::sin(0.5 * t);
    const double l = 4.0 * s * s;
    return std::abs(l - 1.0) * std::sqrt((4.0 - l) / l) / (2.0 * kPi) * 4.0 * s * std::cos(0.5 * t);
  };
  const double e = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(absdev, 0.0, kPi, 15, 1e-12);
  CHECK(std::abs(wasserstein1(ones, mp) - e) < 1e-5);
}
