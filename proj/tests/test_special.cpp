#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "entspec/errors.hpp"
#include "entspec/special.hpp"

using namespace entspec;

namespace {

constexpr double kPi = std::numbers::pi;

// Finite Hilbert transforms of y^k against sqrt(1-y^2), from
// y^k = (y - x) * (...) + x^k and the moments of the semicircle weight.
double H0(double x) { return -x; }
double H1(double x) { return 0.5 - x * x; }
double H2(double x) { return 0.5 * x - x * x * x; }
double H3(double x) { return 0.125 + 0.5 * x * x - x * x * x * x; }

// h for integer q, expanding ((y + alpha)^(q-1) - 1) / (q - 1) in powers of y.
double h_polynomial(double x, double alpha, int q) {
  switch (q) {
    case 2:  // y + alpha - 1
      return H1(x) + (alpha - 1.0) * H0(x);
    case 3:  // (y^2 + 2 alpha y + alpha^2 - 1) / 2
      return 0.5 * (H2(x) + 2.0 * alpha * H1(x) + (alpha * alpha - 1.0) * H0(x));
    case 4:  // (y^3 + 3 alpha y^2 + 3 alpha^2 y + alpha^3 - 1) / 3
      return (H3(x) + 3.0 * alpha * H2(x) + 3.0 * alpha * alpha * H1(x) + (alpha * alpha * alpha - 1.0) * H0(x)) /
             3.0;
  }
  return NAN;
}

// Regular integral (1/pi) int_0^pi sin^2(t) f(cos t) dt by adaptive Gauss-Kronrod.
template <class F>
double semicircle_average(F f) {
  auto g = [&](double t) {
    const double s = std::sin(t);
    return s * s * f(std::cos(t));
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, 0.0, kPi, 15, 1e-14) / kPi;
}

}  // namespace

TEST_CASE("log_gamma matches known values and the C library") {
  CHECK(std::abs(log_gamma(1.0)) < 1e-13);
  CHECK(std::abs(log_gamma(0.5) - 0.5 * std::log(kPi)) < 1e-13);
  // Gamma(11.5) = 10.5 * 9.5 * ... * 0.5 * sqrt(pi)
  double p = std::sqrt(kPi);
  for (double k = 0.5; k < 11.0; k += 1.0) p *= k;
  CHECK(std::abs(log_gamma(11.5) - std::log(p)) < 1e-12);
  CHECK(std::abs(log_gamma(11.5) - 16.292) < 1e-4);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> z(0.01, 60.0);
  for (int i = 0; i < 200; ++i) {
    const double v = z(rng);
    CHECK(std::abs(log_gamma(v) - std::lgamma(v)) < 1e-13 * std::max(1.0, std::abs(std::lgamma(v))));
  }
  CHECK_THROWS_AS(log_gamma(0.0), DomainError);
  CHECK_THROWS_AS(log_gamma(-1.5), DomainError);
}

TEST_CASE("h_kernel worked examples") {
  CHECK(std::abs(h_kernel(0.0, 2.0, 2.0) - 0.5) < 1e-10);
  CHECK(std::abs(h_kernel(1.0, 1.5, 2.0) - (-1.0)) < 1e-10);
  // (y+1)^2 - 1 over 2 at alpha = 1: h(0) = H2(0)/2 + H1(0) = 1/2
  CHECK(std::abs(h_kernel(0.0, 1.0, 3.0) - 0.5) < 1e-10);
}

TEST_CASE("h_kernel is exact for polynomial integrands") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ux(-1.0, 1.0);
  for (int q : {2, 3, 4}) {
    for (double alpha : {1.0, 1.3, 2.5}) {
      const HilbertKernel k(alpha, q);
      for (int i = 0; i < 100; ++i) {
        const double x = ux(rng);
        CHECK(std::abs(k.h(x) - h_polynomial(x, alpha, q)) < 1e-12);
      }
    }
  }
}

TEST_CASE("h_kernel by the two routes agrees where both converge") {
  for (double q : {0.7, 1.0, 1.5, 2.5}) {
    const HilbertKernel k(1.8, q);
    REQUIRE(k.method() == HilbertKernel::Method::Chebyshev);
    for (double x : {-0.999, -0.5, 0.0, 0.3, 0.9}) {
      CHECK(std::abs(k.h_by_chebyshev(x) - k.h_by_quadrature(Angle::from_cos(x))) < 1e-9);
    }
  }
}

TEST_CASE("g_kernel against an independent quadrature") {
  CHECK(std::abs(g_kernel(2.0, 2.0) - 0.5) < 1e-10);
  CHECK(std::abs(g_kernel(1.0, 2.0)) < 1e-10);
  // (1/pi) int sqrt(1-y^2) ln(1+y) dy = 1/4 - ln(2)/2
  CHECK(std::abs(g_kernel(1.0, 1.0) - (0.25 - 0.5 * std::numbers::ln2)) < 1e-10);
  for (double q : {0.6, 1.0, 1.7, 3.0, 6.5}) {
    for (double alpha : {1.0, 1.2, 4.0}) {
      const double expected = semicircle_average([&](double y) {
        if (q == 1.0) return std::log(y + alpha);
        return (std::pow(y + alpha, q - 1.0) - 1.0) / (q - 1.0);
      });
      CHECK(std::abs(g_kernel(alpha, q) - expected) < 1e-9);
    }
  }
}

TEST_CASE("zero-mass identity of the finite Hilbert transform") {
  // (1/pi) int h(x) / sqrt(1-x^2) dx = (1/pi) int_0^pi h(cos t) dt
  const KernelConfig cfg;
  for (double q : {0.7, 1.0, 2.0, 3.5}) {
    for (double alpha : {1.0, 1.5, 3.0}) {
      const HilbertKernel k(alpha, q, cfg);
      auto f = [&](double t) { return k.h(Angle::from_theta(t)); };
      const double m = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, kPi, 12, 1e-12) / kPi;
      CHECK_MESSAGE(std::abs(m) < 10.0 * cfg.tolerance, "q=" << q << " alpha=" << alpha << " mass=" << m);
    }
  }
}

TEST_CASE("q-continuity of h around q = 1") {
  for (double alpha : {1.0, 1.5, 3.0}) {
    const HilbertKernel k1(alpha, 1.0);
    const HilbertKernel lo(alpha, 1.0 - 1e-6);
    const HilbertKernel hi(alpha, 1.0 + 1e-6);
    for (double x = -0.95; x < 1.0; x += 0.1) {
      CHECK(std::abs(lo.h(x) - k1.h(x)) <= 1e-4);
      CHECK(std::abs(hi.h(x) - k1.h(x)) <= 1e-4);
    }
  }
}

TEST_CASE("g_kernel increases with alpha for q > 1") {
  for (double q : {1.2, 2.0, 4.0}) {
    double prev = g_kernel(1.0, q);
    for (double alpha = 1.1; alpha < 5.0; alpha += 0.3) {
      const double g = g_kernel(alpha, q);
      CHECK(g > prev);
      prev = g;
    }
  }
}

TEST_CASE("kernel domain errors") {
  CHECK_THROWS_AS(h_kernel(0.0, 0.5, 2.5), DomainError);
  CHECK_THROWS_AS(h_kernel(1.5, 2.0, 2.0), DomainError);
  CHECK_THROWS_AS(g_kernel(2.0, 0.0), DomainError);
  KernelConfig bad;
  bad.chebyshev_order = 4;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = {};
  bad.quadrature_points = bad.chebyshev_order;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = {};
  bad.tolerance = 0.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}
