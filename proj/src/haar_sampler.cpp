#include "entspec/haar_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entspec/errors.hpp"
#include "entspec/rng.hpp"

namespace entspec {

EmpiricalSpectrum sample_spectrum(std::int64_t N, std::uint64_t seed) {
  if (N < 2) throw DomainError("sample_spectrum: N must be >= 2, got " + std::to_string(N));
  const auto n = static_cast<Eigen::Index>(N);
  CounterRng rng(seed);
  // E|g|^2 = 1; the overall scale drops out after trace normalisation anyway
  const double s = std::sqrt(0.5);
  Eigen::MatrixXcd G(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto [re, im] = rng.normal_pair();
      G(i, j) = {s * re, s * im};
    }
  }
  Eigen::MatrixXcd W(n, n);
  W.noalias() = G * G.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(W, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("sample_spectrum: eigensolver did not converge");

  EmpiricalSpectrum out;
  out.N = N;
  out.seed = seed;
  out.scaled_eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
  // W is positive semi-definite; clip round-off below zero
  for (double& v : out.scaled_eigenvalues) v = std::max(v, 0.0);
  std::sort(out.scaled_eigenvalues.begin(), out.scaled_eigenvalues.end());
  double trace = 0.0;
  for (double v : out.scaled_eigenvalues) trace += v;
  const double f = static_cast<double>(N) / trace;
  for (double& v : out.scaled_eigenvalues) v *= f;
  return out;
}

std::vector<EmpiricalSpectrum> sample_spectra(std::int64_t N, int count, std::uint64_t seed) {
  if (count < 1) throw DomainError("sample_spectra: count must be >= 1");
  std::vector<EmpiricalSpectrum> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    out.push_back(sample_spectrum(N, CounterRng(seed, static_cast<std::uint64_t>(k)).next_u64()));
  }
  return out;
}

double u_estimate(const EmpiricalSpectrum& spectrum, double q) {
  const auto& x = spectrum.scaled_eigenvalues;
  if (x.empty()) throw DomainError("u_estimate: empty spectrum");
  if (!(q > 0.0)) throw DomainError("u_estimate: q must be positive");
  const double n = static_cast<double>(x.size());
  if (q == 1.0) {
    // ln N + sum lambda ln lambda = (1/N) sum x ln x
    double s = 0.0;
    for (double v : x) s += v > 0.0 ? v * std::log(v) : 0.0;
    return s / n;
  }
  double s = 0.0;
  for (double v : x) s += v > 0.0 ? std::exp(q * std::log(v)) : 0.0;
  return std::log(s / n) / (q - 1.0);
}

}  // namespace entspec
