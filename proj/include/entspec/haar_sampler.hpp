#pragma once

#include <cstdint>
#include <vector>

namespace entspec {

/// Spectrum of the reduced state of one Haar-random balanced bipartite pure
/// state, in units of N lambda.
struct EmpiricalSpectrum {
  std::vector<double> scaled_eigenvalues;  // ascending, mean 1
  std::int64_t N = 0;
  std::uint64_t seed = 0;
};

/// Eigenvalues of W = G G^dagger / tr(W) for an N x N matrix of standard
/// complex Gaussians, scaled by N. The draw is a pure function of (N, seed).
EmpiricalSpectrum sample_spectrum(std::int64_t N, std::uint64_t seed);

/// `count` independent draws; draw k is seeded with CounterRng(seed, k).next_u64().
std::vector<EmpiricalSpectrum> sample_spectra(std::int64_t N, int count, std::uint64_t seed);

/// (1/(q-1)) ln((1/N) sum (N lambda)^q); ln N + sum lambda ln lambda at q = 1.
double u_estimate(const EmpiricalSpectrum& spectrum, double q);

}  // namespace entspec
