#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "entspec/phase_solver.hpp"

namespace entspec {

/// Finite-N eigenvalue configuration on the simplex.
struct CoulombGasState {
  std::vector<double> eigenvalues;  // ascending, sum 1
  double xi = 0.0;
  double beta = 0.0;
  double energy = 0.0;    // ln N - S_q
  double residual = 0.0;  // max_j |dV/d lambda_j| (Newton states only)
  int iterations = 0;
  int restarts = 0;
  /// The smallest eigenvalue sits on the wall lambda = 0 (a constraint, not a
  /// stationary point).
  bool wall_contact = false;

  std::vector<double> scaled() const;  // N * lambda
};

struct OracleConfig {
  std::int64_t N = 64;
  double q = 2.0;
  std::optional<double> target_u;
  std::optional<double> target_beta;
  int max_iterations = 200;
  double step_tolerance = 1e-10;
  std::uint64_t seed = 0;

  /// Throws DomainError unless N >= 8, q > 0, tolerances > 0 and exactly one
  /// target is set.
  void validate() const;
};

/// ln N - S_q of a configuration, through the regularised form
/// (1/(q-1)) ln((1/N) sum (N lambda)^q - sum lambda + 1); sum (lambda ln N lambda) at q = 1.
double entropy_deficit(std::span<const double> lambdas, double q);

/// Damped Newton on the saddle-point equations with (xi, beta) as unknowns.
/// The start is a Marchenko-Pastur configuration contracted towards the
/// uniform point (or carrying one evaporated eigenvalue) to match the target.
CoulombGasState minimize_potential(const OracleConfig& cfg);
/// Same from a given configuration of N * lambda (any order, sum N).
CoulombGasState minimize_potential(const OracleConfig& cfg, std::span<const double> initial_scaled);

struct ChainResult {
  std::vector<CoulombGasState> states;
  double acceptance = 0.0;
  double step = 0.0;  // proposal half-width in units of 1/N after tuning
  /// Acceptance outside [0.1, 0.9] after tuning.
  bool warning = false;
  /// Where to continue the chain: last configuration (N * lambda, unsorted)
  /// and the generator counter.
  std::vector<double> final_scaled;
  std::uint64_t rng_counter = 0;
};

struct ChainOptions {
  int burn_in_sweeps = -1;  // default 10 N
  int thin_sweeps = -1;     // default N
  /// Resume point. Empty: start from Marchenko-Pastur quantiles.
  std::vector<double> initial_scaled;
  std::uint64_t rng_counter = 0;
  double step = 0.0;  // <= 0: default 0.5
};

/// Metropolis chain with weight exp(-beta N^2 E) prod_{j<k} (lambda_j - lambda_k)^2
/// on the simplex, using pairwise mass exchanges. `sweeps` counts production
/// sweeps of N proposals after burn-in; a state is kept every thin_sweeps.
ChainResult metropolis_sample(const OracleConfig& cfg, int sweeps, const ChainOptions& opt = {});

struct Comparison {
  double wasserstein1;
  double ks;
  double u_gap;
};

/// Distances between the empirical measure of N * lambda (without the
/// largest eigenvalue when the solution is separable) and the analytic sigma.
Comparison compare(const CoulombGasState& state, const SpectrumSolution& solution);
/// Same for pooled scaled samples; u_gap is measured against `u_sample`.
Comparison compare_samples(std::span<const double> scaled, double u_sample, const SpectrumSolution& solution);

/// Marchenko-Pastur quantiles at (k + 1/2)/n, k = 0..n-1.
std::vector<double> marchenko_pastur_quantiles(std::int64_t n);

}  // namespace entspec
