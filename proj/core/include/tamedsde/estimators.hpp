#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tamedsde/problems.hpp"
#include "tamedsde/schemes.hpp"

namespace tamedsde {

// Shared Monte Carlo knobs. Results are bit-identical for any `threads`
// value: per-path work is keyed by (master_seed, path index) and reductions
// run in ascending path order after the parallel phase.
struct MonteCarloConfig {
  std::int64_t samples = 1000;
  std::uint64_t master_seed = 0;
  std::int64_t n_ref_multiplier = 16;
  int threads = 0;  // 0 = hardware concurrency
};

struct ErrorEstimate {
  std::int64_t steps = 0;
  double p_order = 2.0;
  double mean_sup_error_p = 0.0;  // MC mean of (grid-sup |X^n - X^ref|)^p
  double root_error = 0.0;        // mean^{1/p}
  double std_error = 0.0;         // sample std of the p-th powers / sqrt(M)
  std::int64_t samples = 0;
  std::int64_t discarded = 0;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<std::int64_t> levels_used;
};

struct MomentEstimate {
  std::int64_t steps = 0;
  double p_order = 2.0;
  double mean_sup_inv_rho_p = 0.0;  // MC mean of (sup_{j<=tau} rho(X^n_j)^{-1})^p
  double std_error = 0.0;
  std::int64_t samples = 0;
};

struct StoppingEstimate {
  std::int64_t steps = 0;
  double fraction = 0.0;   // empirical P(tau^n <= T)
  double std_error = 0.0;  // binomial
  std::int64_t samples = 0;
};

struct DivergenceReport {
  double fraction_left_domain = 0.0;
  double fraction_non_finite = 0.0;
  double max_observed_norm = 0.0;
  std::int64_t samples = 0;
};

// Strong error of every level against the tamed reference at
// n_ref = n_ref_multiplier * max(levels), all driven by the same fabric per
// path. Per-level error is the max over the level's grid times of
// |X^n - X^ref|. A non-finite tamed path aborts the run (it indicates a bug);
// non-finite plain-Euler paths are discarded at every level and counted.
std::vector<ErrorEstimate> strong_error_curve(const SingularProblem& problem,
                                              const SchemeConfig& base_config,
                                              std::span<const std::int64_t> levels,
                                              double p_order, const MonteCarloConfig& mc);

// OLS of ln(root_error) on ln(n). Levels with root_error == 0 are excluded;
// fewer than 3 surviving levels is an error.
RateFit fit_rate(std::span<const ErrorEstimate> estimates);

// Per-level mean of sup_{j <= tau-hit} rho(X^n_j)^{-p}. Singular problems only.
std::vector<MomentEstimate> inverse_moment_curve(const SingularProblem& problem,
                                                 const SchemeConfig& base_config,
                                                 std::span<const std::int64_t> levels,
                                                 double p_order,
                                                 const MonteCarloConfig& mc);

// Per-level fraction of paths whose discrete tau hit occurs by T.
std::vector<StoppingEstimate> stopping_probability(const SingularProblem& problem,
                                                   const SchemeConfig& base_config,
                                                   std::span<const std::int64_t> levels,
                                                   const MonteCarloConfig& mc);

// Runs the plain Euler scheme (config.taming must be false) and reports how
// often paths exit D or blow up, and the largest |X| seen.
DivergenceReport divergence_probe(const SingularProblem& problem,
                                  const SchemeConfig& config_untamed,
                                  const MonteCarloConfig& mc);

// Spearman rank correlation (average ranks on ties); used by trend checks.
double spearman_rank_correlation(std::span<const double> x, std::span<const double> y);

}  // namespace tamedsde
