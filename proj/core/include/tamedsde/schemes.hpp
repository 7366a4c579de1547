#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tamedsde/brownian.hpp"
#include "tamedsde/problems.hpp"

namespace tamedsde {

struct SchemeConfig {
  double horizon = 1.0;       // T
  std::int64_t steps = 64;    // n grid intervals on [0, T]
  double delta = 1.0;
  double w_exp = 0.0;
  bool taming = true;         // false = plain Euler
};

struct AnomalyFlags {
  bool left_domain = false;
  bool non_finite = false;
};

// One simulated grid path plus its running diagnostics.
struct TrajectoryRecord {
  int dimension = 1;
  std::int64_t steps = 0;
  std::vector<double> grid_values;  // (steps+1) x dimension, row-major
  double sup_norm = 0.0;
  // Max of rho^{-1} over in-domain grid points up to and including the tau
  // hit (whole grid if no hit); +inf if a point in that range left D.
  double sup_inv_rho = 0.0;
  // First grid index j with X_j outside D or rho(X_j) <= delta n^{-w}.
  std::optional<std::int64_t> tau_hit_index;
  AnomalyFlags anomaly;

  std::span<const double> at(std::int64_t grid_index) const {
    return {grid_values.data() + static_cast<std::size_t>(grid_index) * dimension,
            static_cast<std::size_t>(dimension)};
  }
};

// delta * n^{-w}: the cutoff distance below which the tamed drift is zeroed.
double taming_threshold(const SchemeConfig& config);

// The step drift actually applied at x. Tamed: b(x) 1{x in D, rho(x) >=
// threshold}, defined on all of R^d. Untamed: b(x) on D; outside D the plain
// scheme is undefined, so the zero vector is returned and *left_domain (when
// given) is set.
std::vector<double> truncated_drift(const SingularProblem& problem,
                                    const SchemeConfig& config, std::span<const double> x,
                                    bool* left_domain = nullptr);

// Euler iteration X_{j+1} = X_j + b_n(X_j) T/n + dW_j on the fabric's path,
// with state materialized as (x0 + accumulated drift) + W(t_j) so that
// zero-drift problems reproduce the fabric values exactly at shared times.
// The simulation continues past the tau hit (the truncated drift is globally
// defined); a non-finite state freezes the path at the last finite value and
// raises anomaly.non_finite. Requires steps | fabric.fine_steps and matching
// horizons.
TrajectoryRecord simulate(const SingularProblem& problem, const SchemeConfig& config,
                          const BrownianFabric& fabric);

// Re-checks, at every pre-tau grid index of a tamed record, that the applied
// drift equals the raw drift exactly and that the state sits in D strictly
// above the threshold. Throws std::runtime_error on the first violation.
void verify_taming_identity(const SingularProblem& problem, const SchemeConfig& config,
                            const TrajectoryRecord& record);

}  // namespace tamedsde
