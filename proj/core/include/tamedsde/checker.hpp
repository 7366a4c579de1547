#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tamedsde/problems.hpp"

namespace tamedsde {

enum class AssumptionId {
  one_sided_lipschitz,
  push_away,
  hess_rho_bound,
  inv_poly_lipschitz,
  K_monotone,
  K_inv_lipschitz,
  K_push_away,
};

std::string to_string(AssumptionId id);

// Outcome of auditing one inequality on samples. worst_margin is the most
// adverse sampled slack (inequality satisfied iff margin >= 0 up to the
// floating-point tolerance 1e-9 * (1 + |lhs| + |rhs|) at the worst sample).
// The checker certifies "no violation found on these samples", never a proof.
struct CheckReport {
  AssumptionId assumption_id{};
  double worst_margin = 0.0;
  std::vector<double> witness;  // input(s) attaining the worst margin (x then y)
  std::optional<double> implied_constant;
  std::optional<double> implied_exponent;  // smallest grid l passing with declared c
  bool passed = false;
};

// Axis-aligned sampling region inside D. With log_spaced, coordinates are
// drawn log-uniformly (lo must be positive), which resolves the blow-up
// region near the singularity that uniform sampling would miss.
struct SampleBox {
  std::vector<double> lo;
  std::vector<double> hi;
  bool log_spaced = false;
};

// <b(x)-b(y), x-y> <= c |x-y|^2 over `pairs` sampled pairs. Also reports the
// smallest c making all sampled margins nonnegative.
CheckReport check_one_sided_lipschitz(const SingularProblem& problem,
                                      const SampleBox& sample_box, std::int64_t pairs,
                                      double c_declared, std::uint64_t seed = 0);

// <grad rho(x), b(x)> >= h1 rho^{-alpha} - h2 rho^{-beta} - h3 - h4 rho at
// the given grid points.
CheckReport check_push_away(const SingularProblem& problem,
                            std::span<const double> grid_points,
                            const StructuralConstants& constants);

// |hess rho(x)|_F <= c (1 + rho^{-beta}) at the given grid points.
CheckReport check_hess_rho_bound(const SingularProblem& problem,
                                 std::span<const double> grid_points,
                                 const StructuralConstants& constants);

// |b(x)-b(y)| <= c (1 + rho(x)^{-l} + rho(y)^{-l}) |x-y| over sampled pairs,
// at the declared (c, l). implied_constant is the smallest c for the declared
// l; implied_exponent the smallest l in {0.5, 1.0, ..., 2*l} that passes with
// the declared c.
CheckReport check_inv_poly_lipschitz(const SingularProblem& problem,
                                     const SampleBox& sample_box, std::int64_t pairs,
                                     const StructuralConstants& constants,
                                     std::uint64_t seed = 0);

// Audits the pair kernel itself: one-sided Lipschitz, inverse-polynomial
// Lipschitz (l = p+2) and the lower bound
// K(x) >= p a1 x^{-(p+1)} - q a2 x^{-(q+1)} - h3 - h4 x, all on radial samples.
std::vector<CheckReport> check_lj_kernel(const LennardJonesPairParams& params,
                                         std::span<const double> radial_grid,
                                         std::int64_t pairs, std::uint64_t seed = 0);

// Log-spaced ladder, ascending, inclusive endpoints. lo, hi > 0.
std::vector<double> log_spaced_grid(double lo, double hi, std::int64_t count);

}  // namespace tamedsde
