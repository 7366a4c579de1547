#include "tamedsde/checker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tamedsde/counter_rng.hpp"

namespace tamedsde {

namespace {

// Accepted slack for near-equality cases: round-off on either side must not
// flip a pass into a fail.
double tolerance_for(double lhs, double rhs) {
  return 1.0e-9 * (1.0 + std::abs(lhs) + std::abs(rhs));
}

struct WorstMargin {
  double margin = std::numeric_limits<double>::infinity();
  double tolerance = 0.0;
  std::vector<double> witness;

  void offer(double m, double tol, std::span<const double> x,
             std::span<const double> y = {}) {
    if (m >= margin) return;
    margin = m;
    tolerance = tol;
    witness.assign(x.begin(), x.end());
    witness.insert(witness.end(), y.begin(), y.end());
  }

  bool passed() const { return margin >= -tolerance; }
};

// Deterministic point sampler over a box; sample index k, attempt a draw the
// coordinates from the (seed, stream) Philox stream. Rejection-filters by the
// domain predicate so the drift is never evaluated outside D.
class BoxSampler {
 public:
  BoxSampler(const SingularProblem& problem, const SampleBox& box, std::uint64_t seed,
             std::uint64_t stream)
      : problem_(problem), box_(box), seed_(seed), stream_(stream) {
    const auto d = static_cast<std::size_t>(problem.dimension());
    if (box.lo.size() != d || box.hi.size() != d)
      throw std::invalid_argument("sample box dimension mismatch");
    for (std::size_t c = 0; c < d; ++c) {
      if (!(box.lo[c] < box.hi[c]))
        throw std::invalid_argument("sample box must have lo < hi");
      if (box.log_spaced && !(box.lo[c] > 0.0))
        throw std::invalid_argument("log-spaced sampling needs positive bounds");
    }
  }

  std::vector<double> draw(std::int64_t index) const {
    const auto d = static_cast<std::size_t>(problem_.dimension());
    std::vector<double> x(d);
    for (int attempt = 0; attempt < 1000; ++attempt) {
      for (std::size_t c = 0; c < d; ++c) {
        const std::uint64_t block =
            (static_cast<std::uint64_t>(index) * 1024 + static_cast<std::uint64_t>(attempt)) *
                d +
            c;
        const double u = rng::uniform_open(seed_, stream_, block, 0);
        if (box_.log_spaced) {
          x[c] = box_.lo[c] * std::exp(u * std::log(box_.hi[c] / box_.lo[c]));
        } else {
          x[c] = box_.lo[c] + u * (box_.hi[c] - box_.lo[c]);
        }
      }
      if (problem_.domain_member(x)) return x;
    }
    throw std::invalid_argument("sample box appears to lie outside the domain D");
  }

 private:
  const SingularProblem& problem_;
  SampleBox box_;
  std::uint64_t seed_;
  std::uint64_t stream_;
};

double norm_diff(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double dot_diff(std::span<const double> da, std::span<const double> db,
                std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (da[i] - db[i]) * (a[i] - b[i]);
  return s;
}

}  // namespace

std::string to_string(AssumptionId id) {
  switch (id) {
    case AssumptionId::one_sided_lipschitz: return "one_sided_lipschitz";
    case AssumptionId::push_away: return "push_away";
    case AssumptionId::hess_rho_bound: return "hess_rho_bound";
    case AssumptionId::inv_poly_lipschitz: return "inv_poly_lipschitz";
    case AssumptionId::K_monotone: return "K_monotone";
    case AssumptionId::K_inv_lipschitz: return "K_inv_lipschitz";
    case AssumptionId::K_push_away: return "K_push_away";
  }
  return "unknown";
}

std::vector<double> log_spaced_grid(double lo, double hi, std::int64_t count) {
  if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("need 0 < lo < hi");
  if (count < 2) throw std::invalid_argument("need at least two grid points");
  std::vector<double> grid(static_cast<std::size_t>(count));
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::int64_t i = 0; i < count; ++i)
    grid[static_cast<std::size_t>(i)] = lo * std::exp(static_cast<double>(i) * step);
  grid.back() = hi;
  return grid;
}

CheckReport check_one_sided_lipschitz(const SingularProblem& problem,
                                      const SampleBox& sample_box, std::int64_t pairs,
                                      double c_declared, std::uint64_t seed) {
  if (pairs < 1) throw std::invalid_argument("need at least one pair");
  const BoxSampler sampler_x(problem, sample_box, seed, 1);
  const BoxSampler sampler_y(problem, sample_box, seed, 2);

  WorstMargin worst;
  double implied = 0.0;  // smallest c >= 0 with all sampled margins nonnegative
  for (std::int64_t k = 0; k < pairs; ++k) {
    const std::vector<double> x = sampler_x.draw(k);
    const std::vector<double> y = sampler_y.draw(k);
    const double dist2 = norm_diff(x, y) * norm_diff(x, y);
    if (dist2 == 0.0) continue;
    const std::vector<double> bx = problem.drift(x);
    const std::vector<double> by = problem.drift(y);
    const double inner = dot_diff(bx, by, x, y);
    const double margin = c_declared * dist2 - inner;
    worst.offer(margin, tolerance_for(c_declared * dist2, inner), x, y);
    implied = std::max(implied, inner / dist2);
  }
  CheckReport report;
  report.assumption_id = AssumptionId::one_sided_lipschitz;
  report.worst_margin = worst.margin;
  report.witness = worst.witness;
  report.implied_constant = implied;
  report.passed = worst.passed();
  return report;
}

CheckReport check_push_away(const SingularProblem& problem,
                            std::span<const double> grid_points,
                            const StructuralConstants& constants) {
  const int d = problem.dimension();
  if (grid_points.empty() || grid_points.size() % static_cast<std::size_t>(d) != 0)
    throw std::invalid_argument("grid size must be a positive multiple of the dimension");
  const std::size_t count = grid_points.size() / static_cast<std::size_t>(d);

  WorstMargin worst;
  for (std::size_t i = 0; i < count; ++i) {
    const std::span<const double> x = grid_points.subspan(i * d, static_cast<std::size_t>(d));
    if (!problem.domain_member(x))
      throw std::invalid_argument("push-away grid points must lie in D");
    const double rho = problem.rho(x);
    const std::vector<double> b = problem.drift(x);
    const std::vector<double> grad = problem.grad_rho(x);
    double lhs = 0.0;
    for (int c = 0; c < d; ++c) lhs += grad[static_cast<std::size_t>(c)] * b[static_cast<std::size_t>(c)];
    const double rhs = constants.h1 * std::pow(rho, -constants.alpha) -
                       constants.h2 * std::pow(rho, -constants.beta) - constants.h3 -
                       constants.h4 * rho;
    worst.offer(lhs - rhs, tolerance_for(lhs, rhs), x);
  }
  CheckReport report;
  report.assumption_id = AssumptionId::push_away;
  report.worst_margin = worst.margin;
  report.witness = worst.witness;
  report.passed = worst.passed();
  return report;
}

CheckReport check_hess_rho_bound(const SingularProblem& problem,
                                 std::span<const double> grid_points,
                                 const StructuralConstants& constants) {
  if (!problem.has_hess_rho())
    throw std::invalid_argument("problem provides no hess_rho; skip this check");
  const int d = problem.dimension();
  if (grid_points.empty() || grid_points.size() % static_cast<std::size_t>(d) != 0)
    throw std::invalid_argument("grid size must be a positive multiple of the dimension");
  const std::size_t count = grid_points.size() / static_cast<std::size_t>(d);

  std::vector<double> hess(static_cast<std::size_t>(d) * static_cast<std::size_t>(d));
  WorstMargin worst;
  for (std::size_t i = 0; i < count; ++i) {
    const std::span<const double> x = grid_points.subspan(i * d, static_cast<std::size_t>(d));
    if (!problem.domain_member(x))
      throw std::invalid_argument("hess grid points must lie in D");
    problem.hess_rho(x, hess);
    double frob = 0.0;
    for (const double v : hess) frob += v * v;
    frob = std::sqrt(frob);
    const double rho = problem.rho(x);
    const double bound = constants.c * (1.0 + std::pow(rho, -constants.beta));
    worst.offer(bound - frob, tolerance_for(bound, frob), x);
  }
  CheckReport report;
  report.assumption_id = AssumptionId::hess_rho_bound;
  report.worst_margin = worst.margin;
  report.witness = worst.witness;
  report.passed = worst.passed();
  return report;
}

CheckReport check_inv_poly_lipschitz(const SingularProblem& problem,
                                     const SampleBox& sample_box, std::int64_t pairs,
                                     const StructuralConstants& constants,
                                     std::uint64_t seed) {
  if (pairs < 1) throw std::invalid_argument("need at least one pair");
  const BoxSampler sampler_x(problem, sample_box, seed, 3);
  const BoxSampler sampler_y(problem, sample_box, seed, 4);

  // Candidate exponents for the smallest-l search, 0.5 steps up to 2l.
  std::vector<double> l_grid;
  for (double l = 0.5; l <= 2.0 * constants.l + 1.0e-12; l += 0.5) l_grid.push_back(l);

  WorstMargin worst;
  double implied_c = 0.0;
  std::vector<double> implied_c_at(l_grid.size(), 0.0);
  for (std::int64_t k = 0; k < pairs; ++k) {
    const std::vector<double> x = sampler_x.draw(k);
    const std::vector<double> y = sampler_y.draw(k);
    const double dist = norm_diff(x, y);
    if (dist == 0.0) continue;
    const double rho_x = problem.rho(x);
    const double rho_y = problem.rho(y);
    const std::vector<double> bx = problem.drift(x);
    const std::vector<double> by = problem.drift(y);
    const double diff = norm_diff(bx, by);

    const double weight = 1.0 + std::pow(rho_x, -constants.l) + std::pow(rho_y, -constants.l);
    const double rhs = constants.c * weight * dist;
    worst.offer(rhs - diff, tolerance_for(rhs, diff), x, y);
    implied_c = std::max(implied_c, diff / (weight * dist));
    for (std::size_t li = 0; li < l_grid.size(); ++li) {
      const double w_l = 1.0 + std::pow(rho_x, -l_grid[li]) + std::pow(rho_y, -l_grid[li]);
      implied_c_at[li] = std::max(implied_c_at[li], diff / (w_l * dist));
    }
  }

  CheckReport report;
  report.assumption_id = AssumptionId::inv_poly_lipschitz;
  report.worst_margin = worst.margin;
  report.witness = worst.witness;
  report.implied_constant = implied_c;
  report.passed = worst.passed();
  // Smallest candidate l that still passes with the declared c.
  for (std::size_t li = 0; li < l_grid.size(); ++li) {
    if (implied_c_at[li] <= constants.c * (1.0 + 1.0e-9)) {
      report.implied_exponent = l_grid[li];
      break;
    }
  }
  return report;
}

std::vector<CheckReport> check_lj_kernel(const LennardJonesPairParams& params,
                                         std::span<const double> radial_grid,
                                         std::int64_t pairs, std::uint64_t seed) {
  if (!(params.q_exp < params.p_exp))
    throw std::invalid_argument("lj kernel: q must be smaller than p");
  if (!(params.beta() < params.alpha() - 1.0))
    throw std::invalid_argument("lj kernel: requires beta = q+1 < alpha-1 = p");
  if (radial_grid.empty()) throw std::invalid_argument("radial grid must be nonempty");
  for (const double r : radial_grid)
    if (!(r > 0.0)) throw std::invalid_argument("radial grid must be positive");
  if (pairs < 1) throw std::invalid_argument("need at least one pair");

  const double r_lo = *std::min_element(radial_grid.begin(), radial_grid.end());
  const double r_hi = *std::max_element(radial_grid.begin(), radial_grid.end());
  const double log_ratio = std::log(r_hi / r_lo);
  const auto draw_radius = [&](std::uint64_t block, int word) {
    const double u = rng::uniform_open(seed, 11, block, word);
    return r_lo * std::exp(u * log_ratio);
  };

  // Reference constants implied by the kernel's closed form: the one-sided
  // constant is sup K'+, the Lipschitz weight uses l = p + 2 with
  // c = p(p+1)a1 + q(q+1)a2, and the lower bound is equality-shaped with
  // h = (p a1, q a2, eps, eps).
  const double c_monotone = std::max(0.0, params.kernel_derivative(params.kernel_derivative_argmax()));
  const double l_lip = params.p_exp + 2.0;
  const double c_lip = params.p_exp * (params.p_exp + 1.0) * params.a1 +
                       params.q_exp * (params.q_exp + 1.0) * params.a2;
  const double h1 = params.p_exp * params.a1;
  const double h2 = params.q_exp * params.a2;
  const double eps = 1.0e-9;

  WorstMargin worst_mono;
  WorstMargin worst_lip;
  double implied_mono = 0.0;
  double implied_lip = 0.0;
  for (std::int64_t k = 0; k < pairs; ++k) {
    const double x = draw_radius(static_cast<std::uint64_t>(k), 0);
    const double y = draw_radius(static_cast<std::uint64_t>(k), 1);
    if (x == y) continue;
    const double kx = params.kernel(x);
    const double ky = params.kernel(y);
    const double dx = x - y;
    const double xs[1] = {x};
    const double ys[1] = {y};

    const double inner = (kx - ky) * dx;
    const double mono_rhs = c_monotone * dx * dx;
    worst_mono.offer(mono_rhs - inner, tolerance_for(mono_rhs, inner), xs, ys);
    implied_mono = std::max(implied_mono, inner / (dx * dx));

    const double weight = 1.0 + std::pow(x, -l_lip) + std::pow(y, -l_lip);
    const double lip_rhs = c_lip * weight * std::abs(dx);
    const double lip_lhs = std::abs(kx - ky);
    worst_lip.offer(lip_rhs - lip_lhs, tolerance_for(lip_rhs, lip_lhs), xs, ys);
    implied_lip = std::max(implied_lip, lip_lhs / (weight * std::abs(dx)));
  }

  WorstMargin worst_push;
  double implied_h1 = std::numeric_limits<double>::infinity();
  for (const double r : radial_grid) {
    const double lhs = params.kernel(r);
    const double rhs = h1 * std::pow(r, -params.alpha()) - h2 * std::pow(r, -params.beta()) -
                       eps - eps * r;
    const double rs[1] = {r};
    worst_push.offer(lhs - rhs, tolerance_for(lhs, rhs), rs);
    // largest h1 certified at this grid point, keeping the other constants
    const double budget = lhs + h2 * std::pow(r, -params.beta()) + eps + eps * r;
    implied_h1 = std::min(implied_h1, budget * std::pow(r, params.alpha()));
  }

  std::vector<CheckReport> reports(3);
  reports[0].assumption_id = AssumptionId::K_monotone;
  reports[0].worst_margin = worst_mono.margin;
  reports[0].witness = worst_mono.witness;
  reports[0].implied_constant = implied_mono;
  reports[0].passed = worst_mono.passed();

  reports[1].assumption_id = AssumptionId::K_inv_lipschitz;
  reports[1].worst_margin = worst_lip.margin;
  reports[1].witness = worst_lip.witness;
  reports[1].implied_constant = implied_lip;
  reports[1].implied_exponent = l_lip;
  reports[1].passed = worst_lip.passed();

  reports[2].assumption_id = AssumptionId::K_push_away;
  reports[2].worst_margin = worst_push.margin;
  reports[2].witness = worst_push.witness;
  reports[2].implied_constant = implied_h1;
  reports[2].passed = worst_push.passed();
  return reports;
}

}  // namespace tamedsde
