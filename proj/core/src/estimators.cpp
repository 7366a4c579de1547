#include "tamedsde/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "tamedsde/brownian.hpp"
#include "tamedsde/parallel.hpp"

namespace tamedsde {

namespace {

struct LevelPlan {
  std::vector<std::int64_t> levels;
  std::int64_t n_ref = 0;
};

LevelPlan make_plan(std::span<const std::int64_t> levels, const MonteCarloConfig& mc) {
  if (levels.empty()) throw std::invalid_argument("at least one level is required");
  LevelPlan plan;
  plan.levels.assign(levels.begin(), levels.end());
  for (std::size_t i = 0; i < plan.levels.size(); ++i) {
    if (plan.levels[i] < 1) throw std::invalid_argument("levels must be positive");
    if (i > 0 && plan.levels[i] <= plan.levels[i - 1])
      throw std::invalid_argument("levels must be strictly ascending");
  }
  if (mc.n_ref_multiplier < 1)
    throw std::invalid_argument("n_ref_multiplier must be at least 1");
  if (mc.samples < 1) throw std::invalid_argument("samples must be positive");
  plan.n_ref = mc.n_ref_multiplier * plan.levels.back();
  for (const std::int64_t n : plan.levels)
    if (plan.n_ref % n != 0)
      throw std::invalid_argument("every level must divide the reference level");
  return plan;
}

SchemeConfig with_steps(const SchemeConfig& base, std::int64_t steps, bool taming) {
  SchemeConfig cfg = base;
  cfg.steps = steps;
  cfg.taming = taming;
  return cfg;
}

double sup_gap_on_level_grid(const TrajectoryRecord& level, const TrajectoryRecord& ref) {
  const std::int64_t stride = ref.steps / level.steps;
  const int d = level.dimension;
  double sup = 0.0;
  for (std::int64_t j = 0; j <= level.steps; ++j) {
    const std::span<const double> a = level.at(j);
    const std::span<const double> b = ref.at(j * stride);
    double s = 0.0;
    for (int c = 0; c < d; ++c) {
      const double diff = a[c] - b[c];
      s += diff * diff;
    }
    sup = std::max(sup, std::sqrt(s));
  }
  return sup;
}

// mean / sample-std-of-the-mean over kept entries, in ascending path order.
struct MeanStd {
  double mean = 0.0;
  double std_error = 0.0;
};

MeanStd reduce_kept(const std::vector<double>& values, const std::vector<char>& discarded) {
  double sum = 0.0;
  std::int64_t kept = 0;
  for (std::size_t m = 0; m < values.size(); ++m) {
    if (discarded[m]) continue;
    sum += values[m];
    ++kept;
  }
  MeanStd out;
  if (kept == 0) return out;
  out.mean = sum / static_cast<double>(kept);
  if (kept > 1) {
    double ss = 0.0;
    for (std::size_t m = 0; m < values.size(); ++m) {
      if (discarded[m]) continue;
      const double dev = values[m] - out.mean;
      ss += dev * dev;
    }
    const double sample_var = ss / static_cast<double>(kept - 1);
    out.std_error = std::sqrt(sample_var / static_cast<double>(kept));
  }
  return out;
}

}  // namespace

std::vector<ErrorEstimate> strong_error_curve(const SingularProblem& problem,
                                              const SchemeConfig& base_config,
                                              std::span<const std::int64_t> levels,
                                              double p_order, const MonteCarloConfig& mc) {
  if (!(p_order > 0.0)) throw std::invalid_argument("p_order must be positive");
  const LevelPlan plan = make_plan(levels, mc);
  const std::size_t n_levels = plan.levels.size();
  const auto M = static_cast<std::size_t>(mc.samples);

  std::vector<double> gap(M * n_levels, 0.0);
  std::vector<char> discard(M, 0);

  parallel_for_index(mc.samples, mc.threads, [&](std::int64_t m) {
    const BrownianFabric fabric =
        sample_fabric(mc.master_seed, static_cast<std::uint64_t>(m), base_config.horizon,
                      plan.n_ref, problem.dimension());
    // The reference stands in for the unavailable true solution: always tamed.
    const SchemeConfig ref_cfg = with_steps(base_config, plan.n_ref, true);
    const TrajectoryRecord ref = simulate(problem, ref_cfg, fabric);
    verify_taming_identity(problem, ref_cfg, ref);
    if (ref.anomaly.non_finite)
      throw std::runtime_error("non-finite tamed reference path; this indicates a bug");

    for (std::size_t li = 0; li < n_levels; ++li) {
      const SchemeConfig cfg = with_steps(base_config, plan.levels[li], base_config.taming);
      const TrajectoryRecord rec = simulate(problem, cfg, fabric);
      verify_taming_identity(problem, cfg, rec);
      if (rec.anomaly.non_finite) {
        if (cfg.taming)
          throw std::runtime_error("non-finite tamed path; this indicates a bug");
        discard[static_cast<std::size_t>(m)] = 1;  // discarded at every level
        return;
      }
      gap[static_cast<std::size_t>(m) * n_levels + li] = sup_gap_on_level_grid(rec, ref);
    }
  });

  std::int64_t discarded = 0;
  for (const char flag : discard) discarded += flag;

  std::vector<ErrorEstimate> out(n_levels);
  std::vector<double> powers(M, 0.0);
  for (std::size_t li = 0; li < n_levels; ++li) {
    for (std::size_t m = 0; m < M; ++m)
      powers[m] = std::pow(gap[m * n_levels + li], p_order);
    const MeanStd stats = reduce_kept(powers, discard);
    ErrorEstimate& e = out[li];
    e.steps = plan.levels[li];
    e.p_order = p_order;
    e.mean_sup_error_p = stats.mean;
    e.root_error = stats.mean > 0.0 ? std::pow(stats.mean, 1.0 / p_order) : 0.0;
    e.std_error = stats.std_error;
    e.samples = mc.samples;
    e.discarded = discarded;
  }
  return out;
}

RateFit fit_rate(std::span<const ErrorEstimate> estimates) {
  std::vector<double> ln_n;
  std::vector<double> ln_e;
  RateFit fit;
  for (const ErrorEstimate& e : estimates) {
    if (!(e.root_error > 0.0)) continue;  // exact-zero levels carry no slope information
    ln_n.push_back(std::log(static_cast<double>(e.steps)));
    ln_e.push_back(std::log(e.root_error));
    fit.levels_used.push_back(e.steps);
  }
  const std::size_t k = ln_n.size();
  if (k < 3) throw std::invalid_argument("rate fit needs at least 3 levels with positive error");

  const double mean_x = std::accumulate(ln_n.begin(), ln_n.end(), 0.0) / static_cast<double>(k);
  const double mean_y = std::accumulate(ln_e.begin(), ln_e.end(), 0.0) / static_cast<double>(k);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (ln_n[i] - mean_x) * (ln_n[i] - mean_x);
    sxy += (ln_n[i] - mean_x) * (ln_e[i] - mean_y);
  }
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double pred = fit.intercept + fit.slope * ln_n[i];
    ss_res += (ln_e[i] - pred) * (ln_e[i] - pred);
    ss_tot += (ln_e[i] - mean_y) * (ln_e[i] - mean_y);
  }
  fit.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
  return fit;
}

std::vector<MomentEstimate> inverse_moment_curve(const SingularProblem& problem,
                                                 const SchemeConfig& base_config,
                                                 std::span<const std::int64_t> levels,
                                                 double p_order,
                                                 const MonteCarloConfig& mc) {
  if (!problem.has_singularity())
    throw std::invalid_argument("inverse moments are defined for singular problems only");
  if (!(p_order > 0.0)) throw std::invalid_argument("p_order must be positive");
  const LevelPlan plan = make_plan(levels, mc);
  const std::size_t n_levels = plan.levels.size();
  const auto M = static_cast<std::size_t>(mc.samples);

  std::vector<double> stat(M * n_levels, 0.0);
  parallel_for_index(mc.samples, mc.threads, [&](std::int64_t m) {
    const BrownianFabric fabric =
        sample_fabric(mc.master_seed, static_cast<std::uint64_t>(m), base_config.horizon,
                      plan.n_ref, problem.dimension());
    for (std::size_t li = 0; li < n_levels; ++li) {
      const SchemeConfig cfg = with_steps(base_config, plan.levels[li], base_config.taming);
      const TrajectoryRecord rec = simulate(problem, cfg, fabric);
      verify_taming_identity(problem, cfg, rec);
      if (rec.anomaly.non_finite && cfg.taming)
        throw std::runtime_error("non-finite tamed path; this indicates a bug");
      stat[static_cast<std::size_t>(m) * n_levels + li] = std::pow(rec.sup_inv_rho, p_order);
    }
  });

  const std::vector<char> no_discard(M, 0);
  std::vector<MomentEstimate> out(n_levels);
  std::vector<double> column(M, 0.0);
  for (std::size_t li = 0; li < n_levels; ++li) {
    for (std::size_t m = 0; m < M; ++m) column[m] = stat[m * n_levels + li];
    const MeanStd stats = reduce_kept(column, no_discard);
    out[li] = {plan.levels[li], p_order, stats.mean, stats.std_error, mc.samples};
  }
  return out;
}

std::vector<StoppingEstimate> stopping_probability(const SingularProblem& problem,
                                                   const SchemeConfig& base_config,
                                                   std::span<const std::int64_t> levels,
                                                   const MonteCarloConfig& mc) {
  if (!problem.has_singularity())
    throw std::invalid_argument("stopping statistics are defined for singular problems only");
  const LevelPlan plan = make_plan(levels, mc);
  const std::size_t n_levels = plan.levels.size();
  const auto M = static_cast<std::size_t>(mc.samples);

  std::vector<char> hit(M * n_levels, 0);
  parallel_for_index(mc.samples, mc.threads, [&](std::int64_t m) {
    const BrownianFabric fabric =
        sample_fabric(mc.master_seed, static_cast<std::uint64_t>(m), base_config.horizon,
                      plan.n_ref, problem.dimension());
    for (std::size_t li = 0; li < n_levels; ++li) {
      const SchemeConfig cfg = with_steps(base_config, plan.levels[li], base_config.taming);
      const TrajectoryRecord rec = simulate(problem, cfg, fabric);
      verify_taming_identity(problem, cfg, rec);
      if (rec.anomaly.non_finite && cfg.taming)
        throw std::runtime_error("non-finite tamed path; this indicates a bug");
      hit[static_cast<std::size_t>(m) * n_levels + li] = rec.tau_hit_index.has_value();
    }
  });

  std::vector<StoppingEstimate> out(n_levels);
  for (std::size_t li = 0; li < n_levels; ++li) {
    std::int64_t count = 0;
    for (std::size_t m = 0; m < M; ++m) count += hit[m * n_levels + li];
    const double fraction = static_cast<double>(count) / static_cast<double>(mc.samples);
    const double se =
        std::sqrt(fraction * (1.0 - fraction) / static_cast<double>(mc.samples));
    out[li] = {plan.levels[li], fraction, se, mc.samples};
  }
  return out;
}

DivergenceReport divergence_probe(const SingularProblem& problem,
                                  const SchemeConfig& config_untamed,
                                  const MonteCarloConfig& mc) {
  if (config_untamed.taming)
    throw std::invalid_argument("divergence_probe requires an untamed configuration");
  if (mc.samples < 1) throw std::invalid_argument("samples must be positive");
  const auto M = static_cast<std::size_t>(mc.samples);

  std::vector<char> left(M, 0);
  std::vector<char> non_finite(M, 0);
  std::vector<double> norms(M, 0.0);
  parallel_for_index(mc.samples, mc.threads, [&](std::int64_t m) {
    const BrownianFabric fabric =
        sample_fabric(mc.master_seed, static_cast<std::uint64_t>(m), config_untamed.horizon,
                      config_untamed.steps, problem.dimension());
    const TrajectoryRecord rec = simulate(problem, config_untamed, fabric);
    left[static_cast<std::size_t>(m)] = rec.anomaly.left_domain;
    non_finite[static_cast<std::size_t>(m)] = rec.anomaly.non_finite;
    norms[static_cast<std::size_t>(m)] = rec.sup_norm;
  });

  DivergenceReport report;
  report.samples = mc.samples;
  std::int64_t n_left = 0;
  std::int64_t n_nf = 0;
  for (std::size_t m = 0; m < M; ++m) {
    n_left += left[m];
    n_nf += non_finite[m];
    report.max_observed_norm = std::max(report.max_observed_norm, norms[m]);
  }
  report.fraction_left_domain = static_cast<double>(n_left) / static_cast<double>(mc.samples);
  report.fraction_non_finite = static_cast<double>(n_nf) / static_cast<double>(mc.samples);
  return report;
}

double spearman_rank_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("spearman needs two equal-length series of size >= 2");
  const std::size_t n = x.size();
  const auto ranks = [n](std::span<const double> v) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> rank(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
      const double avg = 0.5 * static_cast<double>(i + j) + 1.0;  // average rank on ties
      for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
      i = j + 1;
    }
    return rank;
  };
  const std::vector<double> rx = ranks(x);
  const std::vector<double> ry = ranks(y);
  const double mean = (static_cast<double>(n) + 1.0) / 2.0;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace tamedsde
