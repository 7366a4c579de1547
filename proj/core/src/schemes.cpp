#include "tamedsde/schemes.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tamedsde {

namespace {

void validate_config(const SingularProblem& problem, const SchemeConfig& config) {
  if (!(config.horizon > 0.0)) throw std::invalid_argument("scheme horizon must be positive");
  if (config.steps < 1) throw std::invalid_argument("scheme needs at least one step");
  if (!(config.delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (!(config.w_exp >= 0.0)) throw std::invalid_argument("w must be >= 0");
  if (config.taming && problem.has_singularity()) {
    const double l = problem.constants().l;
    if (l > 0.0 && config.w_exp > 1.0 / (3.0 * l) + 1.0e-12)
      throw std::invalid_argument("taming exponent w must not exceed 1/(3l)");
  }
}

double euclid_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

bool all_finite(std::span<const double> x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace

double taming_threshold(const SchemeConfig& config) {
  return config.delta * std::pow(static_cast<double>(config.steps), -config.w_exp);
}

std::vector<double> truncated_drift(const SingularProblem& problem,
                                    const SchemeConfig& config, std::span<const double> x,
                                    bool* left_domain) {
  std::vector<double> out(static_cast<std::size_t>(problem.dimension()), 0.0);
  const bool in_domain = problem.domain_member(x);
  if (config.taming) {
    if (in_domain && problem.rho(x) >= taming_threshold(config)) problem.drift(x, out);
    return out;
  }
  if (!in_domain) {
    if (left_domain != nullptr) *left_domain = true;
    return out;
  }
  problem.drift(x, out);
  return out;
}

TrajectoryRecord simulate(const SingularProblem& problem, const SchemeConfig& config,
                          const BrownianFabric& fabric) {
  validate_config(problem, config);
  if (fabric.dimension() != problem.dimension())
    throw std::invalid_argument("fabric dimension does not match the problem");
  if (fabric.horizon() != config.horizon)
    throw std::invalid_argument("fabric horizon does not match the scheme");
  if (fabric.fine_steps() % config.steps != 0)
    throw std::invalid_argument("scheme steps must divide the fabric's fine steps");

  const int d = problem.dimension();
  const std::int64_t n = config.steps;
  const std::int64_t stride = fabric.fine_steps() / n;
  const double h = config.horizon / static_cast<double>(n);
  const double threshold = taming_threshold(config);
  const std::span<const double> x0 = problem.initial_point();
  const std::span<const double> path = fabric.path();

  TrajectoryRecord rec;
  rec.dimension = d;
  rec.steps = n;
  rec.grid_values.resize(static_cast<std::size_t>((n + 1) * d));
  for (int c = 0; c < d; ++c) rec.grid_values[static_cast<std::size_t>(c)] = x0[c];

  std::vector<double> accum(static_cast<std::size_t>(d), 0.0);
  std::vector<double> bn(static_cast<std::size_t>(d), 0.0);

  for (std::int64_t j = 0; j <= n; ++j) {
    const std::span<const double> xj = rec.at(j);
    const bool in_domain = problem.domain_member(xj);
    const double rho = in_domain ? problem.rho(xj) : 0.0;
    if (!in_domain) rec.anomaly.left_domain = true;
    if (!rec.tau_hit_index && (!in_domain || rho <= threshold)) rec.tau_hit_index = j;
    if (j == n) break;

    bool drift_on;
    if (config.taming) {
      drift_on = in_domain && rho >= threshold;
    } else {
      drift_on = in_domain;  // the plain scheme is undefined outside D
    }
    if (drift_on) {
      problem.drift(xj, bn);
      for (int c = 0; c < d; ++c) accum[static_cast<std::size_t>(c)] += bn[static_cast<std::size_t>(c)] * h;
    }

    double* next = rec.grid_values.data() + static_cast<std::size_t>((j + 1) * d);
    const std::size_t w_base = static_cast<std::size_t>((j + 1) * stride * d);
    for (int c = 0; c < d; ++c)
      next[c] = (x0[c] + accum[static_cast<std::size_t>(c)]) + path[w_base + static_cast<std::size_t>(c)];

    if (!all_finite({next, static_cast<std::size_t>(d)})) {
      rec.anomaly.non_finite = true;
      for (std::int64_t k = j + 1; k <= n; ++k)
        for (int c = 0; c < d; ++c)
          rec.grid_values[static_cast<std::size_t>(k * d + c)] = xj[c];
      break;
    }
  }

  rec.sup_norm = 0.0;
  for (std::int64_t j = 0; j <= n; ++j)
    rec.sup_norm = std::max(rec.sup_norm, euclid_norm(rec.at(j)));

  const std::int64_t last = rec.tau_hit_index.value_or(n);
  rec.sup_inv_rho = 0.0;
  for (std::int64_t j = 0; j <= last; ++j) {
    const std::span<const double> xj = rec.at(j);
    if (!problem.domain_member(xj)) {
      rec.sup_inv_rho = std::numeric_limits<double>::infinity();
      break;
    }
    rec.sup_inv_rho = std::max(rec.sup_inv_rho, 1.0 / problem.rho(xj));
  }
  return rec;
}

void verify_taming_identity(const SingularProblem& problem, const SchemeConfig& config,
                            const TrajectoryRecord& record) {
  if (!config.taming) return;
  const double threshold = taming_threshold(config);
  const std::int64_t limit = record.tau_hit_index.value_or(record.steps);
  std::vector<double> raw(static_cast<std::size_t>(record.dimension));
  for (std::int64_t j = 0; j < limit; ++j) {
    const std::span<const double> xj = record.at(j);
    if (!problem.domain_member(xj) || !(problem.rho(xj) > threshold))
      throw std::runtime_error("pre-tau state violates the threshold lower bound");
    problem.drift(xj, raw);
    const std::vector<double> applied = truncated_drift(problem, config, xj);
    for (int c = 0; c < record.dimension; ++c)
      if (applied[static_cast<std::size_t>(c)] != raw[static_cast<std::size_t>(c)])
        throw std::runtime_error("truncated drift differs from raw drift before tau");
  }
}

}  // namespace tamedsde
