#include "tamedsde/brownian.hpp"

#include <cmath>
#include <stdexcept>

#include "tamedsde/counter_rng.hpp"

namespace tamedsde {

namespace {

void require_divisor(std::int64_t coarse_steps, std::int64_t fine_steps) {
  if (coarse_steps < 1 || fine_steps % coarse_steps != 0)
    throw std::invalid_argument("coarse_steps must divide fine_steps");
}

}  // namespace

BrownianFabric sample_fabric(std::uint64_t master_seed, std::uint64_t path_index,
                             double horizon, std::int64_t fine_steps, int dimension) {
  if (!(horizon > 0.0)) throw std::invalid_argument("fabric horizon must be positive");
  if (fine_steps < 1) throw std::invalid_argument("fabric needs at least one fine step");
  if (dimension < 1) throw std::invalid_argument("fabric dimension must be positive");

  BrownianFabric fabric;
  fabric.horizon_ = horizon;
  fabric.fine_steps_ = fine_steps;
  fabric.dimension_ = dimension;
  fabric.seed_ = {master_seed, path_index};

  const double sqrt_h = std::sqrt(horizon / static_cast<double>(fine_steps));
  const std::int64_t total = fine_steps * dimension;
  fabric.path_.assign(static_cast<std::size_t>(total + dimension), 0.0);

  // Ascending accumulation of the generated increments; the summation order
  // is part of the reproducibility contract.
  std::array<double, 2> pair{};
  for (std::int64_t i = 0; i < total; ++i) {
    if ((i & 1) == 0)
      pair = rng::normal_pair(master_seed, path_index, static_cast<std::uint64_t>(i >> 1));
    const double increment = sqrt_h * pair[static_cast<std::size_t>(i & 1)];
    fabric.path_[static_cast<std::size_t>(i + dimension)] =
        fabric.path_[static_cast<std::size_t>(i)] + increment;
  }
  return fabric;
}

std::vector<double> BrownianFabric::increments() const {
  return coarse_increments(fine_steps_);
}

std::vector<double> BrownianFabric::coarse_increments(std::int64_t coarse_steps) const {
  require_divisor(coarse_steps, fine_steps_);
  const std::int64_t stride = fine_steps_ / coarse_steps;
  std::vector<double> out(static_cast<std::size_t>(coarse_steps * dimension_));
  for (std::int64_t j = 0; j < coarse_steps; ++j) {
    for (int c = 0; c < dimension_; ++c) {
      out[static_cast<std::size_t>(j * dimension_ + c)] =
          path_value((j + 1) * stride, c) - path_value(j * stride, c);
    }
  }
  return out;
}

BrownianFabric BrownianFabric::coarsened(std::int64_t coarse_steps) const {
  require_divisor(coarse_steps, fine_steps_);
  const std::int64_t stride = fine_steps_ / coarse_steps;
  BrownianFabric out;
  out.horizon_ = horizon_;
  out.fine_steps_ = coarse_steps;
  out.dimension_ = dimension_;
  out.seed_ = seed_;
  out.path_.resize(static_cast<std::size_t>((coarse_steps + 1) * dimension_));
  for (std::int64_t j = 0; j <= coarse_steps; ++j)
    for (int c = 0; c < dimension_; ++c)
      out.path_[static_cast<std::size_t>(j * dimension_ + c)] = path_value(j * stride, c);
  return out;
}

BrownianFabric BrownianFabric::from_increments(double horizon, int dimension,
                                               std::span<const double> increments) {
  if (!(horizon > 0.0)) throw std::invalid_argument("fabric horizon must be positive");
  if (dimension < 1) throw std::invalid_argument("fabric dimension must be positive");
  if (increments.empty() || increments.size() % static_cast<std::size_t>(dimension) != 0)
    throw std::invalid_argument("increment count must be a positive multiple of dimension");
  BrownianFabric fabric;
  fabric.horizon_ = horizon;
  fabric.dimension_ = dimension;
  fabric.fine_steps_ = static_cast<std::int64_t>(increments.size()) / dimension;
  fabric.path_.assign(increments.size() + static_cast<std::size_t>(dimension), 0.0);
  for (std::size_t i = 0; i < increments.size(); ++i)
    fabric.path_[i + static_cast<std::size_t>(dimension)] = fabric.path_[i] + increments[i];
  return fabric;
}

}  // namespace tamedsde
