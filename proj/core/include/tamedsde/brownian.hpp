#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace tamedsde {

struct SeedMaterial {
  std::uint64_t master_seed = 0;
  std::uint64_t path_index = 0;
};

// One Brownian path sampled at a fine resolution, consumed by every scheme
// level of the same Monte Carlo path. The canonical data is the running path
// value W(t_k) at the fine grid times (prefix sums of the generated
// increments, accumulated in ascending k). Storing path values rather than
// increments makes subsampling exact: coarsening to any divisor level reads
// the same doubles, so coupled schemes agree bit-for-bit at shared times.
//
// Generation is a counter-based stream (Philox4x32-10, Box-Muller pairs)
// keyed by (master_seed, path_index): fabrics for distinct paths are
// independent and can be built in any order on any thread. The normal with
// flat index i = step*dimension + coord is word i%2 of block i/2. This
// mapping is fixed; changing it invalidates recorded seeds.
class BrownianFabric {
 public:
  double horizon() const { return horizon_; }
  std::int64_t fine_steps() const { return fine_steps_; }
  int dimension() const { return dimension_; }
  const SeedMaterial& seed_material() const { return seed_; }

  // W(t_k), row-major over (fine_steps+1) x dimension; first row is zero.
  std::span<const double> path() const { return path_; }
  double path_value(std::int64_t fine_index, int coord) const {
    return path_[static_cast<std::size_t>(fine_index) * dimension_ + coord];
  }

  // Increment view: fine increment k = W(t_{k+1}) - W(t_k).
  std::vector<double> increments() const;

  // Coarse increment j aggregates fine increments [j*r, (j+1)*r), r =
  // fine_steps/coarse_steps. Throws unless coarse_steps divides fine_steps.
  std::vector<double> coarse_increments(std::int64_t coarse_steps) const;

  // The same path reinterpreted at a coarser resolution (subsampled values).
  BrownianFabric coarsened(std::int64_t coarse_steps) const;

  // Test/tool helper: build a fabric from explicit increments.
  static BrownianFabric from_increments(double horizon, int dimension,
                                        std::span<const double> increments);

  friend BrownianFabric sample_fabric(std::uint64_t, std::uint64_t, double, std::int64_t,
                                      int);

 private:
  BrownianFabric() = default;

  double horizon_ = 1.0;
  std::int64_t fine_steps_ = 0;
  int dimension_ = 1;
  SeedMaterial seed_;
  std::vector<double> path_;
};

// Samples the fine increments N(0, (horizon/fine_steps) I) for path
// `path_index` of the stream keyed by `master_seed`.
BrownianFabric sample_fabric(std::uint64_t master_seed, std::uint64_t path_index,
                             double horizon, std::int64_t fine_steps, int dimension);

}  // namespace tamedsde
