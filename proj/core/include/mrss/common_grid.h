#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "mrss/model.h"
#include "mrss/rational.h"

namespace mrss {

/// A uniform grid (rate, delay, count) whose instants contain every instant
/// of a set of sampling grids, with the per-grid alignment integers:
///   rate  == multipliers[j] * grids[j].rate
///   delay == multipliers[j] * grids[j].delay - offsets[j]
/// so sample k of grid j lands on common index multipliers[j]*k - offsets[j].
struct CommonGrid {
  Rational rate;
  Rational delay;
  std::int64_t count = 0;
  std::vector<std::int64_t> multipliers;
  std::vector<std::int64_t> offsets;
};

struct CommonGridOptions {
  /// Upper bound on the rate multiplier over the least common rate.
  std::int64_t max_multiplier = 1'000'000;
};

/// Minimal common supporting grid of a multi-rate system.
///
/// The common rate is k * F0 where F0 is the least rational that is an
/// integer multiple of every grid rate, and k is the least positive integer
/// making all scaled delays l_j * delay_j congruent modulo one. The common
/// delay is the largest scaled delay, hence every offset is <= 0, and the
/// count is the smallest one covering the last instant of every grid.
///
/// Throws Error(kInvalidInput) for an empty set or a non-positive rate and
/// Error(kNoCommonGrid) when k exceeds options.max_multiplier.
CommonGrid find_common_grid(std::span<const SamplingGrid> grids,
                            const CommonGridOptions& options = {});

struct SampleRef {
  int grid = 0;
  std::int64_t sample = 0;

  friend bool operator==(const SampleRef&, const SampleRef&) = default;
};

/// Monomial support of the aligned dual polynomial: the sorted distinct
/// common-grid indices hit by at least one sample, and for each of them the
/// (grid, sample) pairs landing there.
struct SupportSet {
  std::vector<std::int64_t> indices;
  std::vector<std::vector<SampleRef>> sources;

  std::size_t size() const { return indices.size(); }
  /// Position of a common-grid index within `indices`, or -1.
  std::ptrdiff_t position_of(std::int64_t index) const;
};

SupportSet support_set(std::span<const SamplingGrid> grids, const CommonGrid& grid);

/// One value per support index. Colliding samples observe the same instant;
/// they must agree to within tolerance * max(1, |value|), otherwise
/// Error(kInconsistentObservations) is thrown.
Eigen::VectorXcd merge_collisions(const Observations& obs, const SupportSet& support,
                                  double tolerance = 1e-6);

}  // namespace mrss
