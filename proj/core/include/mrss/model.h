#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "mrss/rational.h"

namespace mrss {

/// One uniform sampler: sample k is taken at time (k - delay) / rate.
struct SamplingGrid {
  Rational rate;   // Hz, > 0
  Rational delay;  // in sample units
  std::int64_t count = 1;

  /// Throws Error(kInvalidInput) unless rate > 0 and count >= 1.
  void validate() const;

  friend bool operator==(const SamplingGrid&, const SamplingGrid&) = default;
};

/// Finite sum of complex sinusoids, x(t) = sum_l a_l exp(i 2 pi xi_l t).
/// An empty signal is the zero measure.
struct SpikeSignal {
  std::vector<double> frequencies;                 // Hz
  std::vector<std::complex<double>> amplitudes;

  std::size_t size() const { return frequencies.size(); }
  /// Throws Error(kInvalidInput) on length mismatch, non-finite values or
  /// zero amplitudes.
  void validate() const;
};

/// Per-grid sample vectors, observations[j] has grids[j].count entries.
using Observations = std::vector<Eigen::VectorXcd>;

/// exp(i 2 pi cycles), reducing the argument modulo one cycle first.
std::complex<double> unit_phasor(long double cycles);

/// Samples of the signal taken by a single grid.
Eigen::VectorXcd apply_forward(const SpikeSignal& signal, const SamplingGrid& grid);

/// Samples of the signal taken by every grid of a multi-rate system.
Observations sample(const SpikeSignal& signal, std::span<const SamplingGrid> grids);

/// Throws Error(kDimensionMismatch) if the vector counts or lengths disagree
/// with the grids, Error(kInvalidInput) on non-finite entries.
void validate_observations(const Observations& obs, std::span<const SamplingGrid> grids);

}  // namespace mrss
