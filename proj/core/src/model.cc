#include "mrss/model.h"

#include <cmath>
#include <numbers>
#include <string>

#include "mrss/errors.h"

namespace mrss {

void SamplingGrid::validate() const {
  if (rate <= Rational(0)) {
    throw Error(ErrorCode::kInvalidInput, "grid rate must be positive, got " + rate.to_string());
  }
  if (count < 1) {
    throw Error(ErrorCode::kInvalidInput, "grid count must be >= 1");
  }
}

void SpikeSignal::validate() const {
  if (frequencies.size() != amplitudes.size()) {
    throw Error(ErrorCode::kInvalidInput, "frequency and amplitude counts differ");
  }
  for (std::size_t l = 0; l < size(); ++l) {
    if (!std::isfinite(frequencies[l]) || !std::isfinite(amplitudes[l].real()) ||
        !std::isfinite(amplitudes[l].imag())) {
      throw Error(ErrorCode::kInvalidInput, "non-finite spike parameter");
    }
    if (amplitudes[l] == std::complex<double>(0.0)) {
      throw Error(ErrorCode::kInvalidInput, "spike amplitudes must be nonzero");
    }
  }
}

std::complex<double> unit_phasor(long double cycles) {
  long double reduced = cycles - std::floor(cycles);
  const double angle =
      static_cast<double>(2.0L * std::numbers::pi_v<long double> * reduced);
  return {std::cos(angle), std::sin(angle)};
}

Eigen::VectorXcd apply_forward(const SpikeSignal& signal, const SamplingGrid& grid) {
  grid.validate();
  signal.validate();
  // cycles = xi * (k - delay) / rate = xi * (k*dq - dp) * rq / (rp * dq)
  const std::int64_t rp = grid.rate.num(), rq = grid.rate.den();
  const std::int64_t dp = grid.delay.num(), dq = grid.delay.den();
  const long double scale = static_cast<long double>(rq) /
                            (static_cast<long double>(rp) * static_cast<long double>(dq));

  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(grid.count);
  for (std::size_t l = 0; l < signal.size(); ++l) {
    const long double per_tick = static_cast<long double>(signal.frequencies[l]) * scale;
    for (std::int64_t k = 0; k < grid.count; ++k) {
      const WideInt ticks = static_cast<WideInt>(k) * dq - dp;
      out[k] += signal.amplitudes[l] * unit_phasor(per_tick * static_cast<long double>(ticks));
    }
  }
  return out;
}

Observations sample(const SpikeSignal& signal, std::span<const SamplingGrid> grids) {
  if (grids.empty()) throw Error(ErrorCode::kInvalidInput, "no sampling grids");
  Observations obs;
  obs.reserve(grids.size());
  for (const auto& grid : grids) obs.push_back(apply_forward(signal, grid));
  return obs;
}

void validate_observations(const Observations& obs, std::span<const SamplingGrid> grids) {
  if (obs.size() != grids.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(obs.size()) + " observation vectors for " +
                    std::to_string(grids.size()) + " grids");
  }
  for (std::size_t j = 0; j < grids.size(); ++j) {
    if (obs[j].size() != grids[j].count) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "grid " + std::to_string(j) + " expects " + std::to_string(grids[j].count) +
                      " samples, got " + std::to_string(obs[j].size()));
    }
    if (!obs[j].allFinite()) {
      throw Error(ErrorCode::kInvalidInput, "non-finite observation in grid " + std::to_string(j));
    }
  }
}

}  // namespace mrss
