#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "mrss/common_grid.h"
#include "mrss/gram.h"
#include "mrss/model.h"

namespace mrss {

/// Recovered spectrum. Frequencies are strictly increasing in [0, f_*), the
/// band the multi-rate system identifies.
struct Estimate {
  std::vector<double> frequencies;
  std::vector<std::complex<double>> amplitudes;
  /// 1 - max |Q_*| away from the recovered peaks (farther than pi / n_*).
  double certificate_margin = 0.0;
  /// Relative l2 misfit of the refitted model on all raw samples.
  double residual = 0.0;
};

/// Q_*(z) = sum_p c[p] z^{support[p]}.
SparsePolynomial dual_polynomial(const Eigen::VectorXcd& c, const SupportSet& support);

struct LocalizeOptions {
  int oversampling = 16;          // grid points per unit of order
  double threshold = 1e-4;        // peaks need |Q| >= 1 - threshold
  double polish_tolerance = 1e-12;
  int merge_divisor = 64;         // merge radius 2 pi / (merge_divisor * order)
  double degenerate_fraction = 0.5;
};

/// Pulsations omega in [0, 2 pi) where |Q(e^{i omega})| reaches one: local
/// maxima of |Q|^2 on a uniform grid of oversampling * order points,
/// polished by safeguarded Newton steps on d|Q|^2/d omega, then merged.
///
/// Throws Error(kNoCertificate) if |Q| stays below 1 - threshold and
/// Error(kDegenerateCertificate) if more than degenerate_fraction of the grid
/// sits at the threshold (e.g. a unimodular monomial).
std::vector<double> localize(const SparsePolynomial& q, std::int64_t order,
                             const LocalizeOptions& options = {});

/// 1 - max |Q| over grid points farther than pi / order from every peak.
double certificate_margin(const SparsePolynomial& q, std::int64_t order,
                          std::span<const double> peaks, const LocalizeOptions& options = {});

struct AmplitudeFit {
  std::vector<std::complex<double>> amplitudes;
  double residual = 0.0;
  double condition_number = 1.0;
};

/// Least-squares amplitudes for known frequencies over every raw sample.
/// Throws Error(kIllConditioned) when the design matrix is rank deficient or
/// its condition number exceeds max_condition.
AmplitudeFit fit_amplitudes(std::span<const double> frequencies,
                            std::span<const SamplingGrid> grids, const Observations& obs,
                            double max_condition = 1e12);

/// Wrap-around minimal separation of nu = xi / f_* against 4 / (n_* - 1).
/// Advisory only.
struct SeparationReport {
  bool satisfied = true;
  double min_separation = 0.0;  // +inf for fewer than two spikes
  double required = 0.0;
  double margin = 0.0;           // min_separation - required
  double relative_margin = 0.0;  // min_separation / required - 1
};

SeparationReport check_separation(std::span<const double> frequencies, const Rational& rate,
                                  std::int64_t order);

}  // namespace mrss
