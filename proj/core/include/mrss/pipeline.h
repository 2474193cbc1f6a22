#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "mrss/common_grid.h"
#include "mrss/model.h"
#include "mrss/recover.h"
#include "mrss/sdp.h"
#include "mrss/solver.h"

namespace mrss {

struct EstimatorConfig {
  SolverConfig solver;
  LocalizeOptions localize;
  CommonGridOptions grid;
  SdpForm form = SdpForm::kReduced;
  double collision_tolerance = 1e-6;
  double max_condition = 1e12;
};

struct EstimatorResult {
  CommonGrid common;
  SupportSet support;
  Eigen::VectorXcd merged;
  ConicSolution solution;
  Eigen::VectorXcd dual;           // c_*, aligned with support.indices
  SparsePolynomial certificate;    // Q_*
  std::vector<double> pulsations;  // peaks of |Q_*|, in [0, 2 pi)
  Estimate estimate;
  SeparationReport separation;     // of the recovered frequencies
  double wall_ms = 0.0;

  bool recovered() const { return solution.status == SolverStatus::kOptimal; }
};

/// Frequency in [0, f_*) of a peak of |Q_*(e^{i omega})|. The aligned dual
/// polynomial is evaluated at e^{-i 2 pi xi / f_*}, hence the sign flip.
double pulsation_to_frequency(double omega, const Rational& rate);

/// Common grid, merged observations, dual SDP, certificate peaks and an
/// amplitude refit on the raw samples.
///
/// When the solver does not reach kOptimal the result carries the solution
/// and dual vector but an empty estimate. An all-zero observation vector
/// gives an empty estimate with zero objective. Errors from the individual
/// stages (NoCommonGrid, InconsistentObservations, NoCertificate, ...)
/// propagate.
EstimatorResult run_estimator(std::span<const SamplingGrid> grids, const Observations& obs,
                              const EstimatorConfig& config = {});

}  // namespace mrss
