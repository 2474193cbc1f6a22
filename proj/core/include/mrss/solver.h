#pragma once

#include <Eigen/Core>

#include "mrss/sdp.h"

namespace mrss {

enum class Scaling { kNone, kRuiz };

struct SolverConfig {
  double eps_primal = 1e-8;
  double eps_dual = 1e-8;
  double eps_gap = 1e-8;
  int max_iters = 50000;
  double over_relaxation = 1.5;  // in (0, 2)
  Scaling scaling = Scaling::kRuiz;
  bool record_history = false;

  /// Throws Error(kInvalidInput) on non-positive tolerances, max_iters < 1 or
  /// over_relaxation outside (0, 2).
  void validate() const;
};

/// Solves a ConicProblem with an ADMM operator splitting: one projection on
/// the affine constraints (a sparse factorization reused between penalty
/// updates) and one projection on the PSD cones per iteration, with
/// over-relaxation and Ruiz equilibration. Deterministic for fixed inputs.
///
/// Returns kOptimal when all normalized residuals are below tolerance,
/// kInfeasible when a primal infeasibility certificate is detected, and
/// otherwise kMaxIterations with the best iterate seen. Throws
/// Error(kNumericalBreakdown) on a non-finite iterate.
ConicSolution solve(const ConicProblem& problem, const SolverConfig& config = {});

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clipped).
/// Symmetrizes the input first. Throws Error(kNumericalBreakdown) if the
/// eigensolver fails or the input is not finite.
Eigen::MatrixXd psd_project(const Eigen::MatrixXd& m);

/// Independent re-check of a solution: smallest eigenvalue over the PSD
/// blocks and the largest equality violation.
struct SolutionCheck {
  double min_eigenvalue = 0.0;
  double equality_residual = 0.0;
};
SolutionCheck verify_solution(const ConicProblem& problem, const Eigen::VectorXd& x);

}  // namespace mrss
