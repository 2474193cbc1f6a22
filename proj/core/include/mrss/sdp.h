#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "mrss/common_grid.h"
#include "mrss/gram.h"

namespace mrss {

struct AffineTerm {
  int variable = 0;
  double coefficient = 0.0;

  friend bool operator==(const AffineTerm&, const AffineTerm&) = default;
};

/// Lower-triangle entry (row >= col) of a symmetric matrix-valued affine map:
/// constant + sum(coefficient * x[variable]). Entries not listed are zero.
struct PsdEntry {
  int row = 0;
  int col = 0;
  double constant = 0.0;
  std::vector<AffineTerm> terms;

  friend bool operator==(const PsdEntry&, const PsdEntry&) = default;
};

/// Constraint M(x) >= 0 for a real symmetric affine map. When
/// `hermitian_embedding` is set, M(x) is the real form [[Re, -Im], [Im, Re]]
/// of a complex Hermitian matrix of half the dimension.
struct PsdBlock {
  int dimension = 0;
  std::vector<PsdEntry> entries;
  bool hermitian_embedding = false;

  friend bool operator==(const PsdBlock&, const PsdBlock&) = default;
};

struct LinearEquality {
  std::vector<AffineTerm> terms;
  double rhs = 0.0;

  friend bool operator==(const LinearEquality&, const LinearEquality&) = default;
};

struct VariableSpan {
  std::string name;
  int offset = 0;
  int size = 0;

  friend bool operator==(const VariableSpan&, const VariableSpan&) = default;
};

/// Real conic program: maximize objective . x subject to linear equalities
/// and PSD constraints on affine symmetric matrices.
struct ConicProblem {
  int num_variables = 0;
  Eigen::VectorXd objective;
  std::vector<PsdBlock> psd_blocks;
  std::vector<LinearEquality> equalities;
  std::vector<VariableSpan> layout;

  /// Throws Error(kInvalidInput) on out-of-range variables, upper-triangle
  /// entries, or a layout that does not tile [0, num_variables).
  void validate() const;

  const VariableSpan& span(std::string_view name) const;
  double objective_value(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd block_value(std::size_t block, const Eigen::VectorXd& x) const;
  Eigen::VectorXd equality_residual(const Eigen::VectorXd& x) const;

  friend bool operator==(const ConicProblem& a, const ConicProblem& b);
};

enum class SolverStatus { kOptimal, kInfeasible, kMaxIterations };

std::string_view to_string(SolverStatus status);

struct ResidualSample {
  int iteration = 0;
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
};

/// Residuals are normalized: primal by 1 + max(|Ax|, |s|, |b|), dual by
/// 1 + max(|c|, |A^T y|), gap by 1 + |primal objective| + |dual objective|
/// (all infinity norms), so Optimal means each is below its tolerance.
struct ConicSolution {
  Eigen::VectorXd variables;
  double objective_value = 0.0;
  SolverStatus status = SolverStatus::kMaxIterations;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  int iterations = 0;
  std::vector<ResidualSample> history;  // filled when requested
};

enum class SdpForm { kReduced, kFull };

/// Dual program on the compact Gram matrix S (|support| x |support|):
///   maximize Re<y, c>  s.t.  [[S, c], [c^H, 1]] >= 0,  T*(C S C^H) = e_1,
/// with one complex equality per difference realized by the support.
/// Variables: c_re, c_im (N each), gram_re (packed lower triangle of Re S)
/// and gram_im (strict lower triangle of Im S).
ConicProblem build_reduced(const Eigen::VectorXcd& y_merged, const SupportSet& support,
                           std::int64_t order);

/// Same program on the full n_* x n_* Gram matrix H with the dual vector
/// placed by the selection C:  [[H, C c], [(C c)^H, 1]] >= 0, T*(H) = e_1.
ConicProblem build_full(const Eigen::VectorXcd& y_merged, const SupportSet& support,
                        std::int64_t order);

ConicProblem build_problem(SdpForm form, const Eigen::VectorXcd& y_merged,
                           const SupportSet& support, std::int64_t order);

/// maximize t such that t * u is certified bounded by one, i.e. the bounded
/// real lemma system with vector t * u is feasible. For the full form the
/// optimum equals 1 / max|Q|; for the reduced form it is a lower bound.
/// Variables: t (1), gram_re, gram_im.
ConicProblem build_brl_scaling(const SparsePolynomial& poly, std::int64_t order, SdpForm form);

/// Complex dual vector c from the c_re / c_im spans.
Eigen::VectorXcd dual_vector(const ConicProblem& problem, const Eigen::VectorXd& x);
/// Gram matrix (S or H) from the gram_re / gram_im spans.
HermitianMatrix gram_matrix(const ConicProblem& problem, const Eigen::VectorXd& x);

/// Real symmetric form [[Re, -Im], [Im, Re]] of a complex matrix.
Eigen::MatrixXd embed_hermitian(const Eigen::MatrixXcd& m);

/// |sum |amplitudes| - objective|, the primal/dual objective mismatch of a
/// recovery (the total-variation norm of an atomic measure is the l1 norm of
/// its amplitudes).
double dual_objective_check(const ConicSolution& solution,
                            std::span<const std::complex<double>> amplitudes);

/// Plain-text sparse dump of a problem, see README for the format.
void write_conic_text(std::ostream& os, const ConicProblem& problem);

}  // namespace mrss
