#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace mrss {

/// Complex Hermitian matrix stored as its packed lower triangle. Entries
/// above the diagonal are served as conjugates; the diagonal is real.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(Eigen::Index dimension);

  /// Throws Error(kNotHermitian) if |M(i,j) - conj(M(j,i))| exceeds
  /// tolerance * max(1, |M(i,j)|) anywhere, Error(kDimensionMismatch) if M
  /// is not square.
  static HermitianMatrix from_dense(const Eigen::MatrixXcd& m, double tolerance = 1e-12);
  /// q q^H.
  static HermitianMatrix outer(const Eigen::VectorXcd& q);
  static HermitianMatrix identity(Eigen::Index dimension);

  Eigen::Index dimension() const { return dim_; }
  std::complex<double> operator()(Eigen::Index row, Eigen::Index col) const;
  /// Sets entry (row, col) and, implicitly, its mirror.
  void set(Eigen::Index row, Eigen::Index col, std::complex<double> value);
  Eigen::MatrixXcd to_dense() const;

 private:
  static std::size_t packed(Eigen::Index row, Eigen::Index col) {
    return static_cast<std::size_t>(row) * (row + 1) / 2 + col;
  }

  Eigen::Index dim_ = 0;
  std::vector<std::complex<double>> lower_;
};

/// R(z) = r_0 + sum_{k=1..n} (r_k z^-k + conj(r_k) z^k), with r_0 real.
struct TrigPolynomial {
  Eigen::VectorXcd r;

  Eigen::Index order() const { return r.size() - 1; }
  std::complex<double> evaluate(std::complex<double> z) const;
};

/// Polynomial Q(z) = sum_p coeffs[p] z^support[p] with a sorted support.
struct SparsePolynomial {
  std::vector<std::int64_t> support;
  Eigen::VectorXcd coeffs;

  std::complex<double> evaluate(std::complex<double> z) const;

  /// Q(e^{i omega}) and its first two derivatives with respect to omega.
  struct UnitValue {
    std::complex<double> value;
    std::complex<double> d1;
    std::complex<double> d2;
  };
  UnitValue evaluate_unit(double omega) const;

  /// Q(e^{i 2 pi m / points}) for m = 0..points-1, with exact integer
  /// reduction of the exponents.
  Eigen::VectorXcd evaluate_on_grid(std::int64_t points) const;

  /// Dense coefficient vector of length `length` (> max support).
  Eigen::VectorXcd to_dense(std::int64_t length) const;
};

/// Sum of each subdiagonal: out[k] = sum_i H(i + k, i), k = 0..d-1. With this
/// orientation toeplitz_adjoint(q q^H) is the autocorrelation
/// sum_i q_{i+k} conj(q_i), i.e. the negative-power coefficients of the
/// trigonometric polynomial with Gram matrix H.
Eigen::VectorXcd toeplitz_adjoint(const HermitianMatrix& h);

/// True iff G is a Gram matrix of R, i.e. toeplitz_adjoint(G) == r within
/// tolerance. Throws Error(kDimensionMismatch) unless G has order + 1 rows.
bool gram_membership(const HermitianMatrix& g, const TrigPolynomial& poly,
                     double tolerance = 1e-9);

/// Sorted non-negative differences i - i' realized by pairs of `index_set`.
std::vector<std::int64_t> realized_differences(std::span<const std::int64_t> index_set);

/// True iff every element of `poly_support` is a difference of two elements
/// of `index_set` (existence of a compact Gram representation on the
/// selection of `index_set`).
bool compact_support_check(std::span<const std::int64_t> poly_support,
                           std::span<const std::int64_t> index_set);

/// toeplitz_adjoint(C S C^H) for the selection C of the sorted index set
/// into length `order`, evaluated on index pairs without forming the lift.
Eigen::VectorXcd compact_toeplitz_adjoint(const HermitianMatrix& s,
                                          std::span<const std::int64_t> index_set,
                                          std::int64_t order);

/// One scalar-complex equality: the sum of S over `positions` equals rhs.
/// Positions are (row, col) with row >= col, so they address the packed
/// lower triangle.
struct DifferenceConstraint {
  std::int64_t difference = 0;
  std::vector<std::pair<int, int>> positions;
  std::complex<double> rhs;
};

/// Sparse bounded-real-lemma system on a support set:
///   [[S, u], [u^H, 1]] >= 0,   T*(C S C^H) = r.
/// Only differences realized by the support produce equalities; the others
/// are identically zero on both sides.
struct BrlConstraints {
  std::int64_t order = 0;
  int block_dimension = 0;  // |support| + 1
  std::vector<DifferenceConstraint> equalities;

  /// Complex unknowns of S counted on its lower triangle, N (N + 1) / 2.
  std::int64_t scalar_unknowns() const {
    const std::int64_t n = block_dimension - 1;
    return n * (n + 1) / 2;
  }
};

/// Constraints certifying |Q| <= 1 on the unit circle (r = e_1). Throws
/// Error(kUnsupportedSupport) if 0 is not in the support.
BrlConstraints brl_constraints(std::span<const std::int64_t> index_set, std::int64_t order);

/// Constraints certifying |Q| <= |P| where `bound` holds the coefficients of
/// |P|^2. Throws Error(kUnsupportedSupport) if `bound` has a nonzero
/// coefficient at a difference the support cannot realize.
BrlConstraints brl_constraints(std::span<const std::int64_t> index_set, std::int64_t order,
                               const TrigPolynomial& bound);

}  // namespace mrss
