#include "mrss/gram.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <unordered_set>

#include "mrss/errors.h"
#include "mrss/model.h"

namespace mrss {
namespace {

void require_sorted_support(std::span<const std::int64_t> index_set, std::int64_t order) {
  for (std::size_t p = 0; p < index_set.size(); ++p) {
    if (index_set[p] < 0 || index_set[p] >= order) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "support index " + std::to_string(index_set[p]) + " outside [0, " +
                      std::to_string(order) + ")");
    }
    if (p > 0 && index_set[p] <= index_set[p - 1]) {
      throw Error(ErrorCode::kInvalidInput, "support must be strictly increasing");
    }
  }
}

}  // namespace

HermitianMatrix::HermitianMatrix(Eigen::Index dimension)
    : dim_(dimension), lower_(packed(dimension, 0)) {}

HermitianMatrix HermitianMatrix::from_dense(const Eigen::MatrixXcd& m, double tolerance) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::kDimensionMismatch, "matrix is not square");
  HermitianMatrix h(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const std::complex<double> a = m(i, j);
      const std::complex<double> b = std::conj(m(j, i));
      if (std::abs(a - b) > tolerance * std::max(1.0, std::abs(a))) {
        throw Error(ErrorCode::kNotHermitian,
                    "entry (" + std::to_string(i) + "," + std::to_string(j) + ") mismatch");
      }
      h.lower_[packed(i, j)] = (i == j) ? std::complex<double>(a.real(), 0.0) : a;
    }
  }
  return h;
}

HermitianMatrix HermitianMatrix::outer(const Eigen::VectorXcd& q) {
  HermitianMatrix h(q.size());
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) h.lower_[packed(i, j)] = q[i] * std::conj(q[j]);
    h.lower_[packed(i, i)] = std::norm(q[i]);
  }
  return h;
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index dimension) {
  HermitianMatrix h(dimension);
  for (Eigen::Index i = 0; i < dimension; ++i) h.lower_[packed(i, i)] = 1.0;
  return h;
}

std::complex<double> HermitianMatrix::operator()(Eigen::Index row, Eigen::Index col) const {
  return row >= col ? lower_[packed(row, col)] : std::conj(lower_[packed(col, row)]);
}

void HermitianMatrix::set(Eigen::Index row, Eigen::Index col, std::complex<double> value) {
  if (row == col) {
    lower_[packed(row, row)] = value.real();
  } else if (row > col) {
    lower_[packed(row, col)] = value;
  } else {
    lower_[packed(col, row)] = std::conj(value);
  }
}

Eigen::MatrixXcd HermitianMatrix::to_dense() const {
  Eigen::MatrixXcd m(dim_, dim_);
  for (Eigen::Index i = 0; i < dim_; ++i) {
    for (Eigen::Index j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
  }
  return m;
}

std::complex<double> TrigPolynomial::evaluate(std::complex<double> z) const {
  std::complex<double> acc = r[0].real();
  std::complex<double> zk = 1.0;
  const std::complex<double> zinv = 1.0 / z;
  std::complex<double> zik = 1.0;
  for (Eigen::Index k = 1; k < r.size(); ++k) {
    zk *= z;
    zik *= zinv;
    acc += r[k] * zik + std::conj(r[k]) * zk;
  }
  return acc;
}

std::complex<double> SparsePolynomial::evaluate(std::complex<double> z) const {
  std::complex<double> acc = 0.0;
  for (std::size_t p = 0; p < support.size(); ++p) {
    acc += coeffs[static_cast<Eigen::Index>(p)] * std::pow(z, static_cast<double>(support[p]));
  }
  return acc;
}

SparsePolynomial::UnitValue SparsePolynomial::evaluate_unit(double omega) const {
  UnitValue out{0.0, 0.0, 0.0};
  const long double cycles_per_power =
      static_cast<long double>(omega) / (2.0L * std::numbers::pi_v<long double>);
  for (std::size_t p = 0; p < support.size(); ++p) {
    const double kappa = static_cast<double>(support[p]);
    const std::complex<double> term =
        coeffs[static_cast<Eigen::Index>(p)] *
        unit_phasor(cycles_per_power * static_cast<long double>(support[p]));
    out.value += term;
    out.d1 += std::complex<double>(0.0, kappa) * term;
    out.d2 -= kappa * kappa * term;
  }
  return out;
}

Eigen::VectorXcd SparsePolynomial::evaluate_on_grid(std::int64_t points) const {
  if (points < 1) throw Error(ErrorCode::kInvalidInput, "grid needs at least one point");
  std::vector<std::complex<double>> roots(static_cast<std::size_t>(points));
  for (std::int64_t m = 0; m < points; ++m) {
    roots[static_cast<std::size_t>(m)] =
        unit_phasor(static_cast<long double>(m) / static_cast<long double>(points));
  }
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(points);
  for (std::size_t p = 0; p < support.size(); ++p) {
    const std::int64_t step = support[p] % points;
    const std::complex<double> c = coeffs[static_cast<Eigen::Index>(p)];
    std::int64_t phase = 0;
    for (std::int64_t m = 0; m < points; ++m) {
      out[m] += c * roots[static_cast<std::size_t>(phase)];
      phase += step;
      if (phase >= points) phase -= points;
    }
  }
  return out;
}

Eigen::VectorXcd SparsePolynomial::to_dense(std::int64_t length) const {
  Eigen::VectorXcd q = Eigen::VectorXcd::Zero(length);
  for (std::size_t p = 0; p < support.size(); ++p) {
    if (support[p] < 0 || support[p] >= length) {
      throw Error(ErrorCode::kDimensionMismatch, "support exceeds dense length");
    }
    q[support[p]] = coeffs[static_cast<Eigen::Index>(p)];
  }
  return q;
}

Eigen::VectorXcd toeplitz_adjoint(const HermitianMatrix& h) {
  const Eigen::Index d = h.dimension();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    for (Eigen::Index i = 0; i + k < d; ++i) out[k] += h(i + k, i);
  }
  return out;
}

bool gram_membership(const HermitianMatrix& g, const TrigPolynomial& poly, double tolerance) {
  if (g.dimension() != poly.r.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "Gram matrix of dimension " + std::to_string(g.dimension()) +
                    " for polynomial of order " + std::to_string(poly.order()));
  }
  return (toeplitz_adjoint(g) - poly.r).cwiseAbs().maxCoeff() <= tolerance;
}

std::vector<std::int64_t> realized_differences(std::span<const std::int64_t> index_set) {
  std::vector<std::int64_t> diffs;
  diffs.reserve(index_set.size() * (index_set.size() + 1) / 2);
  for (std::size_t a = 0; a < index_set.size(); ++a) {
    for (std::size_t b = 0; b < index_set.size(); ++b) {
      if (index_set[a] >= index_set[b]) diffs.push_back(index_set[a] - index_set[b]);
    }
  }
  std::sort(diffs.begin(), diffs.end());
  diffs.erase(std::unique(diffs.begin(), diffs.end()), diffs.end());
  return diffs;
}

bool compact_support_check(std::span<const std::int64_t> poly_support,
                           std::span<const std::int64_t> index_set) {
  std::unordered_set<std::int64_t> diffs;
  for (std::int64_t a : index_set) {
    for (std::int64_t b : index_set) diffs.insert(a - b);
  }
  return std::all_of(poly_support.begin(), poly_support.end(),
                     [&](std::int64_t j) { return diffs.count(j) > 0; });
}

Eigen::VectorXcd compact_toeplitz_adjoint(const HermitianMatrix& s,
                                          std::span<const std::int64_t> index_set,
                                          std::int64_t order) {
  if (s.dimension() != static_cast<Eigen::Index>(index_set.size())) {
    throw Error(ErrorCode::kDimensionMismatch, "S must have one row per support index");
  }
  require_sorted_support(index_set, order);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(order);
  const int n = static_cast<int>(index_set.size());
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q <= p; ++q) out[index_set[p] - index_set[q]] += s(p, q);
  }
  return out;
}

BrlConstraints brl_constraints(std::span<const std::int64_t> index_set, std::int64_t order) {
  TrigPolynomial unit;
  unit.r = Eigen::VectorXcd::Zero(1);
  unit.r[0] = 1.0;
  return brl_constraints(index_set, order, unit);
}

BrlConstraints brl_constraints(std::span<const std::int64_t> index_set, std::int64_t order,
                               const TrigPolynomial& bound) {
  require_sorted_support(index_set, order);
  if (index_set.empty() || index_set.front() != 0) {
    throw Error(ErrorCode::kUnsupportedSupport, "support must contain index 0");
  }
  const int n = static_cast<int>(index_set.size());

  BrlConstraints out;
  out.order = order;
  out.block_dimension = n + 1;

  // Group lower-triangle positions by difference; iterate by column then row
  // so that the identity support reproduces the dense diagonal ordering.
  std::vector<std::int64_t> diffs = realized_differences(index_set);
  out.equalities.resize(diffs.size());
  for (std::size_t t = 0; t < diffs.size(); ++t) {
    out.equalities[t].difference = diffs[t];
    const std::int64_t d = diffs[t];
    out.equalities[t].rhs = d < bound.r.size() ? bound.r[d] : std::complex<double>(0.0);
  }
  for (int q = 0; q < n; ++q) {
    for (int p = q; p < n; ++p) {
      const std::int64_t d = index_set[p] - index_set[q];
      auto it = std::lower_bound(diffs.begin(), diffs.end(), d);
      out.equalities[it - diffs.begin()].positions.emplace_back(p, q);
    }
  }

  for (Eigen::Index d = 0; d < bound.r.size(); ++d) {
    if (bound.r[d] != std::complex<double>(0.0) &&
        !std::binary_search(diffs.begin(), diffs.end(), static_cast<std::int64_t>(d))) {
      throw Error(ErrorCode::kUnsupportedSupport,
                  "bound coefficient at difference " + std::to_string(d) +
                      " is not realized by the support");
    }
  }
  return out;
}

}  // namespace mrss
