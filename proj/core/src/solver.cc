#include "mrss/solver.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "mrss/errors.h"

namespace mrss {
namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Eigen::VectorXd;

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kSigma = 1e-6;
constexpr double kRhoInit = 0.1;
constexpr double kRhoEqualityFactor = 1e3;
constexpr double kRhoMin = 1e-6;
constexpr double kRhoMax = 1e6;
constexpr int kCheckEvery = 10;
constexpr int kAdaptEvery = 50;
constexpr double kAdaptThreshold = 5.0;
constexpr int kRuizIters = 15;
constexpr double kInfeasibilityEps = 1e-7;

enum class ConeKind { kZero, kPsd, kHermitian };

struct Cone {
  ConeKind kind = ConeKind::kZero;
  int offset = 0;  // first row
  int size = 0;    // rows
  int dim = 0;     // matrix dimension for PSD cones
};

// Conic data in the form  A x + s = b,  s in K,  minimize q.x.
// Multipliers follow the sign with q = A^T y and y in the polar cone.
struct ConicData {
  SpMat a;
  VectorXd b;
  VectorXd q;
  std::vector<Cone> cones;
};

int svec_size(int dim) { return dim * (dim + 1) / 2; }

// Column-major lower triangle position.
int svec_index(int dim, int row, int col) { return col * dim - col * (col - 1) / 2 + (row - col); }

// Hermitian svec, column-major: (j, j), then Re and Im of (i, j) for i > j.
int hvec_index(int dim, int row, int col, bool imag) {
  const int base = col * (2 * dim - col);  // sum over earlier columns of 2 (dim - c) - 1
  if (row == col) return base;
  return base + 1 + 2 * (row - col - 1) + (imag ? 1 : 0);
}

ConicData to_conic_data(const ConicProblem& problem) {
  ConicData data;
  const int n = problem.num_variables;
  int rows = static_cast<int>(problem.equalities.size());
  for (const auto& block : problem.psd_blocks) {
    const int h = block.dimension / 2;
    rows += block.hermitian_embedding ? h * h : svec_size(block.dimension);
  }

  std::vector<Eigen::Triplet<double>> triplets;
  data.b = VectorXd::Zero(rows);
  data.q = -problem.objective;

  int row = 0;
  if (!problem.equalities.empty()) {
    data.cones.push_back({ConeKind::kZero, 0, static_cast<int>(problem.equalities.size()), 0});
  }
  for (const auto& eq : problem.equalities) {
    for (const auto& t : eq.terms) triplets.emplace_back(row, t.variable, t.coefficient);
    data.b[row] = eq.rhs;
    ++row;
  }
  for (const auto& block : problem.psd_blocks) {
    if (block.hermitian_embedding) {
      // [[Re, -Im], [Im, Re]]: Re from the top-left lower triangle, Im from
      // the strictly lower part of the bottom-left block.
      const int h = block.dimension / 2;
      Cone cone{ConeKind::kHermitian, row, h * h, h};
      for (const auto& e : block.entries) {
        int r = -1;
        if (e.row < h) {
          r = row + hvec_index(h, e.row, e.col, false);
        } else if (e.col < h && e.row - h > e.col) {
          r = row + hvec_index(h, e.row - h, e.col, true);
        }
        if (r < 0) continue;
        const bool diagonal = e.row == e.col;
        const double w = diagonal ? 1.0 : kSqrt2;
        data.b[r] += w * e.constant;
        for (const auto& t : e.terms) triplets.emplace_back(r, t.variable, -w * t.coefficient);
      }
      data.cones.push_back(cone);
      row += cone.size;
      continue;
    }
    Cone cone{ConeKind::kPsd, row, svec_size(block.dimension), block.dimension};
    for (const auto& e : block.entries) {
      const int r = row + svec_index(block.dimension, e.row, e.col);
      const double w = e.row == e.col ? 1.0 : kSqrt2;
      data.b[r] += w * e.constant;
      for (const auto& t : e.terms) triplets.emplace_back(r, t.variable, -w * t.coefficient);
    }
    data.cones.push_back(cone);
    row += cone.size;
  }
  data.a.resize(rows, n);
  data.a.setFromTriplets(triplets.begin(), triplets.end());
  data.a.makeCompressed();
  return data;
}

template <typename Matrix>
void unpack(const Eigen::Ref<const VectorXd>& v, const Cone& cone, Matrix& m) {
  const int dim = cone.dim;
  m.setZero(dim, dim);
  int k = 0;
  for (int col = 0; col < dim; ++col) {
    m(col, col) = v[k++];
    for (int row = col + 1; row < dim; ++row) {
      if constexpr (Matrix::IsVectorAtCompileTime || !Eigen::NumTraits<typename Matrix::Scalar>::IsComplex) {
        m(row, col) = v[k++] / kSqrt2;
      } else {
        const double re = v[k++] / kSqrt2;
        const double im = v[k++] / kSqrt2;
        m(row, col) = {re, im};
      }
      m(col, row) = Eigen::numext::conj(m(row, col));
    }
  }
}

template <typename Matrix>
void pack(const Matrix& m, const Cone& cone, Eigen::Ref<VectorXd> v) {
  const int dim = cone.dim;
  int k = 0;
  for (int col = 0; col < dim; ++col) {
    v[k++] = Eigen::numext::real(m(col, col));
    for (int row = col + 1; row < dim; ++row) {
      if constexpr (!Eigen::NumTraits<typename Matrix::Scalar>::IsComplex) {
        v[k++] = m(row, col) * kSqrt2;
      } else {
        v[k++] = m(row, col).real() * kSqrt2;
        v[k++] = m(row, col).imag() * kSqrt2;
      }
    }
  }
}

// Nearest PSD matrix of a self-adjoint m, in place. Uses the spectral
// decomposition, or (m + |m|) / 2 from an SVD if the eigensolver does not
// converge.
template <typename Matrix>
void project_psd_inplace(Matrix& m) {
  if (!m.allFinite()) throw Error(ErrorCode::kNumericalBreakdown, "non-finite matrix in PSD projection");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::ComputeEigenvectors);
  if (eig.info() == Eigen::Success) {
    const VectorXd& lambda = eig.eigenvalues();
    if (lambda[0] >= 0.0) return;
    const Eigen::Index dim = m.rows();
    Eigen::Index first_positive = 0;
    while (first_positive < dim && lambda[first_positive] <= 0.0) ++first_positive;
    const Eigen::Index keep = dim - first_positive;
    if (keep == 0) {
      m.setZero();
      return;
    }
    const auto vecs = eig.eigenvectors().rightCols(keep);
    m = vecs * lambda.tail(keep).asDiagonal() * vecs.adjoint();
    return;
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  if (!svd.singularValues().allFinite()) {
    throw Error(ErrorCode::kNumericalBreakdown, "eigendecomposition failed in PSD projection");
  }
  const Matrix abs_m = svd.matrixV() * svd.singularValues().asDiagonal() * svd.matrixV().adjoint();
  m = 0.5 * (m + abs_m);
  m = 0.5 * (m + m.adjoint()).eval();
}

template <typename Matrix>
double max_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
  if (eig.info() == Eigen::Success) return eig.eigenvalues()[m.rows() - 1];
  // Gershgorin bound; conservative for the polar-cone test.
  double bound = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    bound = std::max(bound, Eigen::numext::real(m(i, i)) + m.row(i).cwiseAbs().sum() - std::abs(m(i, i)));
  }
  return bound;
}

struct ConeWorkspace {
  Eigen::MatrixXd real;
  Eigen::MatrixXcd complex;
};

void project_cone(Eigen::Ref<VectorXd> v, const Cone& cone, ConeWorkspace& ws) {
  switch (cone.kind) {
    case ConeKind::kZero:
      v.setZero();
      return;
    case ConeKind::kPsd:
      unpack(v, cone, ws.real);
      project_psd_inplace(ws.real);
      pack(ws.real, cone, v);
      return;
    case ConeKind::kHermitian:
      unpack(v, cone, ws.complex);
      project_psd_inplace(ws.complex);
      pack(ws.complex, cone, v);
      return;
  }
}

double cone_max_eigenvalue(const Eigen::Ref<const VectorXd>& v, const Cone& cone) {
  if (cone.kind == ConeKind::kHermitian) {
    Eigen::MatrixXcd m;
    unpack(v, cone, m);
    return max_eigenvalue(m);
  }
  Eigen::MatrixXd m;
  unpack(v, cone, m);
  return max_eigenvalue(m);
}

struct Equilibration {
  VectorXd d;  // variable scaling
  VectorXd e;  // constraint scaling
  double cost = 1.0;
};

double clamp_norm(double v) {
  if (v < 1e-4) return 1.0;
  return std::min(v, 1e4);
}

Equilibration equilibrate(ConicData& data, bool enabled) {
  const int n = static_cast<int>(data.a.cols());
  const int m = static_cast<int>(data.a.rows());
  Equilibration sc{VectorXd::Ones(n), VectorXd::Ones(m), 1.0};
  if (enabled) {
    for (int it = 0; it < kRuizIters; ++it) {
      VectorXd col_norm = VectorXd::Zero(n);
      VectorXd row_norm = VectorXd::Zero(m);
      for (int j = 0; j < n; ++j) {
        for (SpMat::InnerIterator itr(data.a, j); itr; ++itr) {
          const double v = std::abs(itr.value());
          col_norm[j] = std::max(col_norm[j], v);
          row_norm[itr.row()] = std::max(row_norm[itr.row()], v);
        }
      }
      VectorXd dcol(n), erow(m);
      for (int j = 0; j < n; ++j) dcol[j] = 1.0 / std::sqrt(clamp_norm(col_norm[j]));
      for (int i = 0; i < m; ++i) erow[i] = 1.0 / std::sqrt(clamp_norm(row_norm[i]));
      // A cone must be scaled uniformly to stay a cone.
      for (const auto& cone : data.cones) {
        if (cone.kind == ConeKind::kZero) continue;
        const double peak = row_norm.segment(cone.offset, cone.size).maxCoeff();
        erow.segment(cone.offset, cone.size).setConstant(1.0 / std::sqrt(clamp_norm(peak)));
      }
      data.a = erow.asDiagonal() * data.a * dcol.asDiagonal();
      sc.d.array() *= dcol.array();
      sc.e.array() *= erow.array();
    }
    data.b.array() *= sc.e.array();
    data.q.array() *= sc.d.array();
    const double qn = data.q.lpNorm<Eigen::Infinity>();
    sc.cost = 1.0 / clamp_norm(qn);
    data.q *= sc.cost;
  }
  return sc;
}

bool all_finite(const VectorXd& v) { return v.allFinite(); }

}  // namespace

void SolverConfig::validate() const {
  if (!(eps_primal > 0.0) || !(eps_dual > 0.0) || !(eps_gap > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "solver tolerances must be positive");
  }
  if (max_iters < 1) throw Error(ErrorCode::kInvalidInput, "max_iters must be >= 1");
  if (!(over_relaxation > 0.0 && over_relaxation < 2.0)) {
    throw Error(ErrorCode::kInvalidInput, "over_relaxation must lie in (0, 2)");
  }
}

Eigen::MatrixXd psd_project(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::kDimensionMismatch, "matrix is not square");
  if (!m.allFinite()) throw Error(ErrorCode::kNumericalBreakdown, "non-finite matrix entry");
  Eigen::MatrixXd out = 0.5 * (m + m.transpose());
  project_psd_inplace(out);
  return out;
}

SolutionCheck verify_solution(const ConicProblem& problem, const Eigen::VectorXd& x) {
  SolutionCheck check{std::numeric_limits<double>::infinity(), 0.0};
  for (std::size_t k = 0; k < problem.psd_blocks.size(); ++k) {
    const Eigen::MatrixXd value = problem.block_value(k, x);
    double lowest = 0.0;
    if (problem.psd_blocks[k].hermitian_embedding) {
      const Eigen::Index h = value.rows() / 2;
      Eigen::MatrixXcd m(h, h);
      m.real() = value.topLeftCorner(h, h);
      m.imag() = value.bottomLeftCorner(h, h);
      lowest = -max_eigenvalue(Eigen::MatrixXcd(-m));
    } else {
      lowest = -max_eigenvalue(Eigen::MatrixXd(-value));
    }
    check.min_eigenvalue = std::min(check.min_eigenvalue, lowest);
  }
  if (!problem.equalities.empty()) {
    check.equality_residual = problem.equality_residual(x).lpNorm<Eigen::Infinity>();
  }
  return check;
}

ConicSolution solve(const ConicProblem& problem, const SolverConfig& config) {
  problem.validate();
  config.validate();

  ConicData data = to_conic_data(problem);
  // Unscaled copies for residuals.
  const SpMat a0 = data.a;
  const VectorXd b0 = data.b;
  const VectorXd q0 = data.q;
  const Equilibration sc = equilibrate(data, config.scaling == Scaling::kRuiz);

  const int n = static_cast<int>(data.a.cols());
  const int m = static_cast<int>(data.a.rows());
  const SpMat at = data.a.transpose();
  const double alpha = config.over_relaxation;

  double rho = kRhoInit;
  VectorXd rho_vec(m);
  auto set_rho = [&](double r) {
    for (const auto& cone : data.cones) {
      rho_vec.segment(cone.offset, cone.size)
          .setConstant(cone.kind == ConeKind::kZero ? r * kRhoEqualityFactor : r);
    }
  };
  set_rho(rho);

  SpMat identity(n, n);
  identity.setIdentity();
  Eigen::SimplicialLDLT<SpMat> ldlt;
  auto factor = [&]() {
    SpMat k = at * rho_vec.asDiagonal() * data.a + kSigma * identity;
    ldlt.compute(k);
    if (ldlt.info() != Eigen::Success) {
      throw Error(ErrorCode::kNumericalBreakdown, "KKT factorization failed");
    }
  };
  factor();

  VectorXd x = VectorXd::Zero(n), s = VectorXd::Zero(m), y = VectorXd::Zero(m);
  VectorXd x_tilde(n), s_tilde(m), s_relax(m), v(m), y_prev(m);
  ConeWorkspace workspace;

  ConicSolution best;
  double best_score = std::numeric_limits<double>::infinity();
  VectorXd best_x = x;

  ConicSolution out;
  out.status = SolverStatus::kMaxIterations;

  for (int iter = 1; iter <= config.max_iters; ++iter) {
    y_prev = y;
    VectorXd rhs = kSigma * x - data.q + at * (rho_vec.cwiseProduct(data.b - s) + y);
    x_tilde = ldlt.solve(rhs);
    s_tilde = data.b - data.a * x_tilde;
    x = alpha * x_tilde + (1.0 - alpha) * x;
    s_relax = alpha * s_tilde + (1.0 - alpha) * s;
    v = s_relax + y.cwiseQuotient(rho_vec);
    for (const auto& cone : data.cones) {
      project_cone(v.segment(cone.offset, cone.size), cone, workspace);
    }
    s = v;
    y += rho_vec.cwiseProduct(s_relax - s);

    const bool last = iter == config.max_iters;
    if (iter % kCheckEvery != 0 && !last) continue;

    if (!all_finite(x) || !all_finite(y)) {
      throw Error(ErrorCode::kNumericalBreakdown, "non-finite iterate");
    }

    // Residuals in the original coordinates.
    const VectorXd xu = sc.d.cwiseProduct(x);
    const VectorXd su = s.cwiseQuotient(sc.e);
    const VectorXd yu = sc.e.cwiseProduct(y) / sc.cost;
    const VectorXd ax = a0 * xu;
    const VectorXd aty = a0.transpose() * yu;
    const double r_p = (ax + su - b0).lpNorm<Eigen::Infinity>();
    const double scale_p =
        std::max({ax.lpNorm<Eigen::Infinity>(), su.lpNorm<Eigen::Infinity>(),
                  b0.lpNorm<Eigen::Infinity>()});
    const double r_d = (q0 - aty).lpNorm<Eigen::Infinity>();
    const double scale_d = std::max(q0.lpNorm<Eigen::Infinity>(), aty.lpNorm<Eigen::Infinity>());
    const double pobj = q0.dot(xu);
    const double dobj = b0.dot(yu);
    const double gap = std::abs(pobj - dobj);

    const double np = r_p / (1.0 + scale_p);
    const double nd = r_d / (1.0 + scale_d);
    const double ng = gap / (1.0 + std::abs(pobj) + std::abs(dobj));
    if (config.record_history) out.history.push_back({iter, np, nd, ng});

    const double score = std::max({np / config.eps_primal, nd / config.eps_dual, ng / config.eps_gap});
    if (score < best_score) {
      best_score = score;
      best_x = xu;
      best.primal_residual = np;
      best.dual_residual = nd;
      best.gap = ng;
      best.iterations = iter;
    }
    if (np <= config.eps_primal && nd <= config.eps_dual && ng <= config.eps_gap) {
      out.status = SolverStatus::kOptimal;
      out.variables = xu;
      out.primal_residual = np;
      out.dual_residual = nd;
      out.gap = ng;
      out.iterations = iter;
      break;
    }

    // Primal infeasibility: dy in the polar cone with A^T dy = 0, b.dy > 0.
    const VectorXd dy = sc.e.cwiseProduct(y - y_prev);
    const double dy_norm = dy.lpNorm<Eigen::Infinity>();
    if (dy_norm > 1e-12) {
      const double at_dy = (a0.transpose() * dy).lpNorm<Eigen::Infinity>();
      const double b_dy = b0.dot(dy);
      if (at_dy <= kInfeasibilityEps * dy_norm && b_dy > kInfeasibilityEps * dy_norm) {
        bool polar = true;
        for (const auto& cone : data.cones) {
          if (cone.kind != ConeKind::kZero &&
              cone_max_eigenvalue(dy.segment(cone.offset, cone.size), cone) >
                  kInfeasibilityEps * dy_norm) {
            polar = false;
          }
        }
        if (polar) {
          out.status = SolverStatus::kInfeasible;
          out.variables = xu;
          out.primal_residual = np;
          out.dual_residual = nd;
          out.gap = ng;
          out.iterations = iter;
          break;
        }
      }
    }

    if (iter % kAdaptEvery == 0) {
      // Balance primal and dual residuals in the scaled problem.
      const VectorXd axs = data.a * x;
      const VectorXd atys = at * y;
      const double sp = (axs + s - data.b).lpNorm<Eigen::Infinity>() /
                        std::max({axs.lpNorm<Eigen::Infinity>(), s.lpNorm<Eigen::Infinity>(),
                                  data.b.lpNorm<Eigen::Infinity>(), 1e-12});
      const double sd = (data.q - atys).lpNorm<Eigen::Infinity>() /
                        std::max({data.q.lpNorm<Eigen::Infinity>(),
                                  atys.lpNorm<Eigen::Infinity>(), 1e-12});
      if (sp > 0.0 && sd > 0.0) {
        const double proposal = std::clamp(rho * std::sqrt(sp / sd), kRhoMin, kRhoMax);
        if (proposal > kAdaptThreshold * rho || proposal < rho / kAdaptThreshold) {
          rho = proposal;
          set_rho(rho);
          factor();
        }
      }
    }
  }

  if (out.status == SolverStatus::kMaxIterations) {
    out.variables = best_x;
    out.primal_residual = best.primal_residual;
    out.dual_residual = best.dual_residual;
    out.gap = best.gap;
    out.iterations = config.max_iters;
  }
  out.objective_value = problem.objective_value(out.variables);
  return out;
}

}  // namespace mrss
