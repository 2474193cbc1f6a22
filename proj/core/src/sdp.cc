#include "mrss/sdp.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "mrss/errors.h"

namespace mrss {
namespace {

using Terms = std::vector<AffineTerm>;

Terms negated(Terms terms) {
  for (auto& t : terms) t.coefficient = -t.coefficient;
  return terms;
}

// Real and imaginary affine parts of one complex block entry.
struct ComplexAffine {
  Terms re;
  Terms im;
  double re_constant = 0.0;
};

// Hermitian block [[X, v], [v^H, 1]] with X the Gram variable of dimension
// `dim`, expressed through variable indices.
class HermitianBlockLayout {
 public:
  HermitianBlockLayout(int dim, int re_offset, int im_offset, std::vector<ComplexAffine> column)
      : dim_(dim), re_offset_(re_offset), im_offset_(im_offset), column_(std::move(column)) {}

  int re_index(int i, int j) const { return re_offset_ + i * (i + 1) / 2 + j; }  // i >= j
  int im_index(int i, int j) const { return im_offset_ + i * (i - 1) / 2 + j; }  // i > j

  ComplexAffine entry(int i, int j) const {
    ComplexAffine e;
    if (i < dim_ && j < dim_) {
      e.re = {{re_index(std::max(i, j), std::min(i, j)), 1.0}};
      if (i > j) e.im = {{im_index(i, j), 1.0}};
      if (i < j) e.im = {{im_index(j, i), -1.0}};
    } else if (i < dim_) {  // column entry v_i
      e = column_[i];
    } else if (j < dim_) {  // row entry conj(v_j)
      e.re = column_[j].re;
      e.im = negated(column_[j].im);
    } else {
      e.re_constant = 1.0;
    }
    return e;
  }

  PsdBlock embed() const {
    const int h = dim_ + 1;
    PsdBlock block;
    block.dimension = 2 * h;
    block.hermitian_embedding = true;
    for (int col = 0; col < 2 * h; ++col) {
      for (int row = col; row < 2 * h; ++row) {
        PsdEntry e{row, col, 0.0, {}};
        if (row < h) {
          ComplexAffine c = entry(row, col);
          e.terms = c.re;
          e.constant = c.re_constant;
        } else if (col >= h) {
          ComplexAffine c = entry(row - h, col - h);
          e.terms = c.re;
          e.constant = c.re_constant;
        } else {
          e.terms = entry(row - h, col).im;
        }
        if (!e.terms.empty() || e.constant != 0.0) block.entries.push_back(std::move(e));
      }
    }
    return block;
  }

 private:
  int dim_;
  int re_offset_;
  int im_offset_;
  std::vector<ComplexAffine> column_;
};

// Appends real/imaginary equalities of the difference constraints on the
// Gram variable.
void add_equalities(ConicProblem& problem, const HermitianBlockLayout& layout,
                    const std::vector<DifferenceConstraint>& constraints) {
  for (const auto& dc : constraints) {
    LinearEquality re{{}, dc.rhs.real()};
    LinearEquality im{{}, dc.rhs.imag()};
    for (auto [p, q] : dc.positions) {
      re.terms.push_back({layout.re_index(p, q), 1.0});
      if (p != q) im.terms.push_back({layout.im_index(p, q), 1.0});
    }
    problem.equalities.push_back(std::move(re));
    if (!im.terms.empty()) problem.equalities.push_back(std::move(im));
  }
}

std::vector<DifferenceConstraint> dense_constraints(int dim) {
  std::vector<DifferenceConstraint> out(static_cast<std::size_t>(dim));
  for (int d = 0; d < dim; ++d) {
    out[d].difference = d;
    out[d].rhs = d == 0 ? 1.0 : 0.0;
    for (int i = 0; i + d < dim; ++i) out[d].positions.emplace_back(i + d, i);
  }
  return out;
}

int checked_dim(std::int64_t v, const char* what) {
  if (v < 1 || v > 1 << 14) {
    throw Error(ErrorCode::kInvalidInput,
                std::string(what) + " dimension " + std::to_string(v) + " out of range");
  }
  return static_cast<int>(v);
}

ConicProblem assemble(int gram_dim, int leading, std::vector<VariableSpan> leading_layout,
                      std::vector<ComplexAffine> column,
                      const std::vector<DifferenceConstraint>& constraints) {
  ConicProblem problem;
  const int re_count = gram_dim * (gram_dim + 1) / 2;
  const int im_count = gram_dim * (gram_dim - 1) / 2;
  problem.num_variables = leading + re_count + im_count;
  problem.objective = Eigen::VectorXd::Zero(problem.num_variables);
  problem.layout = std::move(leading_layout);
  problem.layout.push_back({"gram_re", leading, re_count});
  problem.layout.push_back({"gram_im", leading + re_count, im_count});

  HermitianBlockLayout layout(gram_dim, leading, leading + re_count, std::move(column));
  problem.psd_blocks.push_back(layout.embed());
  add_equalities(problem, layout, constraints);
  return problem;
}

ConicProblem build_dual(const Eigen::VectorXcd& y, const SupportSet& support,
                        std::int64_t order, SdpForm form) {
  const int n = static_cast<int>(support.size());
  if (y.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "merged observations do not match the support");
  }
  if (support.indices.empty() || support.indices.front() != 0) {
    throw Error(ErrorCode::kUnsupportedSupport, "support must contain index 0");
  }
  const int gram_dim = form == SdpForm::kReduced ? n : checked_dim(order, "full Gram");

  std::vector<ComplexAffine> column(static_cast<std::size_t>(gram_dim));
  for (int p = 0; p < n; ++p) {
    const int row = form == SdpForm::kReduced ? p : static_cast<int>(support.indices[p]);
    column[row].re = {{p, 1.0}};
    column[row].im = {{n + p, 1.0}};
  }
  std::vector<DifferenceConstraint> constraints =
      form == SdpForm::kReduced ? brl_constraints(support.indices, order).equalities
                                : dense_constraints(gram_dim);

  ConicProblem problem = assemble(gram_dim, 2 * n, {{"c_re", 0, n}, {"c_im", n, n}},
                                  std::move(column), constraints);
  for (int p = 0; p < n; ++p) {
    problem.objective[p] = y[p].real();
    problem.objective[n + p] = y[p].imag();
  }
  return problem;
}

}  // namespace

void ConicProblem::validate() const {
  auto check_var = [&](int v) {
    if (v < 0 || v >= num_variables) {
      throw Error(ErrorCode::kInvalidInput, "variable index " + std::to_string(v) + " out of range");
    }
  };
  if (objective.size() != num_variables) {
    throw Error(ErrorCode::kInvalidInput, "objective length differs from variable count");
  }
  for (const auto& block : psd_blocks) {
    for (const auto& e : block.entries) {
      if (e.row < e.col || e.row >= block.dimension || e.col < 0) {
        throw Error(ErrorCode::kInvalidInput, "PSD entry outside the lower triangle");
      }
      for (const auto& t : e.terms) check_var(t.variable);
    }
  }
  for (const auto& eq : equalities) {
    for (const auto& t : eq.terms) check_var(t.variable);
  }
  std::vector<VariableSpan> spans = layout;
  std::sort(spans.begin(), spans.end(),
            [](const VariableSpan& a, const VariableSpan& b) { return a.offset < b.offset; });
  int next = 0;
  for (const auto& s : spans) {
    if (s.offset != next || s.size < 0) {
      throw Error(ErrorCode::kInvalidInput, "variable layout is not a tiling");
    }
    next += s.size;
  }
  if (next != num_variables) throw Error(ErrorCode::kInvalidInput, "variable layout is not a tiling");
}

const VariableSpan& ConicProblem::span(std::string_view name) const {
  for (const auto& s : layout) {
    if (s.name == name) return s;
  }
  throw Error(ErrorCode::kInvalidInput, "no variable span named '" + std::string(name) + "'");
}

double ConicProblem::objective_value(const Eigen::VectorXd& x) const { return objective.dot(x); }

Eigen::MatrixXd ConicProblem::block_value(std::size_t block, const Eigen::VectorXd& x) const {
  const PsdBlock& b = psd_blocks.at(block);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(b.dimension, b.dimension);
  for (const auto& e : b.entries) {
    double v = e.constant;
    for (const auto& t : e.terms) v += t.coefficient * x[t.variable];
    m(e.row, e.col) += v;
    if (e.row != e.col) m(e.col, e.row) += v;
  }
  return m;
}

Eigen::VectorXd ConicProblem::equality_residual(const Eigen::VectorXd& x) const {
  Eigen::VectorXd r(static_cast<Eigen::Index>(equalities.size()));
  for (std::size_t i = 0; i < equalities.size(); ++i) {
    double v = -equalities[i].rhs;
    for (const auto& t : equalities[i].terms) v += t.coefficient * x[t.variable];
    r[static_cast<Eigen::Index>(i)] = v;
  }
  return r;
}

bool operator==(const ConicProblem& a, const ConicProblem& b) {
  return a.num_variables == b.num_variables && a.objective.size() == b.objective.size() &&
         (a.objective.array() == b.objective.array()).all() && a.psd_blocks == b.psd_blocks &&
         a.equalities == b.equalities && a.layout == b.layout;
}

std::string_view to_string(SolverStatus status) {
  switch (status) {
    case SolverStatus::kOptimal: return "Optimal";
    case SolverStatus::kInfeasible: return "Infeasible";
    case SolverStatus::kMaxIterations: return "MaxIterations";
  }
  return "Unknown";
}

ConicProblem build_reduced(const Eigen::VectorXcd& y_merged, const SupportSet& support,
                           std::int64_t order) {
  return build_dual(y_merged, support, order, SdpForm::kReduced);
}

ConicProblem build_full(const Eigen::VectorXcd& y_merged, const SupportSet& support,
                        std::int64_t order) {
  return build_dual(y_merged, support, order, SdpForm::kFull);
}

ConicProblem build_problem(SdpForm form, const Eigen::VectorXcd& y_merged,
                           const SupportSet& support, std::int64_t order) {
  return build_dual(y_merged, support, order, form);
}

ConicProblem build_brl_scaling(const SparsePolynomial& poly, std::int64_t order, SdpForm form) {
  const int n = static_cast<int>(poly.support.size());
  if (poly.coeffs.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "coefficient count differs from support size");
  }
  const int gram_dim = form == SdpForm::kReduced ? n : checked_dim(order, "full Gram");
  std::vector<DifferenceConstraint> constraints =
      form == SdpForm::kReduced ? brl_constraints(poly.support, order).equalities
                                : dense_constraints(gram_dim);
  if (form == SdpForm::kFull && (poly.support.empty() || poly.support.back() >= order)) {
    throw Error(ErrorCode::kDimensionMismatch, "support exceeds polynomial order");
  }

  std::vector<ComplexAffine> column(static_cast<std::size_t>(gram_dim));
  for (int p = 0; p < n; ++p) {
    const int row = form == SdpForm::kReduced ? p : static_cast<int>(poly.support[p]);
    const std::complex<double> u = poly.coeffs[p];
    if (u.real() != 0.0) column[row].re = {{0, u.real()}};
    if (u.imag() != 0.0) column[row].im = {{0, u.imag()}};
  }
  ConicProblem problem = assemble(gram_dim, 1, {{"t", 0, 1}}, std::move(column), constraints);
  problem.objective[0] = 1.0;
  return problem;
}

Eigen::VectorXcd dual_vector(const ConicProblem& problem, const Eigen::VectorXd& x) {
  const VariableSpan& re = problem.span("c_re");
  const VariableSpan& im = problem.span("c_im");
  Eigen::VectorXcd c(re.size);
  for (int p = 0; p < re.size; ++p) c[p] = {x[re.offset + p], x[im.offset + p]};
  return c;
}

HermitianMatrix gram_matrix(const ConicProblem& problem, const Eigen::VectorXd& x) {
  const VariableSpan& re = problem.span("gram_re");
  const VariableSpan& im = problem.span("gram_im");
  int dim = 0;
  while (dim * (dim + 1) / 2 < re.size) ++dim;
  HermitianMatrix g(dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double r = x[re.offset + i * (i + 1) / 2 + j];
      const double m = i > j ? x[im.offset + i * (i - 1) / 2 + j] : 0.0;
      g.set(i, j, {r, m});
    }
  }
  return g;
}

Eigen::MatrixXd embed_hermitian(const Eigen::MatrixXcd& m) {
  const Eigen::Index n = m.rows();
  Eigen::MatrixXd out(2 * n, 2 * m.cols());
  out.topLeftCorner(n, m.cols()) = m.real();
  out.topRightCorner(n, m.cols()) = -m.imag();
  out.bottomLeftCorner(n, m.cols()) = m.imag();
  out.bottomRightCorner(n, m.cols()) = m.real();
  return out;
}

double dual_objective_check(const ConicSolution& solution,
                            std::span<const std::complex<double>> amplitudes) {
  double tv = 0.0;
  for (const auto& a : amplitudes) tv += std::abs(a);
  return std::abs(tv - solution.objective_value);
}

void write_conic_text(std::ostream& os, const ConicProblem& problem) {
  const auto old_precision = os.precision(17);
  os << "mrss-conic 1\n";
  os << "variables " << problem.num_variables << "\n";
  os << "layout " << problem.layout.size() << "\n";
  for (const auto& s : problem.layout) os << s.name << " " << s.offset << " " << s.size << "\n";
  int nnz = 0;
  for (Eigen::Index i = 0; i < problem.objective.size(); ++i) nnz += problem.objective[i] != 0.0;
  os << "maximize " << nnz << "\n";
  for (Eigen::Index i = 0; i < problem.objective.size(); ++i) {
    if (problem.objective[i] != 0.0) os << i << " " << problem.objective[i] << "\n";
  }
  os << "equalities " << problem.equalities.size() << "\n";
  for (const auto& eq : problem.equalities) {
    os << eq.rhs << " " << eq.terms.size();
    for (const auto& t : eq.terms) os << " " << t.variable << " " << t.coefficient;
    os << "\n";
  }
  os << "psd_blocks " << problem.psd_blocks.size() << "\n";
  for (const auto& b : problem.psd_blocks) {
    os << "psd " << b.dimension << " " << b.entries.size() << " "
       << (b.hermitian_embedding ? "hermitian" : "real") << "\n";
    for (const auto& e : b.entries) {
      os << e.row << " " << e.col << " " << e.constant << " " << e.terms.size();
      for (const auto& t : e.terms) os << " " << t.variable << " " << t.coefficient;
      os << "\n";
    }
  }
  os.precision(old_precision);
}

}  // namespace mrss
