#include "mrss/recover.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/SVD>

#include "mrss/errors.h"

namespace mrss {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double omega) {
  omega = std::fmod(omega, kTwoPi);
  if (omega < 0.0) omega += kTwoPi;
  if (omega >= kTwoPi) omega = 0.0;
  return omega;
}

double circular_distance(double a, double b) {
  double d = std::abs(wrap(a) - wrap(b));
  return std::min(d, kTwoPi - d);
}

std::int64_t grid_points(std::int64_t order, const LocalizeOptions& options) {
  return std::max<std::int64_t>(16, options.oversampling * std::max<std::int64_t>(order, 1));
}

// d|Q|^2/dw and d^2|Q|^2/dw^2.
std::pair<double, double> slope_and_curvature(const SparsePolynomial& q, double omega) {
  const auto u = q.evaluate_unit(omega);
  const double g = 2.0 * std::real(std::conj(u.value) * u.d1);
  const double h = 2.0 * (std::norm(u.d1) + std::real(std::conj(u.value) * u.d2));
  return {g, h};
}

// Root of the slope inside [lo, hi] by Newton steps that fall back to
// bisection whenever they leave the bracket.
double polish(const SparsePolynomial& q, double lo, double hi, double start, double tol) {
  double g_lo = slope_and_curvature(q, lo).first;
  double g_hi = slope_and_curvature(q, hi).first;
  if (!(g_lo > 0.0 && g_hi < 0.0)) {
    // No bracketed maximum; plain Newton from the start point, kept local.
    double w = start;
    for (int it = 0; it < 50; ++it) {
      auto [g, h] = slope_and_curvature(q, w);
      if (h >= 0.0 || g == 0.0) break;
      const double step = -g / h;
      const double next = std::clamp(w + step, lo, hi);
      if (std::abs(next - w) < tol) return next;
      w = next;
    }
    return w;
  }
  double w = start;
  for (int it = 0; it < 200; ++it) {
    auto [g, h] = slope_and_curvature(q, w);
    if (g > 0.0) {
      lo = w;
    } else if (g < 0.0) {
      hi = w;
    } else {
      return w;
    }
    double next = (h < 0.0) ? w - g / h : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - w) < tol || hi - lo < tol) return next;
    w = next;
  }
  return w;
}

}  // namespace

SparsePolynomial dual_polynomial(const Eigen::VectorXcd& c, const SupportSet& support) {
  if (c.size() != static_cast<Eigen::Index>(support.size())) {
    throw Error(ErrorCode::kDimensionMismatch, "dual vector does not match the support");
  }
  return SparsePolynomial{support.indices, c};
}

std::vector<double> localize(const SparsePolynomial& q, std::int64_t order,
                             const LocalizeOptions& options) {
  const std::int64_t points = grid_points(order, options);
  const Eigen::VectorXd power = q.evaluate_on_grid(points).cwiseAbs2();
  const double threshold = (1.0 - options.threshold) * (1.0 - options.threshold);

  const auto above = (power.array() >= threshold).count();
  if (static_cast<double>(above) > options.degenerate_fraction * static_cast<double>(points)) {
    throw Error(ErrorCode::kDegenerateCertificate,
                "|Q| reaches one on " + std::to_string(above) + " of " +
                    std::to_string(points) + " grid points");
  }

  // Every grid local maximum is polished; the threshold applies afterwards
  // since a narrow peak can fall well below one between grid points.
  const double h = kTwoPi / static_cast<double>(points);
  std::vector<std::pair<double, double>> peaks;  // (omega, |Q|^2)
  double top = 0.0;
  for (std::int64_t m = 0; m < points; ++m) {
    const double here = power[m];
    const double left = power[(m + points - 1) % points];
    const double right = power[(m + 1) % points];
    if (!(here >= left && here > right)) continue;
    const double start = h * static_cast<double>(m);
    const double w = wrap(polish(q, start - h, start + h, start, options.polish_tolerance));
    const double value = std::max(here, std::norm(q.evaluate_unit(w).value));
    top = std::max(top, value);
    if (value >= threshold) peaks.emplace_back(w, value);
  }
  if (peaks.empty()) {
    throw Error(ErrorCode::kNoCertificate,
                "max |Q| = " + std::to_string(std::sqrt(top)) +
                    " stays below the peak threshold");
  }

  std::sort(peaks.begin(), peaks.end());
  const double radius = kTwoPi / (static_cast<double>(options.merge_divisor) *
                                  static_cast<double>(std::max<std::int64_t>(order, 1)));
  std::vector<std::pair<double, double>> merged;
  for (const auto& p : peaks) {
    if (!merged.empty() && circular_distance(merged.back().first, p.first) < radius) {
      if (p.second > merged.back().second) merged.back() = p;
    } else {
      merged.push_back(p);
    }
  }
  if (merged.size() > 1 &&
      circular_distance(merged.front().first, merged.back().first) < radius) {
    if (merged.back().second > merged.front().second) merged.front() = merged.back();
    merged.pop_back();
    std::sort(merged.begin(), merged.end());
  }

  std::vector<double> out;
  out.reserve(merged.size());
  for (const auto& p : merged) out.push_back(p.first);
  return out;
}

double certificate_margin(const SparsePolynomial& q, std::int64_t order,
                          std::span<const double> peaks, const LocalizeOptions& options) {
  const std::int64_t points = grid_points(order, options);
  const Eigen::VectorXd magnitude = q.evaluate_on_grid(points).cwiseAbs();
  const double exclusion = std::numbers::pi / static_cast<double>(std::max<std::int64_t>(order, 1));
  double worst = 0.0;
  bool any = false;
  for (std::int64_t m = 0; m < points; ++m) {
    const double w = kTwoPi * static_cast<double>(m) / static_cast<double>(points);
    const bool near = std::any_of(peaks.begin(), peaks.end(), [&](double p) {
      return circular_distance(p, w) <= exclusion;
    });
    if (near) continue;
    worst = std::max(worst, magnitude[m]);
    any = true;
  }
  return any ? 1.0 - worst : 1.0;
}

AmplitudeFit fit_amplitudes(std::span<const double> frequencies,
                            std::span<const SamplingGrid> grids, const Observations& obs,
                            double max_condition) {
  validate_observations(obs, grids);
  Eigen::Index rows = 0;
  for (const auto& g : grids) rows += g.count;
  const Eigen::Index cols = static_cast<Eigen::Index>(frequencies.size());

  Eigen::VectorXcd y(rows);
  Eigen::Index offset = 0;
  for (const auto& o : obs) {
    y.segment(offset, o.size()) = o;
    offset += o.size();
  }

  AmplitudeFit fit;
  const double y_norm = y.norm();
  if (cols == 0) {
    fit.residual = y_norm > 0.0 ? 1.0 : 0.0;
    return fit;
  }
  if (cols > rows) {
    throw Error(ErrorCode::kIllConditioned, "more frequencies than samples");
  }

  Eigen::MatrixXcd design(rows, cols);
  for (Eigen::Index l = 0; l < cols; ++l) {
    SpikeSignal unit{{frequencies[l]}, {1.0}};
    offset = 0;
    for (const auto& g : grids) {
      design.block(offset, l, g.count, 1) = apply_forward(unit, g);
      offset += g.count;
    }
  }

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double smax = sv[0];
  const double smin = sv[sv.size() - 1];
  fit.condition_number = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  if (!(fit.condition_number <= max_condition)) {
    throw Error(ErrorCode::kIllConditioned,
                "amplitude design matrix condition number " +
                    std::to_string(fit.condition_number));
  }
  const Eigen::VectorXcd alpha = svd.solve(y);
  fit.amplitudes.assign(alpha.data(), alpha.data() + alpha.size());
  const double misfit = (y - design * alpha).norm();
  fit.residual = y_norm > 0.0 ? misfit / y_norm : misfit;
  return fit;
}

SeparationReport check_separation(std::span<const double> frequencies, const Rational& rate,
                                  std::int64_t order) {
  SeparationReport report;
  report.required = order > 1 ? 4.0 / static_cast<double>(order - 1)
                              : std::numeric_limits<double>::infinity();
  if (frequencies.size() < 2) {
    report.min_separation = std::numeric_limits<double>::infinity();
    report.margin = std::numeric_limits<double>::infinity();
    report.relative_margin = std::numeric_limits<double>::infinity();
    report.satisfied = true;
    return report;
  }
  const double f = rate.to_double();
  std::vector<double> nu;
  nu.reserve(frequencies.size());
  for (double xi : frequencies) {
    double v = std::fmod(xi / f, 1.0);
    if (v < 0.0) v += 1.0;
    nu.push_back(v);
  }
  std::sort(nu.begin(), nu.end());
  double sep = 1.0 + nu.front() - nu.back();
  for (std::size_t i = 1; i < nu.size(); ++i) sep = std::min(sep, nu[i] - nu[i - 1]);
  report.min_separation = sep;
  report.margin = sep - report.required;
  report.relative_margin = sep / report.required - 1.0;
  report.satisfied = report.margin >= -1e-12;
  return report;
}

}  // namespace mrss
