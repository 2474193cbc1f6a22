#include "oracles.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <Eigen/Eigenvalues>

namespace mrss::oracle {
namespace {

constexpr long double kTwoPiL = 2.0L * std::numbers::pi_v<long double>;

Rational instant(const SamplingGrid& g, std::int64_t k) { return (Rational(k) - g.delay) / g.rate; }

}  // namespace

Rational base_rate(std::span<const SamplingGrid> grids, std::int64_t max_multiple) {
  // F0 is a multiple of rate_0 and an integer multiple of every rate.
  for (std::int64_t m = 1; m <= max_multiple; ++m) {
    const Rational f = grids[0].rate * Rational(m);
    bool ok = true;
    for (const auto& g : grids) ok = ok && (f / g.rate).is_integer();
    if (ok) return f;
  }
  throw NotFoundWithinBound("base rate not found");
}

CommonGrid common_grid(std::span<const SamplingGrid> grids, std::int64_t k_max) {
  const Rational f0 = base_rate(grids);
  for (std::int64_t k = 1; k <= k_max; ++k) {
    const Rational rate = f0 * Rational(k);
    std::optional<Rational> phase;
    Rational lo, hi;
    bool ok = true;
    bool first = true;
    for (const auto& g : grids) {
      for (std::int64_t s = 0; s < g.count && ok; ++s) {
        const Rational u = rate * instant(g, s);
        if (!phase) phase = u.frac();
        ok = u.frac() == *phase;
        if (first || u < lo) lo = u;
        if (first || u > hi) hi = u;
        first = false;
      }
    }
    if (!ok) continue;
    CommonGrid cg;
    cg.rate = rate;
    cg.delay = -lo;  // index of the earliest instant is 0
    cg.count = (hi - lo).floor() + 1;
    for (const auto& g : grids) {
      const Rational l = rate / g.rate;
      cg.multipliers.push_back(l.num());
      cg.offsets.push_back((l * g.delay - cg.delay).num());
    }
    return cg;
  }
  throw NotFoundWithinBound("no common grid up to k_max");
}

bool supports_all(std::span<const SamplingGrid> grids, const Rational& rate, const Rational& delay,
                  std::int64_t count) {
  for (const auto& g : grids) {
    for (std::int64_t s = 0; s < g.count; ++s) {
      const Rational kappa = rate * instant(g, s) + delay;
      if (!kappa.is_integer() || kappa.num() < 0 || kappa.num() >= count) return false;
    }
  }
  return true;
}

std::vector<std::int64_t> instant_indices(std::span<const SamplingGrid> grids,
                                          const CommonGrid& cg) {
  std::vector<std::int64_t> out;
  for (const auto& g : grids) {
    for (std::int64_t s = 0; s < g.count; ++s) {
      const Rational kappa = cg.rate * instant(g, s) + cg.delay;
      out.push_back(kappa.is_integer() ? kappa.num() : -1);
    }
  }
  return out;
}

Observations direct_samples(const SpikeSignal& signal, std::span<const SamplingGrid> grids) {
  Observations obs;
  for (const auto& g : grids) {
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(g.count);
    for (std::int64_t s = 0; s < g.count; ++s) {
      const long double t = instant(g, s).to_long_double();
      std::complex<long double> acc = 0;
      for (std::size_t l = 0; l < signal.size(); ++l) {
        const long double phase = kTwoPiL * static_cast<long double>(signal.frequencies[l]) * t;
        const std::complex<long double> a(signal.amplitudes[l].real(), signal.amplitudes[l].imag());
        acc += a * std::complex<long double>(std::cos(phase), std::sin(phase));
      }
      y[s] = std::complex<double>(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
    }
    obs.push_back(y);
  }
  return obs;
}

std::complex<double> evaluate(std::span<const std::int64_t> support, const Eigen::VectorXcd& u,
                              double omega) {
  std::complex<long double> acc = 0;
  for (std::size_t p = 0; p < support.size(); ++p) {
    const long double phase = static_cast<long double>(omega) * static_cast<long double>(support[p]);
    acc += std::complex<long double>(u[p].real(), u[p].imag()) *
           std::complex<long double>(std::cos(phase), std::sin(phase));
  }
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

double poly_infnorm(std::span<const std::int64_t> support, const Eigen::VectorXcd& u) {
  constexpr int kPoints = 1 << 16;
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  std::vector<double> mag(kPoints);
  for (int m = 0; m < kPoints; ++m) mag[m] = std::abs(evaluate(support, u, kTwoPi * m / kPoints));

  std::vector<std::pair<double, int>> maxima;
  for (int m = 0; m < kPoints; ++m) {
    const double l = mag[(m + kPoints - 1) % kPoints];
    const double r = mag[(m + 1) % kPoints];
    if (mag[m] >= l && mag[m] >= r) maxima.emplace_back(mag[m], m);
  }
  std::sort(maxima.rbegin(), maxima.rend());
  double best = maxima.empty() ? *std::max_element(mag.begin(), mag.end()) : maxima[0].first;

  const double h = kTwoPi / kPoints;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (std::size_t c = 0; c < std::min<std::size_t>(8, maxima.size()); ++c) {
    double a = kTwoPi * maxima[c].second / kPoints - h;
    double b = a + 2.0 * h;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = std::abs(evaluate(support, u, x1)), f2 = std::abs(evaluate(support, u, x2));
    for (int it = 0; it < 80; ++it) {
      if (f1 > f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - phi * (b - a);
        f1 = std::abs(evaluate(support, u, x1));
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + phi * (b - a);
        f2 = std::abs(evaluate(support, u, x2));
      }
    }
    best = std::max({best, f1, f2});
  }
  return best;
}

double poly_infnorm_critical(const Eigen::VectorXcd& q) {
  const int n = static_cast<int>(q.size()) - 1;
  if (n <= 0) return q.size() ? std::abs(q[0]) : 0.0;
  // P(z) = sum_{a,b} q_a conj(q_b) z^{a - b + n}
  Eigen::VectorXcd p = Eigen::VectorXcd::Zero(2 * n + 1);
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b) p[a - b + n] += q[a] * std::conj(q[b]);
  // W(z) = z P'(z) - n P(z), coefficient k is (k - n) p_k.
  Eigen::VectorXcd w(2 * n + 1);
  for (int k = 0; k <= 2 * n; ++k) w[k] = static_cast<double>(k - n) * p[k];
  int deg = 2 * n;
  while (deg > 0 && std::abs(w[deg]) < 1e-14) --deg;
  std::vector<std::complex<double>> candidates{1.0};
  if (deg > 0) {
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -w[i] / w[deg];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
    for (int i = 0; i < deg; ++i) {
      const auto z = es.eigenvalues()[i];
      if (std::abs(std::abs(z) - 1.0) < 1e-3) candidates.push_back(z / std::abs(z));
    }
  }
  double best = 0.0;
  for (auto z : candidates) {
    std::complex<double> v = 0.0;
    std::complex<double> zp = 1.0;
    for (int k = 0; k <= n; ++k, zp *= z) v += q[k] * zp;
    best = std::max(best, std::abs(v));
  }
  return best;
}

Eigen::VectorXcd dense_lift_adjoint(const Eigen::MatrixXcd& s, std::span<const std::int64_t> index_set,
                                    std::int64_t n) {
  Eigen::MatrixXcd lift = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t a = 0; a < index_set.size(); ++a)
    for (std::size_t b = 0; b < index_set.size(); ++b) lift(index_set[a], index_set[b]) = s(a, b);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
  for (std::int64_t row = 0; row < n; ++row)
    for (std::int64_t col = 0; col <= row; ++col) out[row - col] += lift(row, col);
  return out;
}

Eigen::VectorXcd autocorrelation_by_dft(const Eigen::VectorXcd& q, int points) {
  const int n = static_cast<int>(q.size());
  std::vector<double> power(points);
  for (int m = 0; m < points; ++m) {
    const double w = 2.0 * std::numbers::pi * m / points;
    std::complex<double> v = 0.0;
    for (int k = 0; k < n; ++k) v += q[k] * std::polar(1.0, w * k);
    power[m] = std::norm(v);
  }
  Eigen::VectorXcd r(n);
  for (int k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (int m = 0; m < points; ++m) acc += power[m] * std::polar(1.0, -2.0 * std::numbers::pi * m * k / points);
    r[k] = acc / static_cast<double>(points);
  }
  return r;
}

std::vector<std::int64_t> pair_differences(std::span<const std::int64_t> index_set) {
  std::set<std::int64_t> d;
  for (auto a : index_set)
    for (auto b : index_set)
      if (a >= b) d.insert(a - b);
  return {d.begin(), d.end()};
}

Eigen::MatrixXd psd_project_jacobi(const Eigen::MatrixXd& m) {
  using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const int n = static_cast<int>(m.rows());
  MatL a = (0.5 * (m + m.transpose())).cast<long double>();
  MatL v = MatL::Identity(n, n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    long double off = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) off += a(i, j) * a(i, j);
    if (off < 1e-36L) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300L) continue;
        const long double theta = (a(q, q) - a(p, p)) / (2 * a(p, q));
        const long double t = (theta >= 0 ? 1 : -1) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const long double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (int k = 0; k < n; ++k) {
          const long double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const long double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const long double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  MatL d = MatL::Zero(n, n);
  for (int i = 0; i < n; ++i) d(i, i) = std::max<long double>(a(i, i), 0);
  return (v * d * v.transpose()).cast<double>();
}

}  // namespace mrss::oracle
