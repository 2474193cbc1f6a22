#include <benchmark/benchmark.h>

#include <random>

#include "mrss/errors.h"
#include "mrss/pipeline.h"

using namespace mrss;

namespace {

// Delay-only family: (1, 0, n) and (1, b^-j - 1, n) for j = 2..m.
std::vector<SamplingGrid> delay_family(int b, int m, int n) {
  std::vector<SamplingGrid> grids{{Rational(1), Rational(0), n}};
  std::int64_t bj = b;
  for (int j = 2; j <= m; ++j) {
    bj *= b;
    grids.push_back({Rational(1), Rational(1, bj) - Rational(1), n});
  }
  return grids;
}

struct Prepared {
  CommonGrid common;
  SupportSet support;
  Eigen::VectorXcd merged;
};

Prepared prepare(int b, int m, int n) {
  const auto grids = delay_family(b, m, n);
  const SpikeSignal signal{{0.2}, {{1.0, 0.5}}};
  Prepared p;
  p.common = find_common_grid(grids);
  p.support = support_set(grids, p.common);
  p.merged = merge_collisions(sample(signal, grids), p.support);
  return p;
}

}  // namespace

static void BM_FindCommonGrid(benchmark::State& state) {
  const auto grids = delay_family(3, static_cast<int>(state.range(0)), 8);
  for (auto _ : state) benchmark::DoNotOptimize(find_common_grid(grids));
}
BENCHMARK(BM_FindCommonGrid)->DenseRange(1, 5);

static void BM_PsdProject(benchmark::State& state) {
  const auto n = state.range(0);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(n, n);
  for (auto& v : a.reshaped()) v = g(rng);
  a = (a + a.transpose()).eval();
  for (auto _ : state) benchmark::DoNotOptimize(psd_project(a));
}
BENCHMARK(BM_PsdProject)->RangeMultiplier(2)->Range(8, 128);

static void BM_ReducedSolve(benchmark::State& state) {
  const auto p = prepare(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 4);
  const ConicProblem problem = build_reduced(p.merged, p.support, p.common.count);
  for (auto _ : state) benchmark::DoNotOptimize(solve(problem));
  state.counters["n_star"] = static_cast<double>(p.common.count);
  state.counters["N_star"] = static_cast<double>(p.support.size());
}
BENCHMARK(BM_ReducedSolve)->ArgsProduct({{2, 3}, {1, 2, 3}})->Unit(benchmark::kMillisecond);

static void BM_FullSolve(benchmark::State& state) {
  const auto p = prepare(2, static_cast<int>(state.range(0)), 4);
  const ConicProblem problem = build_full(p.merged, p.support, p.common.count);
  for (auto _ : state) benchmark::DoNotOptimize(solve(problem));
  state.counters["n_star"] = static_cast<double>(p.common.count);
}
BENCHMARK(BM_FullSolve)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

static void BM_Localize(benchmark::State& state) {
  const auto order = state.range(0);
  SparsePolynomial q;
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (std::int64_t k = 0; k < order; k += 3) q.support.push_back(k);
  q.coeffs.resize(static_cast<Eigen::Index>(q.support.size()));
  for (auto& c : q.coeffs) c = {g(rng), g(rng)};
  const double peak = q.evaluate_on_grid(16 * order).cwiseAbs().maxCoeff();
  q.coeffs /= peak;
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(localize(q, order));
    } catch (const Error&) {
    }
  }
}
BENCHMARK(BM_Localize)->RangeMultiplier(4)->Range(16, 1024);

BENCHMARK_MAIN();
