#include "mrss/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>

namespace mrss {

double pulsation_to_frequency(double omega, const Rational& rate) {
  double cycles = std::fmod(-omega / (2.0 * std::numbers::pi), 1.0);
  if (cycles < 0.0) cycles += 1.0;
  if (cycles >= 1.0) cycles = 0.0;
  return cycles * rate.to_double();
}

EstimatorResult run_estimator(std::span<const SamplingGrid> grids, const Observations& obs,
                              const EstimatorConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  config.solver.validate();
  for (const auto& g : grids) g.validate();
  validate_observations(obs, grids);

  EstimatorResult r;
  r.common = find_common_grid(grids, config.grid);
  r.support = support_set(grids, r.common);
  r.merged = merge_collisions(obs, r.support, config.collision_tolerance);

  const ConicProblem problem =
      build_problem(config.form, r.merged, r.support, r.common.count);
  r.solution = solve(problem, config.solver);
  r.dual = dual_vector(problem, r.solution.variables);
  r.certificate = dual_polynomial(r.dual, r.support);

  auto finish = [&] {
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                    .count();
    return r;
  };
  if (!r.recovered()) return finish();

  if (r.merged.squaredNorm() == 0.0) {
    r.estimate.certificate_margin =
        certificate_margin(r.certificate, r.common.count, {}, config.localize);
    r.estimate.residual = 0.0;
    r.separation = check_separation({}, r.common.rate, r.common.count);
    return finish();
  }

  r.pulsations = localize(r.certificate, r.common.count, config.localize);

  std::vector<double> freqs;
  freqs.reserve(r.pulsations.size());
  for (double w : r.pulsations) freqs.push_back(pulsation_to_frequency(w, r.common.rate));
  std::sort(freqs.begin(), freqs.end());
  freqs.erase(std::unique(freqs.begin(), freqs.end()), freqs.end());

  const AmplitudeFit fit = fit_amplitudes(freqs, grids, obs, config.max_condition);
  r.estimate.frequencies = std::move(freqs);
  r.estimate.amplitudes = fit.amplitudes;
  r.estimate.residual = fit.residual;
  r.estimate.certificate_margin =
      certificate_margin(r.certificate, r.common.count, r.pulsations, config.localize);
  r.separation = check_separation(r.estimate.frequencies, r.common.rate, r.common.count);
  return finish();
}

}  // namespace mrss
