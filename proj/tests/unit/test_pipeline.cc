#include <gtest/gtest.h>

#include <numbers>

#include "mrss/errors.h"
#include "mrss/pipeline.h"

using namespace mrss;
using cd = std::complex<double>;

namespace {

const std::vector<SamplingGrid> kGrids{{Rational(1), Rational(0), 6}, {Rational(3, 2), Rational(1, 3), 6}};

}  // namespace

TEST(Pipeline, ZeroSignal) {
  const auto obs = sample(SpikeSignal{}, kGrids);
  const auto r = run_estimator(kGrids, obs);
  ASSERT_TRUE(r.recovered());
  EXPECT_NEAR(r.solution.objective_value, 0.0, 1e-7);
  EXPECT_TRUE(r.estimate.frequencies.empty());
  EXPECT_EQ(r.estimate.residual, 0.0);
}

TEST(Pipeline, SingleSpikeObjectiveIsModulus) {
  const SpikeSignal sig{{0.7}, {cd(0, 2)}};
  const auto r = run_estimator(kGrids, sample(sig, kGrids));
  ASSERT_TRUE(r.recovered());
  EXPECT_NEAR(r.solution.objective_value, 2.0, 1e-5);
  ASSERT_EQ(r.estimate.frequencies.size(), 1u);
  EXPECT_NEAR(r.estimate.frequencies[0], 0.7, 1e-6);
  EXPECT_LE(dual_objective_check(r.solution, r.estimate.amplitudes), 1e-5);
}

TEST(Pipeline, FullAndReducedAgreeOnObjective) {
  const SpikeSignal sig{{0.2, 1.9}, {cd(1, 0.5), cd(0, -2)}};
  const auto obs = sample(sig, kGrids);
  EstimatorConfig full;
  full.form = SdpForm::kFull;
  const auto a = run_estimator(kGrids, obs);
  const auto b = run_estimator(kGrids, obs, full);
  ASSERT_TRUE(a.recovered() && b.recovered());
  EXPECT_NEAR(a.solution.objective_value, b.solution.objective_value, 1e-6);
}

// Shifting every frequency by f_* multiplies the data by e^{-i 2 pi gamma_*}:
// frequencies are unchanged, amplitudes pick up that phase.
TEST(Pipeline, AliasingConsistency) {
  const SpikeSignal sig{{0.2, 1.9}, {cd(1, 0.5), cd(0, -2)}};
  const auto base = run_estimator(kGrids, sample(sig, kGrids));
  ASSERT_TRUE(base.recovered());
  const double fstar = base.common.rate.to_double();
  SpikeSignal shifted = sig;
  for (auto& f : shifted.frequencies) f += fstar;
  const auto r = run_estimator(kGrids, sample(shifted, kGrids));
  ASSERT_TRUE(r.recovered());
  ASSERT_EQ(r.estimate.frequencies.size(), base.estimate.frequencies.size());
  const cd phase = std::polar(1.0, -2.0 * std::numbers::pi * base.common.delay.to_double());
  for (std::size_t l = 0; l < r.estimate.frequencies.size(); ++l) {
    EXPECT_NEAR(r.estimate.frequencies[l], base.estimate.frequencies[l], 1e-7);
    EXPECT_LT(std::abs(r.estimate.amplitudes[l] - phase * base.estimate.amplitudes[l]), 1e-5);
  }
}

TEST(Pipeline, StageErrorsPropagate) {
  const std::vector<SamplingGrid> colliding{{Rational(1), Rational(0), 4}, {Rational(3, 2), Rational(0), 4}};
  auto obs = sample(SpikeSignal{{0.3}, {1.0}}, colliding);
  obs[0][0] += 0.5;
  try {
    run_estimator(colliding, obs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInconsistentObservations);
  }
  const std::vector<SamplingGrid> one{{Rational(1), Rational(0), 1}};
  try {
    run_estimator(one, sample(SpikeSignal{{0.3}, {1.0}}, one));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateCertificate);
  }
}

TEST(Pipeline, PulsationToFrequency) {
  EXPECT_EQ(pulsation_to_frequency(0.0, Rational(3)), 0.0);
  EXPECT_NEAR(pulsation_to_frequency(2.0 * std::numbers::pi * 0.75, Rational(2)), 0.5, 1e-15);
}
