#include <gtest/gtest.h>

#include <complex>
#include <random>

#include "mrss/errors.h"
#include "mrss/model.h"
#include "oracles.h"

using namespace mrss;
using cd = std::complex<double>;

TEST(Model, ZeroFrequencyIsConstant) {
  const SpikeSignal sig{{0.0}, {1.0}};
  for (const auto& g : {SamplingGrid{Rational(1), Rational(0), 5}, SamplingGrid{Rational(3, 7), Rational(-5, 3), 9}}) {
    const auto y = apply_forward(sig, g);
    for (auto v : y) EXPECT_EQ(v, cd(1.0, 0.0));
  }
}

TEST(Model, QuarterPeriodRotation) {
  const SamplingGrid g{Rational(5, 2), Rational(0), 4};
  const auto y = apply_forward(SpikeSignal{{0.625}, {1.0}}, g);
  const cd expected[] = {1.0, {0, 1}, -1.0, {0, -1}};
  for (int k = 0; k < 4; ++k) EXPECT_LT(std::abs(y[k] - expected[k]), 1e-15);
}

TEST(Model, TwoSpikesMatchDirectEvaluation) {
  const std::vector<SamplingGrid> grids{{Rational(1), Rational(1, 2), 3}};
  const SpikeSignal sig{{0.2, 0.7}, {1.0, cd(0, 2)}};
  const auto y = sample(sig, grids);
  const auto ref = oracle::direct_samples(sig, grids);
  ASSERT_EQ(y.size(), 1u);
  EXPECT_LT((y[0] - ref[0]).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((apply_forward(sig, grids[0]) - y[0]).cwiseAbs().maxCoeff(), 0.0 + 1e-300);
}

TEST(Model, LargeIndexPhaseAccuracy) {
  const std::vector<SamplingGrid> grids{{Rational(7, 3), Rational(-11, 5), 5000}};
  const SpikeSignal sig{{1.234567, -0.9}, {cd(0.3, -1), 2.0}};
  const auto y = sample(sig, grids);
  const auto ref = oracle::direct_samples(sig, grids);
  EXPECT_LT((y[0] - ref[0]).cwiseAbs().maxCoeff(), 1e-11);
}

TEST(Model, Linearity) {
  const std::vector<SamplingGrid> grids{{Rational(1), Rational(0), 6}, {Rational(3, 2), Rational(1, 3), 5}};
  const SpikeSignal a{{0.1, 0.45}, {cd(1, 1), 0.5}};
  const SpikeSignal b{{0.8}, {cd(-2, 0.3)}};
  const cd scale(0.7, -1.1);
  SpikeSignal combined;
  for (std::size_t l = 0; l < a.size(); ++l) {
    combined.frequencies.push_back(a.frequencies[l]);
    combined.amplitudes.push_back(scale * a.amplitudes[l]);
  }
  combined.frequencies.push_back(b.frequencies[0]);
  combined.amplitudes.push_back(b.amplitudes[0]);
  const auto ya = sample(a, grids), yb = sample(b, grids), yc = sample(combined, grids);
  for (std::size_t j = 0; j < grids.size(); ++j) {
    EXPECT_LT((yc[j] - (scale * ya[j] + yb[j])).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Model, DelayShift) {
  const SpikeSignal sig{{0.31, 1.7}, {cd(1, -0.5), cd(0, 2)}};
  const SamplingGrid base{Rational(4, 3), Rational(-2, 7), 8};
  const SamplingGrid shifted{base.rate, base.delay + Rational(1), base.count + 1};
  const auto y = apply_forward(sig, base);
  const auto z = apply_forward(sig, shifted);
  EXPECT_LT((z.tail(base.count) - y).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Model, ConjugateSymmetry) {
  const std::vector<SamplingGrid> grids{{Rational(2), Rational(1, 4), 7}};
  const SpikeSignal sig{{0.3, 0.55}, {cd(1, 2), cd(-0.5, 0.1)}};
  SpikeSignal mirrored{{-0.3, -0.55}, {std::conj(sig.amplitudes[0]), std::conj(sig.amplitudes[1])}};
  EXPECT_LT((sample(mirrored, grids)[0] - sample(sig, grids)[0].conjugate()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Model, Validation) {
  EXPECT_THROW((SamplingGrid{Rational(0), Rational(0), 3}.validate()), Error);
  EXPECT_THROW((SamplingGrid{Rational(1), Rational(0), 0}.validate()), Error);
  EXPECT_THROW((SpikeSignal{{0.1}, {}}.validate()), Error);
  EXPECT_THROW((SpikeSignal{{0.1}, {0.0}}.validate()), Error);
  EXPECT_NO_THROW(SpikeSignal{}.validate());
  const std::vector<SamplingGrid> grids{{Rational(1), Rational(0), 3}};
  EXPECT_THROW(validate_observations(Observations{Eigen::VectorXcd::Zero(2)}, grids), Error);
  Observations bad{Eigen::VectorXcd::Zero(3)};
  bad[0][1] = cd(std::nan(""), 0);
  EXPECT_THROW(validate_observations(bad, grids), Error);
}
