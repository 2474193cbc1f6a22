#include "mrss/common_grid.h"

#include <algorithm>
#include <limits>
#include <map>
#include <string>

#include "mrss/errors.h"

namespace mrss {
namespace {

std::int64_t checked(WideInt v, const char* what) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    throw Error(ErrorCode::kArithmeticOverflow, std::string(what) + " exceeds int64 range");
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

CommonGrid find_common_grid(std::span<const SamplingGrid> grids,
                            const CommonGridOptions& options) {
  if (grids.empty()) throw Error(ErrorCode::kInvalidInput, "no sampling grids");
  for (const auto& g : grids) g.validate();

  // F0 = lcm(rate numerators) / gcd(rate denominators).
  std::int64_t num_lcm = 1;
  std::int64_t den_gcd = 0;
  for (const auto& g : grids) {
    num_lcm = lcm(num_lcm, g.rate.num());
    den_gcd = gcd(den_gcd, g.rate.den());
  }
  const Rational base_rate(num_lcm, den_gcd);

  std::vector<std::int64_t> base_mult;
  base_mult.reserve(grids.size());
  for (const auto& g : grids) {
    Rational ratio = base_rate / g.rate;
    base_mult.push_back(ratio.num());  // integer by construction
  }

  // Scaled delays must agree modulo 1: k * (L_j d_j - L_0 d_0) in Z for all j.
  const Rational ref = Rational(base_mult[0]) * grids[0].delay;
  std::int64_t k = 1;
  for (std::size_t j = 1; j < grids.size(); ++j) {
    Rational diff = Rational(base_mult[j]) * grids[j].delay - ref;
    WideInt next = static_cast<WideInt>(k) / gcd(k, diff.den()) * diff.den();
    if (next > options.max_multiplier) {
      k = options.max_multiplier + 1;
      break;
    }
    k = static_cast<std::int64_t>(next);
  }
  if (k > options.max_multiplier) {
    throw Error(ErrorCode::kNoCommonGrid,
                "required rate multiplier exceeds bound " +
                    std::to_string(options.max_multiplier));
  }

  CommonGrid cg;
  cg.multipliers.resize(grids.size());
  cg.offsets.resize(grids.size());
  std::vector<Rational> scaled(grids.size());
  for (std::size_t j = 0; j < grids.size(); ++j) {
    cg.multipliers[j] = checked(static_cast<WideInt>(k) * base_mult[j], "multiplier");
    scaled[j] = Rational(cg.multipliers[j]) * grids[j].delay;
  }
  Rational top = *std::max_element(scaled.begin(), scaled.end());
  for (std::size_t j = 0; j < grids.size(); ++j) {
    cg.offsets[j] = (scaled[j] - top).num();  // integer by choice of k
  }
  cg.rate = Rational(k) * base_rate;

  std::int64_t g = 0;
  for (std::size_t j = 0; j < grids.size(); ++j) {
    g = gcd(g, cg.multipliers[j]);
    g = gcd(g, cg.offsets[j]);
  }
  if (g > 1) {
    for (std::size_t j = 0; j < grids.size(); ++j) {
      cg.multipliers[j] /= g;
      cg.offsets[j] /= g;
    }
    cg.rate /= Rational(g);
  }
  cg.delay = Rational(cg.multipliers[0]) * grids[0].delay - Rational(cg.offsets[0]);

  WideInt last = 0;
  for (std::size_t j = 0; j < grids.size(); ++j) {
    WideInt hit = static_cast<WideInt>(cg.multipliers[j]) * (grids[j].count - 1) - cg.offsets[j];
    last = std::max(last, hit);
  }
  cg.count = checked(last + 1, "common grid count");
  return cg;
}

std::ptrdiff_t SupportSet::position_of(std::int64_t index) const {
  auto it = std::lower_bound(indices.begin(), indices.end(), index);
  if (it == indices.end() || *it != index) return -1;
  return it - indices.begin();
}

SupportSet support_set(std::span<const SamplingGrid> grids, const CommonGrid& grid) {
  if (grid.multipliers.size() != grids.size() || grid.offsets.size() != grids.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "common grid does not match grid set");
  }
  std::map<std::int64_t, std::vector<SampleRef>> hits;
  for (std::size_t j = 0; j < grids.size(); ++j) {
    for (std::int64_t k = 0; k < grids[j].count; ++k) {
      std::int64_t index = grid.multipliers[j] * k - grid.offsets[j];
      hits[index].push_back({static_cast<int>(j), k});
    }
  }
  SupportSet sup;
  sup.indices.reserve(hits.size());
  sup.sources.reserve(hits.size());
  for (auto& [index, refs] : hits) {
    sup.indices.push_back(index);
    sup.sources.push_back(std::move(refs));
  }
  return sup;
}

Eigen::VectorXcd merge_collisions(const Observations& obs, const SupportSet& support,
                                  double tolerance) {
  Eigen::VectorXcd merged(static_cast<Eigen::Index>(support.size()));
  for (std::size_t p = 0; p < support.size(); ++p) {
    const auto& refs = support.sources[p];
    if (refs.empty()) throw Error(ErrorCode::kInvalidInput, "support index without source");
    auto value_of = [&](const SampleRef& r) {
      if (r.grid < 0 || static_cast<std::size_t>(r.grid) >= obs.size() ||
          r.sample >= obs[r.grid].size()) {
        throw Error(ErrorCode::kDimensionMismatch, "observation missing for support source");
      }
      return obs[r.grid][r.sample];
    };
    const std::complex<double> first = value_of(refs.front());
    for (std::size_t i = 1; i < refs.size(); ++i) {
      const std::complex<double> other = value_of(refs[i]);
      if (std::abs(other - first) > tolerance * std::max(1.0, std::abs(first))) {
        throw Error(ErrorCode::kInconsistentObservations,
                    "samples (" + std::to_string(refs.front().grid) + "," +
                        std::to_string(refs.front().sample) + ") and (" +
                        std::to_string(refs[i].grid) + "," + std::to_string(refs[i].sample) +
                        ") share common index " + std::to_string(support.indices[p]) +
                        " but differ by " + std::to_string(std::abs(other - first)));
      }
    }
    merged[static_cast<Eigen::Index>(p)] = first;
  }
  return merged;
}

}  // namespace mrss
