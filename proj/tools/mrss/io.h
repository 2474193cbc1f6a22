#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrss/model.h"
#include "mrss/pipeline.h"
#include "mrss/solver.h"

namespace mrss::cli {

using Json = nlohmann::ordered_json;

/// Input of every command. A scenario carries a signal to simulate; an
/// observations file (output of `simulate`) carries the samples directly.
struct Scenario {
  std::vector<SamplingGrid> grids;
  std::optional<SpikeSignal> signal;
  std::optional<Observations> observations;
  std::optional<std::int64_t> seed;
  Json solver = Json::object();  // SolverConfig overrides
};

/// Throws Error(kParseError) on malformed documents and Error(kInvalidInput)
/// on invalid grids or signals.
Scenario parse_scenario(const Json& doc);
Scenario load_scenario(const std::string& path);

Json grid_to_json(const SamplingGrid& grid);
SamplingGrid grid_from_json(const Json& j);

Json observations_to_json(const std::vector<SamplingGrid>& grids, const Observations& obs,
                          std::optional<std::int64_t> seed);

/// Samples from the scenario: the stored observations, or the simulated
/// signal.
Observations scenario_observations(const Scenario& scenario);

/// Applies scenario overrides to a solver configuration.
void apply_solver_overrides(const Json& overrides, SolverConfig& config);

Json estimate_to_json(const EstimatorResult& result, bool timing);

/// omega, abs_Q on the localization grid.
void write_certificate_csv(std::ostream& os, const SparsePolynomial& q, std::int64_t order,
                           int oversampling);

/// Polyline plot of |Q(e^{i omega})| over [0, 2 pi) with the unit level.
void write_certificate_svg(std::ostream& os, const SparsePolynomial& q, std::int64_t order,
                           int oversampling);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace mrss::cli
