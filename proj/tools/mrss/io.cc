#include "io.h"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "mrss/errors.h"

namespace mrss::cli {
namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::kParseError, what); }

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_error(std::string("missing field '") + key + "'");
  return j.at(key);
}

Rational rational_from_json(const Json& j, const char* what) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  parse_error(std::string(what) + " must be a \"p/q\" string or an integer");
}

std::complex<double> complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    parse_error("complex values are [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json complex_to_json(std::complex<double> v) { return Json::array({v.real(), v.imag()}); }

}  // namespace

Json grid_to_json(const SamplingGrid& grid) {
  return Json{{"rate", grid.rate.to_string()}, {"delay", grid.delay.to_string()}, {"count", grid.count}};
}

SamplingGrid grid_from_json(const Json& j) {
  SamplingGrid g;
  g.rate = rational_from_json(require(j, "rate"), "rate");
  g.delay = rational_from_json(require(j, "delay"), "delay");
  const Json& count = require(j, "count");
  if (!count.is_number_integer()) parse_error("count must be an integer");
  g.count = count.get<std::int64_t>();
  g.validate();
  return g;
}

Scenario parse_scenario(const Json& doc) {
  if (!doc.is_object()) parse_error("scenario must be a JSON object");
  Scenario s;
  const Json& grids = require(doc, "grids");
  if (!grids.is_array() || grids.empty()) parse_error("grids must be a non-empty array");
  for (const auto& g : grids) s.grids.push_back(grid_from_json(g));

  if (doc.contains("signal")) {
    const Json& sig = doc.at("signal");
    SpikeSignal signal;
    for (const auto& f : require(sig, "frequencies")) {
      if (!f.is_number()) parse_error("frequencies must be numbers");
      signal.frequencies.push_back(f.get<double>());
    }
    for (const auto& a : require(sig, "amplitudes")) signal.amplitudes.push_back(complex_from_json(a));
    signal.validate();
    s.signal = std::move(signal);
  }
  if (doc.contains("observations")) {
    const Json& obs = doc.at("observations");
    if (!obs.is_array()) parse_error("observations must be an array per grid");
    Observations out;
    for (const auto& y : obs) {
      if (!y.is_array()) parse_error("observations must be an array per grid");
      Eigen::VectorXcd v(static_cast<Eigen::Index>(y.size()));
      for (std::size_t k = 0; k < y.size(); ++k) v[static_cast<Eigen::Index>(k)] = complex_from_json(y[k]);
      out.push_back(std::move(v));
    }
    validate_observations(out, s.grids);
    s.observations = std::move(out);
  }
  if (!s.signal && !s.observations) parse_error("scenario needs a signal or observations");
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_integer()) parse_error("seed must be an integer");
    s.seed = doc.at("seed").get<std::int64_t>();
  }
  if (doc.contains("solver")) {
    if (!doc.at("solver").is_object()) parse_error("solver must be an object");
    s.solver = doc.at("solver");
  }
  return s;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidInput, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    parse_error("'" + path + "': " + e.what());
  }
}

Scenario load_scenario(const std::string& path) { return parse_scenario(read_json_file(path)); }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidInput, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::kInvalidInput, "write failed for '" + path + "'");
}

Json observations_to_json(const std::vector<SamplingGrid>& grids, const Observations& obs,
                          std::optional<std::int64_t> seed) {
  Json doc;
  doc["grids"] = Json::array();
  for (const auto& g : grids) doc["grids"].push_back(grid_to_json(g));
  doc["observations"] = Json::array();
  for (const auto& y : obs) {
    Json row = Json::array();
    for (auto v : y) row.push_back(complex_to_json(v));
    doc["observations"].push_back(std::move(row));
  }
  if (seed) doc["seed"] = *seed;
  return doc;
}

Observations scenario_observations(const Scenario& scenario) {
  if (scenario.observations) return *scenario.observations;
  return sample(*scenario.signal, scenario.grids);
}

void apply_solver_overrides(const Json& o, SolverConfig& config) {
  for (const auto& [key, value] : o.items()) {
    if (key == "eps_primal" && value.is_number()) {
      config.eps_primal = value.get<double>();
    } else if (key == "eps_dual" && value.is_number()) {
      config.eps_dual = value.get<double>();
    } else if (key == "eps_gap" && value.is_number()) {
      config.eps_gap = value.get<double>();
    } else if (key == "max_iters" && value.is_number_integer()) {
      config.max_iters = value.get<int>();
    } else if (key == "over_relaxation" && value.is_number()) {
      config.over_relaxation = value.get<double>();
    } else if (key == "scaling" && value.is_string()) {
      const auto v = value.get<std::string>();
      if (v == "ruiz") {
        config.scaling = Scaling::kRuiz;
      } else if (v == "none") {
        config.scaling = Scaling::kNone;
      } else {
        parse_error("scaling must be \"ruiz\" or \"none\"");
      }
    } else {
      parse_error("unknown or mistyped solver option '" + key + "'");
    }
  }
  config.validate();
}

Json estimate_to_json(const EstimatorResult& r, bool timing) {
  Json doc;
  doc["frequencies"] = r.estimate.frequencies;
  doc["amplitudes_re_im"] = Json::array();
  for (auto a : r.estimate.amplitudes) doc["amplitudes_re_im"].push_back(complex_to_json(a));
  doc["objective"] = r.solution.objective_value;
  doc["certificate_margin"] = r.estimate.certificate_margin;
  doc["residual"] = r.estimate.residual;
  doc["solver_status"] = std::string(to_string(r.solution.status));
  doc["iterations"] = r.solution.iterations;
  doc["wall_ms"] = timing ? Json(r.wall_ms) : Json(nullptr);
  doc["common_grid"] = {{"rate", r.common.rate.to_string()},
                        {"delay", r.common.delay.to_string()},
                        {"count", r.common.count},
                        {"support_size", r.support.size()}};
  doc["separation"] = {{"satisfied", r.separation.satisfied},
                       {"min_separation", std::isfinite(r.separation.min_separation)
                                              ? Json(r.separation.min_separation)
                                              : Json(nullptr)},
                       {"required", std::isfinite(r.separation.required) ? Json(r.separation.required)
                                                                         : Json(nullptr)}};
  return doc;
}

void write_certificate_csv(std::ostream& os, const SparsePolynomial& q, std::int64_t order,
                           int oversampling) {
  const std::int64_t points = std::max<std::int64_t>(16, oversampling * order);
  const Eigen::VectorXcd v = q.evaluate_on_grid(points);
  os << "omega,abs_Q\n";
  os << std::setprecision(17);
  for (std::int64_t m = 0; m < points; ++m) {
    os << 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(points) << ','
       << std::abs(v[m]) << '\n';
  }
}

void write_certificate_svg(std::ostream& os, const SparsePolynomial& q, std::int64_t order,
                           int oversampling) {
  const std::int64_t points = std::max<std::int64_t>(16, oversampling * order);
  const Eigen::VectorXcd v = q.evaluate_on_grid(points);
  constexpr double kWidth = 800, kHeight = 300, kPad = 30;
  const double top = std::max(1.05, v.cwiseAbs().maxCoeff() * 1.05);
  auto px = [&](double w) { return kPad + (kWidth - 2 * kPad) * w / (2.0 * std::numbers::pi); };
  auto py = [&](double a) { return kHeight - kPad - (kHeight - 2 * kPad) * a / top; };

  os << std::fixed << std::setprecision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(2 * std::numbers::pi) << "\" y2=\""
     << py(0) << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << px(0) << "\" y1=\"" << py(1) << "\" x2=\"" << px(2 * std::numbers::pi) << "\" y2=\""
     << py(1) << "\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n";
  os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (std::int64_t m = 0; m <= points; ++m) {
    const double w = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(points);
    os << px(w) << ',' << py(std::abs(v[m % points])) << (m < points ? " " : "");
  }
  os << "\"/>\n";
  os << "<text x=\"" << px(0) << "\" y=\"" << kHeight - 8 << "\" font-size=\"12\">0</text>\n";
  os << "<text x=\"" << px(2 * std::numbers::pi) - 20 << "\" y=\"" << kHeight - 8
     << "\" font-size=\"12\">2pi</text>\n";
  os << "<text x=\"4\" y=\"" << py(1) + 4 << "\" font-size=\"12\">1</text>\n";
  os << "</svg>\n";
}

}  // namespace mrss::cli
