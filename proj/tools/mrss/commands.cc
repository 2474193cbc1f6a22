#include "commands.h"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "io.h"
#include "mrss/errors.h"
#include "mrss/pipeline.h"

namespace mrss::cli {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNoCommonGrid:
      return kNoGrid;
    case ErrorCode::kNumericalBreakdown:
    case ErrorCode::kNoCertificate:
    case ErrorCode::kDegenerateCertificate:
    case ErrorCode::kIllConditioned:
      return kSolverFailure;
    default:
      return kUsage;
  }
}

void report_error(std::ostream& err, std::string_view code, const std::string& message) {
  err << Json{{"error", code}, {"message", message}}.dump() << '\n';
}

// Runs a command body and turns exceptions into an exit code and an error
// document on `err`.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    report_error(err, to_string(e.code()), e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    report_error(err, "InvalidInput", e.what());
    return kUsage;
  }
}

void emit(const Options& opts, std::ostream& out, const std::string& text) {
  if (opts.out.empty()) {
    out << text;
  } else {
    write_text_file(opts.out, text);
  }
}

std::string dump(const Json& doc) { return doc.dump(2) + '\n'; }

EstimatorConfig estimator_config(const Options& opts, const Scenario& scenario) {
  EstimatorConfig config;
  apply_solver_overrides(scenario.solver, config.solver);
  if (opts.eps) {
    config.solver.eps_primal = config.solver.eps_dual = config.solver.eps_gap = *opts.eps;
  }
  if (opts.max_iters) config.solver.max_iters = *opts.max_iters;
  config.solver.validate();
  return config;
}

Scenario require_scenario(const Options& opts) {
  if (opts.scenario.empty()) throw Error(ErrorCode::kInvalidInput, "--scenario is required");
  return load_scenario(opts.scenario);
}

Json rational_list(const std::vector<std::int64_t>& v) {
  Json out = Json::array();
  for (auto x : v) out.push_back(x);
  return out;
}

struct FormRun {
  ConicSolution solution;
  Eigen::VectorXcd dual;
  double ms = 0.0;
  int block_dim = 0;
};

FormRun run_form(SdpForm form, const Eigen::VectorXcd& merged, const SupportSet& support,
                 std::int64_t order, const SolverConfig& config) {
  FormRun r;
  const auto start = Clock::now();
  const ConicProblem problem = build_problem(form, merged, support, order);
  r.solution = solve(problem, config);
  r.ms = elapsed_ms(start);
  r.dual = dual_vector(problem, r.solution.variables);
  r.block_dim = form == SdpForm::kFull ? static_cast<int>(order) + 1 : static_cast<int>(support.size()) + 1;
  return r;
}

}  // namespace

int cmd_gridinfo(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario s = require_scenario(opts);
    const CommonGrid g = find_common_grid(s.grids);
    const SupportSet support = support_set(s.grids, g);
    std::int64_t total = 0;
    for (const auto& grid : s.grids) total += grid.count;

    Json doc;
    doc["rate"] = g.rate.to_string();
    doc["delay"] = g.delay.to_string();
    doc["n_star"] = g.count;
    doc["multipliers"] = rational_list(g.multipliers);
    doc["offsets"] = rational_list(g.offsets);
    doc["support"] = {{"size", support.size()},
                      {"first", support.indices.front()},
                      {"last", support.indices.back()},
                      {"indices", support.indices}};
    doc["N"] = total;
    doc["N_star"] = support.size();
    doc["full_block_dim"] = g.count + 1;
    doc["reduced_block_dim"] = support.size() + 1;
    emit(opts, out, dump(doc));
    return kOk;
  });
}

int cmd_simulate(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario s = require_scenario(opts);
    const Observations obs = scenario_observations(s);
    emit(opts, out, dump(observations_to_json(s.grids, obs, s.seed)));
    return kOk;
  });
}

int cmd_solve(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario s = require_scenario(opts);
    const EstimatorConfig config = estimator_config(opts, s);
    const Observations obs = scenario_observations(s);
    const EstimatorResult result = run_estimator(s.grids, obs, config);

    if (!result.recovered()) {
      report_error(err, "SolverFailure",
                   "solver finished with status " + std::string(to_string(result.solution.status)) +
                       " after " + std::to_string(result.solution.iterations) + " iterations");
      return kSolverFailure;
    }
    emit(opts, out, dump(estimate_to_json(result, opts.timing)));

    std::string csv_path = opts.csv;
    if (csv_path.empty() && !opts.out.empty()) {
      csv_path = std::filesystem::path(opts.out).replace_extension(".csv").string();
    }
    if (!csv_path.empty()) {
      std::ostringstream csv;
      write_certificate_csv(csv, result.certificate, result.common.count, config.localize.oversampling);
      write_text_file(csv_path, csv.str());
    }
    if (!opts.svg.empty()) {
      std::ostringstream svg;
      write_certificate_svg(svg, result.certificate, result.common.count, config.localize.oversampling);
      write_text_file(opts.svg, svg.str());
    }
    return kOk;
  });
}

int cmd_compare(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario s = require_scenario(opts);
    const EstimatorConfig config = estimator_config(opts, s);
    const Observations obs = scenario_observations(s);
    validate_observations(obs, s.grids);
    const CommonGrid g = find_common_grid(s.grids, config.grid);
    const SupportSet support = support_set(s.grids, g);
    const Eigen::VectorXcd merged = merge_collisions(obs, support, config.collision_tolerance);

    const FormRun reduced = run_form(SdpForm::kReduced, merged, support, g.count, config.solver);
    std::optional<FormRun> full;
    if (g.count <= opts.full_cap) {
      full = run_form(SdpForm::kFull, merged, support, g.count, config.solver);
    } else {
      err << "warning: n_star = " << g.count << " exceeds --full-cap " << opts.full_cap
          << ", running the reduced problem only\n";
    }

    auto form_json = [&](const FormRun& r) {
      return Json{{"objective", r.solution.objective_value},
                  {"status", std::string(to_string(r.solution.status))},
                  {"iterations", r.solution.iterations},
                  {"block_dim", r.block_dim},
                  {"wall_ms", opts.timing ? Json(r.ms) : Json(nullptr)}};
    };
    Json doc;
    doc["n_star"] = g.count;
    doc["N_star"] = support.size();
    doc["reduced"] = form_json(reduced);
    doc["full"] = full ? form_json(*full) : Json(nullptr);
    if (full) {
      doc["objective_gap"] = std::abs(full->solution.objective_value - reduced.solution.objective_value);
      doc["c_diff_inf"] = (full->dual - reduced.dual).cwiseAbs().maxCoeff();
    } else {
      doc["objective_gap"] = nullptr;
      doc["c_diff_inf"] = nullptr;
    }
    if (!opts.out.empty()) write_text_file(opts.out, dump(doc));

    std::ostringstream table;
    table << std::setprecision(10);
    table << "form     block_dim  objective          status         iterations  wall_ms\n";
    auto row = [&](const char* name, const FormRun& r) {
      table << std::left << std::setw(9) << name << std::setw(11) << r.block_dim << std::setw(19)
            << r.solution.objective_value << std::setw(15) << to_string(r.solution.status)
            << std::setw(12) << r.solution.iterations;
      if (opts.timing) {
        table << r.ms;
      } else {
        table << '-';
      }
      table << '\n';
    };
    row("reduced", reduced);
    if (full) {
      row("full", *full);
      table << "objective gap: " << doc["objective_gap"].get<double>() << '\n';
      table << "c_diff_inf:    " << doc["c_diff_inf"].get<double>() << '\n';
    } else {
      table << "full: skipped (n_star over cap)\n";
    }
    out << table.str();

    const bool ok = reduced.solution.status == SolverStatus::kOptimal &&
                    (!full || full->solution.status == SolverStatus::kOptimal);
    return ok ? kOk : kSolverFailure;
  });
}

std::vector<BenchRow> run_bench(const Options& opts) {
  if (opts.repetitions < 1) throw Error(ErrorCode::kInvalidInput, "--repetitions must be >= 1");
  SolverConfig solver;
  if (opts.eps) solver.eps_primal = solver.eps_dual = solver.eps_gap = *opts.eps;
  if (opts.max_iters) solver.max_iters = *opts.max_iters;
  solver.validate();

  std::vector<BenchRow> rows;
  for (int b : opts.b) {
    for (int m : opts.m) {
      for (int n : opts.n) {
        if (b < 2 || m < 1 || n < 1) throw Error(ErrorCode::kInvalidInput, "bench needs b >= 2, m >= 1, n >= 1");
        std::vector<SamplingGrid> grids;
        grids.push_back({Rational(1), Rational(0), n});
        std::int64_t bj = b;
        for (int j = 2; j <= m; ++j) {
          bj *= b;
          grids.push_back({Rational(1), Rational(1, bj) - Rational(1), n});
        }
        SpikeSignal signal;
        signal.frequencies = {0.2};
        signal.amplitudes = {{1.0, 0.5}};
        const Observations obs = sample(signal, grids);

        const CommonGrid g = find_common_grid(grids);
        const SupportSet support = support_set(grids, g);
        const Eigen::VectorXcd merged = merge_collisions(obs, support);

        BenchRow row;
        row.m = m;
        row.n = n;
        row.b = b;
        row.n_star = g.count;
        row.support = static_cast<long long>(support.size());
        std::vector<double> reduced_ms, full_ms;
        for (int r = 0; r < opts.repetitions; ++r) {
          const FormRun red = run_form(SdpForm::kReduced, merged, support, g.count, solver);
          reduced_ms.push_back(red.ms);
          row.reduced_status = std::string(to_string(red.solution.status));
          if (g.count <= opts.full_cap) {
            const FormRun full = run_form(SdpForm::kFull, merged, support, g.count, solver);
            full_ms.push_back(full.ms);
            row.full_status = std::string(to_string(full.solution.status));
          }
        }
        auto median = [](std::vector<double> v) {
          std::sort(v.begin(), v.end());
          const std::size_t h = v.size() / 2;
          return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
        };
        row.t_reduced_ms = median(reduced_ms);
        if (!full_ms.empty()) row.t_full_ms = median(full_ms);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

int cmd_bench(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::vector<BenchRow> rows = run_bench(opts);
    std::ostringstream csv;
    csv << "m,n,b,n_star,N_star,t_reduced_ms,t_full_ms_or_NA\n";
    csv << std::fixed << std::setprecision(3);
    bool ok = true;
    for (const auto& r : rows) {
      csv << r.m << ',' << r.n << ',' << r.b << ',' << r.n_star << ',' << r.support << ',';
      if (opts.timing) {
        csv << r.t_reduced_ms;
      } else {
        csv << "NA";
      }
      csv << ',';
      if (r.t_full_ms && opts.timing) {
        csv << *r.t_full_ms;
      } else {
        csv << "NA";
      }
      csv << '\n';
      if (r.reduced_status != "Optimal") {
        ok = false;
        err << "warning: m=" << r.m << " n=" << r.n << " b=" << r.b << " reduced solve " << r.reduced_status
            << '\n';
      }
    }
    emit(opts, out, csv.str());
    return ok ? kOk : kSolverFailure;
  });
}

}  // namespace mrss::cli
