#include <iostream>

#include <CLI11.hpp>

#include "commands.h"

int main(int argc, char** argv) {
  using namespace mrss::cli;
  CLI::App app{"Spectral spike recovery from multi-rate samples"};
  app.require_subcommand(1, 1);
  Options opts;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", opts.scenario, "scenario or observations JSON")->required();
    sub->add_option("--out", opts.out, "output file (stdout when omitted)");
  };
  auto add_solver = [&](CLI::App* sub) {
    sub->add_option("--eps", opts.eps, "primal, dual and gap tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--max-iters", opts.max_iters, "solver iteration cap")->check(CLI::PositiveNumber);
    sub->add_flag("--timing,!--no-timing", opts.timing, "omit wall-clock times from outputs");
  };

  auto* gridinfo = app.add_subcommand("gridinfo", "common grid and SDP dimensions");
  add_common(gridinfo);
  auto* simulate = app.add_subcommand("simulate", "write the observations of a scenario");
  add_common(simulate);
  auto* solve = app.add_subcommand("solve", "recover frequencies and amplitudes");
  add_common(solve);
  add_solver(solve);
  solve->add_option("--csv", opts.csv, "certificate curve (defaults to <out>.csv)");
  solve->add_option("--svg", opts.svg, "plot of |Q| over [0, 2 pi)");
  auto* compare = app.add_subcommand("compare", "full against reduced SDP");
  add_common(compare);
  add_solver(compare);
  compare->add_option("--full-cap", opts.full_cap, "largest n_star solved in full form");
  auto* bench = app.add_subcommand("bench", "dimension and timing table on the delay-only family");
  bench->add_option("--out", opts.out, "CSV file (stdout when omitted)");
  add_solver(bench);
  bench->add_option("--m", opts.m, "number of grids")->delimiter(',');
  bench->add_option("--n", opts.n, "samples per grid")->delimiter(',');
  bench->add_option("--b", opts.b, "delay base")->delimiter(',');
  bench->add_option("--repetitions", opts.repetitions, "timed runs per row (median)");
  bench->add_option("--full-cap", opts.full_cap, "largest n_star solved in full form");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  if (*gridinfo) return cmd_gridinfo(opts, std::cout, std::cerr);
  if (*simulate) return cmd_simulate(opts, std::cout, std::cerr);
  if (*solve) return cmd_solve(opts, std::cout, std::cerr);
  if (*compare) return cmd_compare(opts, std::cout, std::cerr);
  return cmd_bench(opts, std::cout, std::cerr);
}
