#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mrss::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNoGrid = 2, kSolverFailure = 3 };

struct Options {
  std::string scenario;
  std::string out;   // stdout when empty
  std::string csv;   // solve: certificate curve, defaults to <out>.csv
  std::string svg;
  std::optional<double> eps;
  std::optional<int> max_iters;
  int full_cap = 64;
  bool timing = true;
  // bench family
  std::vector<int> m = {1, 2, 3};
  std::vector<int> n = {4};
  std::vector<int> b = {2, 3};
  int repetitions = 1;
};

/// Each command writes its primary output to `out` (or the --out file) and
/// diagnostics to `err`, and returns the process exit code. Errors are
/// reported on `err` as {"error": <code name>, "message": ...}.
int cmd_gridinfo(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_simulate(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_solve(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_compare(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_bench(const Options& opts, std::ostream& out, std::ostream& err);

/// Delay-only family: grid 1 is (1, 0, n) and grid j >= 2 is
/// (1, b^-j - 1, n), so n_* = b^m n for m >= 2 (n for m = 1) while
/// N_* = m n.
struct BenchRow {
  int m = 0, n = 0, b = 0;
  long long n_star = 0, support = 0;
  double t_reduced_ms = 0.0;
  std::optional<double> t_full_ms;
  std::string reduced_status, full_status;
};
std::vector<BenchRow> run_bench(const Options& opts);

}  // namespace mrss::cli
