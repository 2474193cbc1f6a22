#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.h"
#include "io.h"
#include "mrss/errors.h"
#include "mrss/pipeline.h"

using namespace mrss;
using namespace mrss::cli;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mrss_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto p = (dir_ / name).string();
    write_text_file(p, text);
    return p;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

const char* kTwoGrid = R"({"grids": [{"rate": "1", "delay": "0", "count": 4},
                                      {"rate": "3/2", "delay": "0", "count": 4}],
                           "signal": {"frequencies": [0.3], "amplitudes": [[1, 0]]}})";

const char* kThreeSpikes = R"({"grids": [{"rate": "1", "delay": "0", "count": 6},
                                          {"rate": "1", "delay": "-3/4", "count": 6}],
                               "signal": {"frequencies": [0.1, 0.45, 0.8],
                                          "amplitudes": [[1, 0], [0, 1], [-0.5, 0.5]]},
                               "seed": 3})";

}  // namespace

TEST_F(CliTest, GridinfoTwoGridDimensions) {
  Options o;
  o.scenario = write("s.json", kTwoGrid);
  std::ostringstream out, err;
  ASSERT_EQ(cmd_gridinfo(o, out, err), kOk) << err.str();
  const auto doc = Json::parse(out.str());
  EXPECT_EQ(doc["rate"], "3");
  EXPECT_EQ(doc["n_star"], 10);
  EXPECT_EQ(doc["full_block_dim"], 11);
  EXPECT_EQ(doc["reduced_block_dim"], 7);
  EXPECT_EQ(doc["N"], 8);
  EXPECT_EQ(doc["support"]["indices"], Json::parse("[0, 2, 3, 4, 6, 9]"));
}

TEST_F(CliTest, GridinfoSingleGridEqualDimensions) {
  Options o;
  o.scenario = write("s.json", R"({"grids": [{"rate": "2/3", "delay": "1/5", "count": 7}],
                                   "signal": {"frequencies": [], "amplitudes": []}})");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_gridinfo(o, out, err), kOk) << err.str();
  const auto doc = Json::parse(out.str());
  EXPECT_EQ(doc["full_block_dim"], doc["reduced_block_dim"]);
  EXPECT_EQ(doc["full_block_dim"], 8);
}

TEST_F(CliTest, GridinfoDelayOnlyScaling) {
  Options o;
  o.scenario = write("s.json", R"({"grids": [{"rate": "1", "delay": "0", "count": 4},
                                             {"rate": "1", "delay": "-3/4", "count": 4}],
                                   "signal": {"frequencies": [], "amplitudes": []}})");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_gridinfo(o, out, err), kOk);
  const auto doc = Json::parse(out.str());
  EXPECT_EQ(doc["full_block_dim"], 17);
  EXPECT_EQ(doc["reduced_block_dim"], 9);  // N + 1, no collisions
}

TEST_F(CliTest, NoCommonGridExitsTwo) {
  Options o;
  o.scenario = write("s.json", R"({"grids": [{"rate": "1", "delay": "0", "count": 2},
                                             {"rate": "1", "delay": "1/1000003", "count": 2}],
                                   "signal": {"frequencies": [], "amplitudes": []}})");
  std::ostringstream out, err;
  EXPECT_EQ(cmd_gridinfo(o, out, err), kNoGrid);
  EXPECT_EQ(Json::parse(err.str())["error"], "NoCommonGrid");
}

TEST_F(CliTest, ParseErrorsExitOne) {
  std::ostringstream out, err;
  Options o;
  o.scenario = write("bad.json", "{ not json");
  EXPECT_EQ(cmd_gridinfo(o, out, err), kUsage);
  EXPECT_EQ(Json::parse(err.str())["error"], "ParseError");

  err.str("");
  o.scenario = write("bad2.json", R"({"grids": [{"rate": 1.5, "delay": "0", "count": 2}],
                                      "signal": {"frequencies": [], "amplitudes": []}})");
  EXPECT_EQ(cmd_gridinfo(o, out, err), kUsage);

  err.str("");
  o.scenario = path("missing.json");
  EXPECT_EQ(cmd_simulate(o, out, err), kUsage);
}

TEST_F(CliTest, SimulateWritesRationalsAsStrings) {
  Options o;
  o.scenario = write("s.json", kTwoGrid);
  o.out = path("obs.json");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_simulate(o, out, err), kOk) << err.str();
  const auto doc = read_json_file(o.out);
  EXPECT_EQ(doc["grids"][1]["rate"], "3/2");
  ASSERT_EQ(doc["observations"].size(), 2u);
  EXPECT_EQ(doc["observations"][0].size(), 4u);
  // y_1[0] = alpha at t = 0
  EXPECT_DOUBLE_EQ(doc["observations"][0][0][0].get<double>(), 1.0);
}

TEST_F(CliTest, RoundTripMatchesInMemoryPipeline) {
  Options o;
  o.scenario = write("s.json", kThreeSpikes);
  o.out = path("obs.json");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_simulate(o, out, err), kOk);

  Options solve_opts;
  solve_opts.scenario = o.out;
  solve_opts.timing = false;
  std::ostringstream est;
  ASSERT_EQ(cmd_solve(solve_opts, est, err), kOk) << err.str();

  const Scenario s = parse_scenario(Json::parse(kThreeSpikes));
  const auto direct = run_estimator(s.grids, sample(*s.signal, s.grids));
  EXPECT_EQ(est.str(), estimate_to_json(direct, false).dump(2) + '\n');
}

TEST_F(CliTest, SolveSingleSpikeObjective) {
  Options o;
  o.scenario = write("s.json", R"({"grids": [{"rate": "1", "delay": "0", "count": 8}],
                                   "signal": {"frequencies": [0.3], "amplitudes": [[0.6, 0.8]]}})");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_solve(o, out, err), kOk) << err.str();
  const auto doc = Json::parse(out.str());
  EXPECT_EQ(doc["solver_status"], "Optimal");
  ASSERT_EQ(doc["frequencies"].size(), 1u);
  EXPECT_NEAR(doc["objective"].get<double>(), 1.0, 1e-5);
}

TEST_F(CliTest, SolveThreeSpikesWritesAllOutputs) {
  Options o;
  o.scenario = write("s.json", kThreeSpikes);
  o.out = path("est.json");
  o.svg = path("q.svg");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_solve(o, out, err), kOk) << err.str();
  const auto doc = read_json_file(o.out);
  EXPECT_EQ(doc["frequencies"].size(), 3u);
  EXPECT_EQ(doc["amplitudes_re_im"].size(), 3u);
  EXPECT_LE(doc["residual"].get<double>(), 1e-6);
  for (const char* key : {"frequencies", "amplitudes_re_im", "objective", "certificate_margin", "residual",
                          "solver_status", "iterations", "wall_ms"}) {
    EXPECT_TRUE(doc.contains(key)) << key;
  }

  const std::string csv = slurp(path("est.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "omega,abs_Q");
  const auto rows = std::count(csv.begin(), csv.end(), '\n');
  EXPECT_EQ(rows, 1 + 16 * 24);  // oversampling * n_star
  const std::string svg = slurp(o.svg);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(svg.find("stroke-dasharray"), std::string::npos);
}

TEST_F(CliTest, CorruptedCollisionIsRejected) {
  Options o;
  o.scenario = write("obs.json", R"({"grids": [{"rate": "1", "delay": "0", "count": 4},
                                               {"rate": "3/2", "delay": "0", "count": 4}],
                                     "observations": [[[1, 0], [0, 0], [0, 0], [0, 0]],
                                                      [[2, 0], [0, 0], [0, 0], [0, 0]]]})");
  std::ostringstream out, err;
  EXPECT_NE(cmd_solve(o, out, err), kOk);
  EXPECT_EQ(Json::parse(err.str())["error"], "InconsistentObservations");
}

TEST_F(CliTest, SolverFailureExitsThree) {
  Options o;
  o.scenario = write("s.json", kThreeSpikes);
  o.max_iters = 2;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_solve(o, out, err), kSolverFailure);
  EXPECT_NE(err.str().find("MaxIterations"), std::string::npos);
}

TEST_F(CliTest, ScenarioSolverOverridesApply) {
  SolverConfig c;
  apply_solver_overrides(Json::parse(R"({"max_iters": 17, "scaling": "none", "eps_gap": 1e-4})"), c);
  EXPECT_EQ(c.max_iters, 17);
  EXPECT_EQ(c.scaling, Scaling::kNone);
  EXPECT_EQ(c.eps_gap, 1e-4);
  EXPECT_THROW(apply_solver_overrides(Json::parse(R"({"bogus": 1})"), c), Error);
}

TEST_F(CliTest, CompareIdentitySelection) {
  Options o;
  o.scenario = write("s.json", R"({"grids": [{"rate": "1", "delay": "0", "count": 8}],
                                   "signal": {"frequencies": [0.2, 0.7], "amplitudes": [[1, 0], [0, 1]]}})");
  o.out = path("cmp.json");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_compare(o, out, err), kOk) << err.str();
  const auto doc = read_json_file(o.out);
  EXPECT_LE(doc["objective_gap"].get<double>(), 1e-5);
  EXPECT_EQ(doc["reduced"]["block_dim"], doc["full"]["block_dim"]);
  EXPECT_NE(out.str().find("objective gap"), std::string::npos);
}

TEST_F(CliTest, CompareTwoGridCollisionGap) {
  Options o;
  o.scenario = write("s.json", kTwoGrid);
  o.out = path("cmp.json");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_compare(o, out, err), kOk) << err.str();
  EXPECT_LE(read_json_file(o.out)["objective_gap"].get<double>(), 1e-5);
}

TEST_F(CliTest, CompareOverCapRunsReducedOnly) {
  Options o;
  o.scenario = write("s.json", kThreeSpikes);
  o.full_cap = 10;
  o.out = path("cmp.json");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_compare(o, out, err), kOk);
  EXPECT_NE(err.str().find("warning"), std::string::npos);
  const auto doc = read_json_file(o.out);
  EXPECT_TRUE(doc["full"].is_null());
  EXPECT_EQ(doc["reduced"]["status"], "Optimal");
}

TEST_F(CliTest, BenchFamilyDimensions) {
  Options o;
  o.m = {1, 2, 3};
  o.n = {4};
  o.b = {2, 3};
  o.full_cap = 0;
  const auto rows = run_bench(o);
  ASSERT_EQ(rows.size(), 6u);
  for (const auto& r : rows) {
    long long bm = 1;
    for (int i = 0; i < r.m; ++i) bm *= r.b;
    EXPECT_EQ(r.n_star, r.m == 1 ? r.n : bm * r.n);
    EXPECT_LE(r.support, static_cast<long long>(r.m) * r.n);
    EXPECT_EQ(r.reduced_status, "Optimal");
    EXPECT_FALSE(r.t_full_ms.has_value());
    if (r.m == 1) {
      EXPECT_EQ(r.support, r.n_star);
    }
  }
}

TEST_F(CliTest, BenchCsvIsDeterministicWithoutTiming) {
  Options o;
  o.m = {1, 2};
  o.b = {2};
  o.timing = false;
  std::ostringstream a, b, err;
  ASSERT_EQ(cmd_bench(o, a, err), kOk);
  ASSERT_EQ(cmd_bench(o, b, err), kOk);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')), "m,n,b,n_star,N_star,t_reduced_ms,t_full_ms_or_NA");
  EXPECT_NE(a.str().find("2,4,2,16,8,NA,NA"), std::string::npos);
}

TEST_F(CliTest, SolveOutputsAreDeterministic) {
  Options o;
  o.scenario = write("s.json", kThreeSpikes);
  o.timing = false;
  std::string first;
  for (int run = 0; run < 2; ++run) {
    o.out = path("est" + std::to_string(run) + ".json");
    o.svg = path("q" + std::to_string(run) + ".svg");
    std::ostringstream out, err;
    ASSERT_EQ(cmd_solve(o, out, err), kOk);
  }
  EXPECT_EQ(slurp(path("est0.json")), slurp(path("est1.json")));
  EXPECT_EQ(slurp(path("est0.csv")), slurp(path("est1.csv")));
  EXPECT_EQ(slurp(path("q0.svg")), slurp(path("q1.svg")));
}
