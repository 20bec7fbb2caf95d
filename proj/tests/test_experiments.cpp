#include <gtest/gtest.h>
#include <sys/wait.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "saddleflow/experiments.hpp"

using namespace saddleflow;
namespace fs = std::filesystem;

namespace {

const char* kPenaltyL1 = R"({"kind": "norm", "q": 1, "r_lambda": 1.0})";

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "saddleflow_test_experiments" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

int run_cli(const std::string& args) {
  const std::string command = std::string(SADDLEFLOW_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string small_config(const std::string& extra = "") {
  return std::string("{\"penalty\": ") + kPenaltyL1 +
         ", \"generator\": {\"m\": 4, \"d\": 5, \"T\": 40, \"seed\": 7}" + extra + "}";
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST(Config, ParsesAllSections) {
  const ExperimentConfig c = parse_config(R"({
    "penalty": {"kind": "huber", "r_lambda": 2.0, "l": 0.5, "asymmetric": true},
    "generator": {"distribution": "cauchy", "m": 3, "d": 6, "T": 12, "block_count": 2, "seed": 5, "drift": 0.1},
    "algorithm": "alg2",
    "schedule": {"mode": "convex", "g_bound": 4.0},
    "offline": {"max_iters": 100, "tol": 0.01},
    "baseline": {"inner_iters": 20, "step_scale": 0.5},
    "sweep": [-1, 0.5], "horizons": [10, 20], "repeats": 3, "output": "x", "jobs": 2})");
  EXPECT_EQ(c.penalty.kind, PenaltyKind::HuberL2);
  EXPECT_TRUE(c.penalty.asymmetric);
  EXPECT_DOUBLE_EQ(c.penalty.smoothness_l, 0.5);
  EXPECT_EQ(c.generator->distribution, Distribution::Cauchy);
  EXPECT_EQ(c.generator->block_offsets, (std::vector<std::size_t>{0, 3, 6}));
  EXPECT_EQ(c.algorithm, Algorithm::Alg2);
  EXPECT_EQ(*c.schedule.mode, DualMode::ConvexFixed);
  EXPECT_EQ(c.offline->max_iters, 100);
  EXPECT_DOUBLE_EQ(*c.baseline.inner_step_scale, 0.5);
  EXPECT_EQ(c.sweep.size(), 2u);
  EXPECT_EQ(*c.repeats, 3);
  EXPECT_EQ(c.jobs, 2);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config("{"), ConfigError);
  EXPECT_THROW(parse_config(R"({"generator": {}})"), ConfigError);
  EXPECT_THROW(parse_config(std::string("{\"penalty\": ") + kPenaltyL1 + "}"), ConfigError);
  EXPECT_THROW(parse_config(std::string("{\"penalty\": ") + kPenaltyL1 + ", \"generator\": {}, \"dataset\": \"a\"}"),
               ConfigError);
  EXPECT_THROW(parse_config(small_config(", \"repeats\": 0")), ConfigError);
  EXPECT_THROW(parse_config(small_config(", \"algoritm\": \"alg1\"")), ConfigError);
  EXPECT_THROW(parse_config(small_config(", \"algorithm\": \"alg3\"")), ConfigError);
  EXPECT_THROW(parse_penalty(R"({"kind": "norm", "q": 3, "r_lambda": 1})"), ConfigError);
  EXPECT_THROW(parse_penalty(R"({"kind": "huber", "r_lambda": 1})"), ConfigError);
  EXPECT_THROW(parse_penalty(R"({"kind": "norm", "q": 2, "r_lambda": -1})"), ConfigError);
}

TEST(Config, PenaltyJsonRoundTrip) {
  for (const PenaltySpec& spec : {PenaltySpec::norm(NormKind::L1, 0.25), PenaltySpec::norm(NormKind::Linf, 3, true),
                                  PenaltySpec::huber(2, 0.5)}) {
    const PenaltySpec back = parse_penalty(penalty_to_json(spec));
    EXPECT_EQ(back.kind, spec.kind);
    EXPECT_EQ(back.q, spec.q);
    EXPECT_EQ(back.asymmetric, spec.asymmetric);
    EXPECT_EQ(back.r_lambda, spec.r_lambda);
    if (spec.kind == PenaltyKind::HuberL2) {
      EXPECT_EQ(back.smoothness_l, spec.smoothness_l);
    }
  }
}

TEST(Grids, Defaults) {
  const auto grid = default_gamma_grid();
  ASSERT_EQ(grid.size(), 37u);
  EXPECT_DOUBLE_EQ(grid.front(), -8.0);
  EXPECT_DOUBLE_EQ(grid[1], -7.5);
  EXPECT_DOUBLE_EQ(grid.back(), 10.0);
  EXPECT_EQ(default_horizons(), (std::vector<int>{100, 200, 500, 1000, 2000}));
}

TEST(SweepPenalty, HuberSmoothnessFollowsTheRadius) {
  const PenaltySpec h = sweep_penalty(PenaltySpec::huber(1, 1), 3.0);
  EXPECT_DOUBLE_EQ(h.r_lambda, 8.0);
  EXPECT_DOUBLE_EQ(h.smoothness_l, 8.0);
  // R * H_{1,1}(t) = H_{R,R}(t)
  for (double t : {0.1, 0.9, 1.0, 2.5}) EXPECT_NEAR(8.0 * huber(1, 1, t), huber(8, 8, t), 1e-12);
  EXPECT_DOUBLE_EQ(sweep_penalty(PenaltySpec::norm(NormKind::L1, 1), -2.0).r_lambda, 0.25);
}

TEST(ParallelFor, CoversEveryIndexAndRethrows) {
  for (int jobs : {1, 3, 8}) {
    std::vector<std::atomic<int>> hits(100);
    parallel_for(jobs, hits.size(), [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
    EXPECT_THROW(parallel_for(jobs, 50,
                              [](std::size_t i) {
                                if (i == 17) throw std::runtime_error("boom");
                              }),
                 std::runtime_error);
  }
}

TEST(ResolveJobs, FlagThenEnvironmentThenOne) {
  unsetenv("SADDLEFLOW_JOBS");
  EXPECT_EQ(resolve_jobs(std::nullopt), 1);
  EXPECT_EQ(resolve_jobs(4), 4);
  setenv("SADDLEFLOW_JOBS", "3", 1);
  EXPECT_EQ(resolve_jobs(std::nullopt), 3);
  EXPECT_EQ(resolve_jobs(5), 5);
  setenv("SADDLEFLOW_JOBS", "zero", 1);
  EXPECT_THROW(resolve_jobs(std::nullopt), ConfigError);
  unsetenv("SADDLEFLOW_JOBS");
  EXPECT_THROW(resolve_jobs(0), ConfigError);
}

TEST(LogLogSlope, RecoversPowerLaws) {
  std::vector<double> x = {100, 200, 500, 1000, 2000}, y;
  for (double t : x) y.push_back(3.0 * std::pow(t, -0.5));
  EXPECT_NEAR(loglog_slope(x, y), -0.5, 1e-12);
  EXPECT_THROW(loglog_slope({1}, {1}), std::invalid_argument);
  EXPECT_THROW(loglog_slope({1, 2}, {1, 0}), std::invalid_argument);
}

TEST(Tradeoff, RowCountAndCsvFormat) {
  ExperimentConfig c = parse_config(small_config(", \"sweep\": [-8, 0, 4], \"repeats\": 2, \"jobs\": 2"));
  const auto rows = run_tradeoff(c);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].algorithm, "non-additive");
  EXPECT_EQ(rows[1].algorithm, "additive");
  EXPECT_EQ(rows[4].gamma, 4.0);
  EXPECT_EQ(rows[4].rewards.size(), 2u);
  const std::string csv = tradeoff_csv(rows);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  const auto l = lines(csv);
  ASSERT_EQ(l.size(), 7u);
  EXPECT_EQ(l[0], "gamma,r_lambda,algorithm,reward_mean,penalty_mean,reward_std,penalty_std");
  EXPECT_EQ(l[1].rfind("-8,0.00390625,non-additive,", 0), 0u);
  // Scheduling does not change results.
  c.jobs = 1;
  EXPECT_EQ(tradeoff_csv(run_tradeoff(c)), csv);
}

TEST(Regret, SingleHorizonGivesTwoRows) {
  const ExperimentConfig c = parse_config(small_config(", \"horizons\": [30], \"repeats\": 1"));
  const auto rows = run_regret(c);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].regime, "convex");
  EXPECT_EQ(rows[1].regime, "strongly_convex");
  EXPECT_GE(rows[0].regret_upper_mean, rows[0].regret_lower_mean);
  EXPECT_LE(rows[0].regret_upper_mean, rows[0].bound_total_mean);
  EXPECT_EQ(lines(regret_csv(rows)).front(), "T,regime,regret_upper_mean,regret_lower_mean,bound_total_mean");
}

TEST(ExecuteRun, AdditiveHasNoReport) {
  ExperimentConfig c = parse_config(small_config(", \"algorithm\": \"additive\""));
  const RunOutcome out = execute_run(c, load_or_generate(c));
  EXPECT_FALSE(out.report.has_value());
  EXPECT_EQ(out.trace.size(), 40u);
  EXPECT_EQ(trace_to_jsonl(out.trace).find("lambda_hat"), std::string::npos);
}

TEST(ExecuteRun, ScheduleOverridesApply) {
  ExperimentConfig c = parse_config(small_config(", \"schedule\": {\"g_bound\": 50.0}"));
  const RunOutcome out = execute_run(c, load_or_generate(c));
  EXPECT_DOUBLE_EQ(out.schedule.g_bound, 50.0);
  EXPECT_TRUE(out.report->within_bound());
}

TEST(Cli, RunWritesOutputsDeterministically) {
  const fs::path dir = scratch("run");
  write_file(dir / "config.json", small_config());
  ASSERT_EQ(run_cli("run --config " + (dir / "config.json").string() + " --out " + (dir / "a").string()), 0);
  ASSERT_EQ(run_cli("run --config " + (dir / "config.json").string() + " --out " + (dir / "b").string()), 0);
  for (const char* file : {"trace.jsonl", "report.json"}) {
    const std::string first = read_file(dir / "a" / file);
    EXPECT_FALSE(first.empty());
    EXPECT_EQ(first, read_file(dir / "b" / file)) << file;
  }
  EXPECT_EQ(lines(read_file(dir / "a" / "trace.jsonl")).size(), 40u);
}

TEST(Cli, SeedFlagChangesTheData) {
  const fs::path dir = scratch("seed");
  write_file(dir / "config.json", small_config());
  ASSERT_EQ(run_cli("run --config " + (dir / "config.json").string() + " --out " + (dir / "a").string()), 0);
  ASSERT_EQ(run_cli("run --config " + (dir / "config.json").string() + " --seed 8 --out " + (dir / "b").string()), 0);
  EXPECT_NE(read_file(dir / "a" / "trace.jsonl"), read_file(dir / "b" / "trace.jsonl"));
}

TEST(Cli, GoldenTraceOnSavedDataset) {
  const fs::path data_dir = fs::path(SADDLEFLOW_TEST_DATA);
  const fs::path dir = scratch("golden");
  write_file(dir / "config.json", std::string("{\"penalty\": ") + kPenaltyL1 + ", \"dataset\": \"" +
                                      (data_dir / "golden_dataset.jsonl").string() + "\"}");
  ASSERT_EQ(run_cli("run --config " + (dir / "config.json").string() + " --out " + dir.string()), 0);
  EXPECT_EQ(read_file(dir / "trace.jsonl"), read_file(data_dir / "golden_trace.jsonl"));
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("exit");
  write_file(dir / "missing.json", std::string("{\"penalty\": ") + kPenaltyL1 + ", \"dataset\": \"" +
                                       (dir / "nope.jsonl").string() + "\"}");
  EXPECT_EQ(run_cli("run --config " + (dir / "missing.json").string()), 2);
  write_file(dir / "neither.json", std::string("{\"penalty\": ") + kPenaltyL1 + "}");
  EXPECT_EQ(run_cli("run --config " + (dir / "neither.json").string()), 2);
  EXPECT_EQ(run_cli("run"), 2);
  EXPECT_EQ(run_cli("bogus"), 2);
  EXPECT_EQ(run_cli("run --config " + (dir / "absent.json").string()), 2);

  write_file(dir / "broken.jsonl", "{\"A\": [[1]], \"u\": [1], \"blocks\": [0, 1]}\n");
  write_file(dir / "broken.json", std::string("{\"penalty\": ") + kPenaltyL1 + ", \"dataset\": \"" +
                                      (dir / "broken.jsonl").string() + "\"}");
  EXPECT_EQ(run_cli("run --config " + (dir / "broken.json").string()), 3);

  // Output path blocked by a regular file.
  write_file(dir / "blocker", "x");
  write_file(dir / "ok.json", small_config());
  EXPECT_EQ(run_cli("run --config " + (dir / "ok.json").string() + " --out " + (dir / "blocker").string()), 3);
}

TEST(Cli, BoundViolationExitsWithOne) {
  // An understated dual radius shrinks R_T and epsilon together, so the
  // reported bound falls below the measured regret.
  const fs::path dir = scratch("violation");
  write_file(dir / "config.json", small_config(", \"schedule\": {\"r_lambda\": 1e-9}"));
  EXPECT_EQ(run_cli("run --config " + (dir / "config.json").string() + " --out " + dir.string()), 1);
}

TEST(Cli, OfflineTradeoffRegretAndValidate) {
  const fs::path dir = scratch("commands");
  write_file(dir / "config.json", small_config(", \"sweep\": [-8, 4], \"horizons\": [20, 40], \"repeats\": 1"));
  const std::string common = " --config " + (dir / "config.json").string() + " --out " + dir.string();
  EXPECT_EQ(run_cli("offline" + common), 0);
  EXPECT_TRUE(fs::exists(dir / "offline.json"));
  EXPECT_EQ(run_cli("tradeoff" + common + " --jobs 2"), 0);
  EXPECT_EQ(lines(read_file(dir / "tradeoff.csv")).size(), 5u);
  EXPECT_EQ(run_cli("regret" + common), 0);
  EXPECT_EQ(lines(read_file(dir / "regret.csv")).size(), 5u);
  EXPECT_EQ(run_cli("validate"), 0);
}
