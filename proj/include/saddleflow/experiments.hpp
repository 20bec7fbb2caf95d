#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "saddleflow/data.hpp"
#include "saddleflow/diagnostics.hpp"
#include "saddleflow/offline.hpp"
#include "saddleflow/online.hpp"

namespace saddleflow {

/// Invalid or incomplete experiment configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Output-side I/O failure (CLI exit code 3).
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScheduleOverrides {
  std::optional<DualMode> mode;
  std::optional<double> g_bound;
  std::optional<double> kappa;
  std::optional<double> r_lambda;
  std::optional<double> matrix_radius;
};

struct ExperimentConfig {
  PenaltySpec penalty;
  std::optional<GeneratorConfig> generator;
  std::optional<std::filesystem::path> dataset_path;
  Algorithm algorithm = Algorithm::Alg1;
  ScheduleOverrides schedule;
  /// Unset means the command default: OfflineOptions{} for run/offline, and a
  /// tighter tolerance (1e-6) for regret curves whose values can be tiny.
  std::optional<OfflineOptions> offline;
  BaselineOptions baseline;
  std::vector<double> sweep;  // gamma exponents, R_lambda = 2^gamma
  std::vector<int> horizons;
  /// Unset means the command default: 1 for run, 10 for tradeoff, 20 for regret.
  std::optional<int> repeats;
  std::filesystem::path output = "out";
  int jobs = 1;

  /// Throws ConfigError.
  void validate() const;
};

/// Parses the JSON ExperimentConfig. Throws ConfigError with the offending key.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// {"kind": "norm"|"huber", "q": 1|2|"inf", "r_lambda": x, "l": y, "asymmetric": b}
PenaltySpec parse_penalty(const std::string& json_text);
std::string penalty_to_json(const PenaltySpec& spec);

std::string to_string(Algorithm algorithm);

/// {-8, -7.5, ..., 10}
std::vector<double> default_gamma_grid();
/// {100, 200, 500, 1000, 2000}
std::vector<int> default_horizons();

/// Runs fn(0..count-1) on a bounded pool of `jobs` threads. Results must be
/// written to pre-sized slots so that output does not depend on scheduling.
void parallel_for(int jobs, std::size_t count, const std::function<void(std::size_t)>& fn);

/// Resolves --jobs: explicit value, else SADDLEFLOW_JOBS, else 1.
int resolve_jobs(std::optional<int> flag);

Dataset load_or_generate(const ExperimentConfig& config);

StepSchedule make_schedule(const ExperimentConfig& config, const Dataset& dataset);

struct RunOutcome {
  RunTrace trace;
  StepSchedule schedule;
  std::optional<OfflineSolution> offline;
  std::optional<BoundReport> report;  // absent for the additive baseline
  double reward = 0.0;                // (1/T) sum u_t^T x_t
  double penalty = 0.0;               // E((1/T) sum (A_t x_t - b_t))
};

RunOutcome execute_run(const ExperimentConfig& config, const Dataset& dataset);

std::string trace_to_jsonl(const RunTrace& trace);
std::string report_to_json(const RunOutcome& outcome, const ExperimentConfig& config);
std::string offline_to_json(const OfflineSolution& solution);
std::string summary_line(const RunOutcome& outcome);

/// Penalty of the tradeoff sweep at R_lambda = 2^gamma. Huber entries are
/// R_lambda * H_{1,1}(||z||), which equals H_{R,R}(||z||), so L = R_lambda.
PenaltySpec sweep_penalty(const PenaltySpec& base, double gamma);

struct TradeoffRow {
  double gamma = 0.0;
  double r_lambda = 0.0;
  std::string algorithm;  // "non-additive" | "additive"
  std::vector<double> rewards;    // one per seed
  std::vector<double> penalties;  // normalized: E(mean residual) / R_lambda
  double reward_mean = 0.0;
  double penalty_mean = 0.0;
  double reward_std = 0.0;
  double penalty_std = 0.0;
};

std::vector<TradeoffRow> run_tradeoff(const ExperimentConfig& config);
std::string tradeoff_csv(const std::vector<TradeoffRow>& rows);

struct RegretRow {
  int horizon = 0;
  std::string regime;  // "convex" | "strongly_convex"
  double regret_upper_mean = 0.0;
  double regret_lower_mean = 0.0;
  double bound_total_mean = 0.0;
};

/// Regimes: convex E = R ||z||_1 and strongly convex E = H_{R,1}(||z||_2),
/// R taken from config.penalty.r_lambda.
std::vector<RegretRow> run_regret(const ExperimentConfig& config);
std::string regret_csv(const std::vector<RegretRow>& rows);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace saddleflow
