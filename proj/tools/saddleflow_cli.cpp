// saddleflow: run the online saddle point allocator and its experiments.
//
// Exit codes: 0 ok, 1 invariant or bound violation, 2 usage/config error,
// 3 I/O error.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "saddleflow/experiments.hpp"
#include "saddleflow/validate.hpp"

namespace {

using namespace saddleflow;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;
constexpr int kIo = 3;

struct Flags {
  std::string config_path;
  std::optional<std::string> out;
  std::optional<int> jobs;
  std::optional<std::uint64_t> seed;
};

ExperimentConfig prepare(const Flags& flags) {
  if (flags.config_path.empty()) throw ConfigError("--config is required");
  ExperimentConfig config = load_config(flags.config_path);
  if (flags.out) config.output = *flags.out;
  if (flags.seed) {
    if (!config.generator) throw ConfigError("--seed needs a \"generator\" section in the config");
    config.generator->seed = *flags.seed;
  }
  if (config.dataset_path && !std::filesystem::exists(*config.dataset_path)) {
    throw ConfigError("dataset '" + config.dataset_path->string() + "' does not exist");
  }
  // The config's own "jobs" is used unless a flag or SADDLEFLOW_JOBS says otherwise.
  if (flags.jobs || std::getenv("SADDLEFLOW_JOBS")) config.jobs = resolve_jobs(flags.jobs);
  return config;
}

int cmd_run(const Flags& flags) {
  const ExperimentConfig config = prepare(flags);
  const Dataset dataset = load_or_generate(config);
  const RunOutcome outcome = execute_run(config, dataset);
  write_text(config.output / "trace.jsonl", trace_to_jsonl(outcome.trace));
  write_text(config.output / "report.json", report_to_json(outcome, config));
  std::cout << summary_line(outcome) << "\n";
  if (outcome.report && !outcome.report->within_bound()) {
    std::cerr << "error: measured regret " << outcome.report->empirical_regret << " exceeds the bound "
              << outcome.report->bound_total << "\n";
    return kViolation;
  }
  return kOk;
}

int cmd_offline(const Flags& flags) {
  const ExperimentConfig config = prepare(flags);
  const Dataset dataset = load_or_generate(config);
  const OfflineOptions options = config.offline.value_or(OfflineOptions{});
  const OfflineSolution solution = solve_offline(dataset, config.penalty, options);
  write_text(config.output / "offline.json", offline_to_json(solution));
  std::cout << "P in [" << solution.p_value << ", " << solution.d_value << "] gap=" << solution.gap
            << " iterations=" << solution.iterations << "\n";
  if (solution.gap < -1e-9) {
    std::cerr << "error: weak duality violated (gap " << solution.gap << ")\n";
    return kViolation;
  }
  if (!solution.converged(options.tol)) {
    std::cerr << "warning: gap tolerance not reached within " << options.max_iters << " iterations\n";
  }
  return kOk;
}

int cmd_tradeoff(const Flags& flags) {
  const ExperimentConfig config = prepare(flags);
  const auto rows = run_tradeoff(config);
  write_text(config.output / "tradeoff.csv", tradeoff_csv(rows));
  std::cout << "wrote " << rows.size() << " rows to " << (config.output / "tradeoff.csv").string() << "\n";
  return kOk;
}

int cmd_regret(const Flags& flags) {
  const ExperimentConfig config = prepare(flags);
  const auto rows = run_regret(config);
  write_text(config.output / "regret.csv", regret_csv(rows));
  std::cout << "wrote " << rows.size() << " rows to " << (config.output / "regret.csv").string() << "\n";
  return kOk;
}

int cmd_validate() {
  const ValidationReport report = run_validation();
  std::cout << report.format();
  return report.passed() ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online saddle point allocation with non-additive penalties"};
  app.require_subcommand(1);

  Flags flags;
  auto add_common = [&flags](CLI::App* sub) {
    sub->add_option("--config", flags.config_path, "JSON experiment config")->required();
    sub->add_option("--out", flags.out, "output directory (overrides config \"output\")");
    sub->add_option("--jobs", flags.jobs, "worker threads (fallback: SADDLEFLOW_JOBS, then 1)");
    sub->add_option("--seed", flags.seed, "generator seed override");
  };
  CLI::App* run = app.add_subcommand("run", "run one algorithm, write trace.jsonl and report.json");
  CLI::App* tradeoff = app.add_subcommand("tradeoff", "reward/penalty sweep over R_lambda = 2^gamma");
  CLI::App* regret = app.add_subcommand("regret", "regret against T for the l1 and Huber regimes");
  CLI::App* offline = app.add_subcommand("offline", "certify the offline optimum with a duality gap");
  CLI::App* validate = app.add_subcommand("validate", "run the built-in invariant suites");
  for (CLI::App* sub : {run, tradeoff, regret, offline}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*run) return cmd_run(flags);
    if (*tradeoff) return cmd_tradeoff(flags);
    if (*regret) return cmd_regret(flags);
    if (*offline) return cmd_offline(flags);
    if (*validate) return cmd_validate();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const DatasetError& e) {
    std::cerr << "dataset error: " << e.what() << "\n";
    return kIo;
  } catch (const OutputError& e) {
    std::cerr << "output error: " << e.what() << "\n";
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
