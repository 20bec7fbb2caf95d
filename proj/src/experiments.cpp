#include "saddleflow/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace saddleflow {

using nlohmann::json;

namespace {

void check_keys(const json& object, const std::vector<std::string>& allowed, const std::string& where) {
  for (const auto& item : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw ConfigError(where + ": unknown key \"" + item.key() + "\"");
    }
  }
}

template <typename T>
T get_as(const json& object, const std::string& key, const std::string& where) {
  try {
    return object.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": key \"" + key + "\" has the wrong type");
  }
}

PenaltySpec penalty_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("penalty: expected an object");
  check_keys(j, {"kind", "q", "r_lambda", "l", "asymmetric"}, "penalty");
  if (!j.contains("kind")) throw ConfigError("penalty: missing \"kind\"");
  PenaltySpec spec;
  const auto kind = get_as<std::string>(j, "kind", "penalty");
  if (kind == "norm") {
    spec.kind = PenaltyKind::ScaledNorm;
    if (!j.contains("q")) throw ConfigError("penalty: norm penalty needs \"q\"");
    const json& q = j.at("q");
    if (q.is_string() && q.get<std::string>() == "inf") {
      spec.q = NormKind::Linf;
    } else if (q.is_number_integer() && q.get<int>() == 1) {
      spec.q = NormKind::L1;
    } else if (q.is_number_integer() && q.get<int>() == 2) {
      spec.q = NormKind::L2;
    } else {
      throw ConfigError("penalty: \"q\" must be 1, 2 or \"inf\"");
    }
  } else if (kind == "huber") {
    spec.kind = PenaltyKind::HuberL2;
    spec.q = NormKind::L2;
    if (j.contains("q") && !(j.at("q").is_number_integer() && j.at("q").get<int>() == 2)) {
      throw ConfigError("penalty: huber is only available for q = 2");
    }
    if (!j.contains("l")) throw ConfigError("penalty: huber penalty needs \"l\"");
    spec.smoothness_l = get_as<double>(j, "l", "penalty");
  } else {
    throw ConfigError("penalty: \"kind\" must be \"norm\" or \"huber\"");
  }
  if (!j.contains("r_lambda")) throw ConfigError("penalty: missing \"r_lambda\"");
  spec.r_lambda = get_as<double>(j, "r_lambda", "penalty");
  if (j.contains("asymmetric")) spec.asymmetric = get_as<bool>(j, "asymmetric", "penalty");
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

json penalty_json(const PenaltySpec& spec) {
  json j;
  if (spec.kind == PenaltyKind::HuberL2) {
    j["kind"] = "huber";
    j["q"] = 2;
    j["l"] = spec.smoothness_l;
  } else {
    j["kind"] = "norm";
    switch (spec.q) {
      case NormKind::L1:
        j["q"] = 1;
        break;
      case NormKind::L2:
        j["q"] = 2;
        break;
      case NormKind::Linf:
        j["q"] = "inf";
        break;
    }
  }
  j["r_lambda"] = spec.r_lambda;
  j["asymmetric"] = spec.asymmetric;
  return j;
}

GeneratorConfig generator_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("generator: expected an object");
  check_keys(j, {"distribution", "m", "d", "T", "blocks", "block_count", "seed", "drift"}, "generator");
  GeneratorConfig g;
  try {
    if (j.contains("distribution")) g.distribution = parse_distribution(get_as<std::string>(j, "distribution", "generator"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("generator: ") + e.what());
  }
  if (j.contains("m")) g.m = get_as<int>(j, "m", "generator");
  if (j.contains("d")) g.d = get_as<int>(j, "d", "generator");
  if (j.contains("T")) g.horizon = get_as<int>(j, "T", "generator");
  if (j.contains("seed")) g.seed = get_as<std::uint64_t>(j, "seed", "generator");
  if (j.contains("drift")) g.drift = get_as<double>(j, "drift", "generator");
  if (j.contains("blocks") && j.contains("block_count")) {
    throw ConfigError("generator: give either \"blocks\" or \"block_count\", not both");
  }
  if (j.contains("blocks")) g.block_offsets = get_as<std::vector<std::size_t>>(j, "blocks", "generator");
  if (j.contains("block_count")) {
    const int count = get_as<int>(j, "block_count", "generator");
    if (count < 1 || count > g.d) throw ConfigError("generator: block_count must lie in [1, d]");
    g.block_offsets = SimplexBlocks::uniform(static_cast<std::size_t>(g.d), static_cast<std::size_t>(count)).offsets();
  }
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return g;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mu = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - mu) * (x - mu);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

Vector mean_residual(const RunTrace& trace) {
  Vector sum = Vector::Zero(trace.rounds.front().residual_true.size());
  for (const RoundRecord& r : trace.rounds) sum += r.residual_true;
  return sum / static_cast<double>(trace.size());
}

double mean_reward(const RunTrace& trace) {
  double sum = 0.0;
  for (const RoundRecord& r : trace.rounds) sum += r.reward;
  return sum / static_cast<double>(trace.size());
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (generator.has_value() == dataset_path.has_value()) {
    throw ConfigError("config: exactly one of \"generator\" and \"dataset\" is required");
  }
  if (repeats && *repeats < 1) throw ConfigError("config: repeats must be >= 1");
  if (jobs < 1) throw ConfigError("config: jobs must be >= 1");
  if (baseline.inner_iters < 1) throw ConfigError("config: baseline.inner_iters must be >= 1");
  if (offline && (offline->max_iters < 1 || !(offline->tol > 0.0))) {
    throw ConfigError("config: offline.max_iters must be >= 1 and offline.tol > 0");
  }
  for (int t : horizons) {
    if (t < 2) throw ConfigError("config: horizons must be >= 2");
  }
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  check_keys(j,
             {"penalty", "generator", "dataset", "algorithm", "schedule", "offline", "baseline",
              "sweep", "horizons", "repeats", "output", "jobs"},
             "config");

  ExperimentConfig config;
  if (!j.contains("penalty")) throw ConfigError("config: missing \"penalty\"");
  config.penalty = penalty_from_json(j.at("penalty"));
  if (j.contains("generator")) config.generator = generator_from_json(j.at("generator"));
  if (j.contains("dataset")) config.dataset_path = get_as<std::string>(j, "dataset", "config");

  if (j.contains("algorithm")) {
    const auto name = get_as<std::string>(j, "algorithm", "config");
    if (name == "alg1") {
      config.algorithm = Algorithm::Alg1;
    } else if (name == "alg2") {
      config.algorithm = Algorithm::Alg2;
    } else if (name == "additive") {
      config.algorithm = Algorithm::Additive;
    } else {
      throw ConfigError("config: \"algorithm\" must be alg1, alg2 or additive");
    }
  }

  if (j.contains("schedule")) {
    const json& s = j.at("schedule");
    if (!s.is_object()) throw ConfigError("schedule: expected an object");
    check_keys(s, {"mode", "g_bound", "kappa", "r_lambda", "matrix_radius"}, "schedule");
    if (s.contains("mode")) {
      const auto mode = get_as<std::string>(s, "mode", "schedule");
      if (mode == "convex") {
        config.schedule.mode = DualMode::ConvexFixed;
      } else if (mode == "strongly_convex") {
        config.schedule.mode = DualMode::StronglyConvex;
      } else {
        throw ConfigError("schedule: \"mode\" must be convex or strongly_convex");
      }
    }
    if (s.contains("g_bound")) config.schedule.g_bound = get_as<double>(s, "g_bound", "schedule");
    if (s.contains("kappa")) config.schedule.kappa = get_as<double>(s, "kappa", "schedule");
    if (s.contains("r_lambda")) config.schedule.r_lambda = get_as<double>(s, "r_lambda", "schedule");
    if (s.contains("matrix_radius")) {
      config.schedule.matrix_radius = get_as<double>(s, "matrix_radius", "schedule");
    }
  }

  if (j.contains("offline")) {
    const json& o = j.at("offline");
    if (!o.is_object()) throw ConfigError("offline: expected an object");
    check_keys(o, {"max_iters", "tol"}, "offline");
    OfflineOptions options;
    if (o.contains("max_iters")) options.max_iters = get_as<int>(o, "max_iters", "offline");
    if (o.contains("tol")) options.tol = get_as<double>(o, "tol", "offline");
    config.offline = options;
  }

  if (j.contains("baseline")) {
    const json& b = j.at("baseline");
    if (!b.is_object()) throw ConfigError("baseline: expected an object");
    check_keys(b, {"inner_iters", "step_scale"}, "baseline");
    if (b.contains("inner_iters")) config.baseline.inner_iters = get_as<int>(b, "inner_iters", "baseline");
    if (b.contains("step_scale")) config.baseline.inner_step_scale = get_as<double>(b, "step_scale", "baseline");
  }

  if (j.contains("sweep")) config.sweep = get_as<std::vector<double>>(j, "sweep", "config");
  if (j.contains("horizons")) config.horizons = get_as<std::vector<int>>(j, "horizons", "config");
  if (j.contains("repeats")) config.repeats = get_as<int>(j, "repeats", "config");
  if (j.contains("output")) config.output = get_as<std::string>(j, "output", "config");
  if (j.contains("jobs")) config.jobs = get_as<int>(j, "jobs", "config");
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

PenaltySpec parse_penalty(const std::string& json_text) {
  try {
    return penalty_from_json(json::parse(json_text));
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("penalty: malformed JSON: ") + e.what());
  }
}

std::string penalty_to_json(const PenaltySpec& spec) { return penalty_json(spec).dump(); }

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Alg1:
      return "alg1";
    case Algorithm::Alg2:
      return "alg2";
    case Algorithm::Additive:
      return "additive";
  }
  return "unknown";
}

std::vector<double> default_gamma_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 36; ++i) grid.push_back(-8.0 + 0.5 * i);
  return grid;
}

std::vector<int> default_horizons() { return {100, 200, 500, 1000, 2000}; }

void parallel_for(int jobs, std::size_t count, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, jobs)), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

int resolve_jobs(std::optional<int> flag) {
  if (flag) {
    if (*flag < 1) throw ConfigError("--jobs must be >= 1");
    return *flag;
  }
  if (const char* env = std::getenv("SADDLEFLOW_JOBS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || value < 1) {
      throw ConfigError("SADDLEFLOW_JOBS must be a positive integer");
    }
    return static_cast<int>(value);
  }
  return 1;
}

Dataset load_or_generate(const ExperimentConfig& config) {
  if (config.dataset_path) return load_dataset(*config.dataset_path);
  return generate(*config.generator);
}

StepSchedule make_schedule(const ExperimentConfig& config, const Dataset& dataset) {
  StepSchedule schedule =
      StepSchedule::for_dataset(dataset, config.penalty, compute_bounds(dataset, config.penalty));
  const ScheduleOverrides& o = config.schedule;
  if (o.mode) schedule.mode = *o.mode;
  if (o.g_bound) schedule.g_bound = *o.g_bound;
  if (o.kappa) schedule.kappa = *o.kappa;
  if (o.r_lambda) schedule.r_lambda = *o.r_lambda;
  if (o.matrix_radius) schedule.matrix_radius = *o.matrix_radius;
  try {
    schedule.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return schedule;
}

RunOutcome execute_run(const ExperimentConfig& config, const Dataset& dataset) {
  RunOutcome outcome;
  const Eigen::Index m = dataset.front().m();
  const Eigen::Index d = dataset.front().d();
  switch (config.algorithm) {
    case Algorithm::Alg1:
      outcome.schedule = make_schedule(config, dataset);
      outcome.trace = run_algorithm1(dataset, config.penalty, outcome.schedule, DualVector::Zero(m));
      break;
    case Algorithm::Alg2:
      outcome.schedule = make_schedule(config, dataset);
      outcome.trace = run_algorithm2(dataset, config.penalty, outcome.schedule, DualVector::Zero(m),
                                     Matrix::Zero(m, d));
      break;
    case Algorithm::Additive:
      outcome.trace = run_additive_baseline(dataset, config.penalty, config.baseline);
      break;
  }
  outcome.reward = mean_reward(outcome.trace);
  outcome.penalty = eval_penalty(config.penalty, mean_residual(outcome.trace));
  if (config.algorithm != Algorithm::Additive) {
    outcome.offline = solve_offline(dataset, config.penalty, config.offline.value_or(OfflineOptions{}));
    outcome.report = bound_components(outcome.trace, dataset, config.penalty, outcome.schedule, *outcome.offline);
  }
  return outcome;
}

std::string trace_to_jsonl(const RunTrace& trace) {
  std::string out;
  auto append_vector = [&out](const Vector& v) {
    out += '[';
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (i) out += ", ";
      out += format_double(v[i]);
    }
    out += ']';
  };
  for (std::size_t t = 0; t < trace.rounds.size(); ++t) {
    const RoundRecord& r = trace.rounds[t];
    out += "{\"t\": " + std::to_string(t + 1) + ", \"x_hat\": ";
    append_vector(r.x_hat);
    if (r.lambda_hat.size() > 0) {
      out += ", \"lambda_hat\": ";
      append_vector(r.lambda_hat);
    }
    if (r.a_hat.size() > 0) {
      out += ", \"a_hat\": [";
      for (Eigen::Index i = 0; i < r.a_hat.rows(); ++i) {
        if (i) out += ", ";
        append_vector(r.a_hat.row(i).transpose());
      }
      out += ']';
    }
    out += ", \"residual\": ";
    append_vector(r.residual_true);
    out += ", \"reward\": " + format_double(r.reward) + "}\n";
  }
  return out;
}

std::string report_to_json(const RunOutcome& outcome, const ExperimentConfig& config) {
  json j;
  j["algorithm"] = to_string(config.algorithm);
  j["penalty"] = penalty_json(config.penalty);
  j["rounds"] = outcome.trace.size();
  j["reward"] = outcome.reward;
  j["penalty_value"] = outcome.penalty;
  if (outcome.report) {
    const BoundReport& r = *outcome.report;
    j["bound"] = {{"r_t", r.r_t},
                  {"m_e", r.m_e},
                  {"s_e", r.s_e},
                  {"s_a", r.s_a},
                  {"bound_total", r.bound_total},
                  {"empirical_regret", {r.empirical_regret_lower, r.empirical_regret}},
                  {"lower_bound", r.lower_bound},
                  {"dual_path_variation", r.dual_path_variation},
                  {"epsilon", r.epsilon},
                  {"primal_online", r.primal_online},
                  {"offline_gap", r.offline_gap},
                  {"within_bound", r.within_bound()}};
  }
  if (outcome.offline) j["offline"] = json::parse(offline_to_json(*outcome.offline));
  return j.dump(2) + "\n";
}

std::string offline_to_json(const OfflineSolution& solution) {
  json j;
  j["p_value"] = solution.p_value;
  j["d_value"] = solution.d_value;
  j["gap"] = solution.gap;
  j["iterations"] = solution.iterations;
  j["lambda_star"] = vector_json(solution.lambda_star);
  return j.dump(2) + "\n";
}

std::string summary_line(const RunOutcome& outcome) {
  std::ostringstream os;
  os.precision(6);
  os << "reward=" << outcome.reward << " penalty=" << outcome.penalty;
  if (outcome.report) {
    os << " regret=[" << outcome.report->empirical_regret_lower << ", "
       << outcome.report->empirical_regret << "] bound=" << outcome.report->bound_total;
  }
  return os.str();
}

PenaltySpec sweep_penalty(const PenaltySpec& base, double gamma) {
  PenaltySpec spec = base;
  spec.r_lambda = std::exp2(gamma);
  if (spec.kind == PenaltyKind::HuberL2) spec.smoothness_l = spec.r_lambda;
  spec.validate();
  return spec;
}

std::vector<TradeoffRow> run_tradeoff(const ExperimentConfig& config) {
  if (!config.generator) throw ConfigError("tradeoff: requires a \"generator\" section");
  const std::vector<double> grid = config.sweep.empty() ? default_gamma_grid() : config.sweep;
  const auto repeats = static_cast<std::size_t>(config.repeats.value_or(10));

  std::vector<Dataset> datasets(repeats);
  parallel_for(config.jobs, repeats, [&](std::size_t r) {
    GeneratorConfig g = *config.generator;
    g.seed = config.generator->seed + r;
    datasets[r] = generate(g);
  });

  // rows[2 * gamma_index + {0: non-additive, 1: additive}]
  std::vector<TradeoffRow> rows(2 * grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t a = 0; a < 2; ++a) {
      TradeoffRow& row = rows[2 * i + a];
      row.gamma = grid[i];
      row.r_lambda = std::exp2(grid[i]);
      row.algorithm = a == 0 ? "non-additive" : "additive";
      row.rewards.assign(repeats, 0.0);
      row.penalties.assign(repeats, 0.0);
    }
  }

  parallel_for(config.jobs, rows.size() * repeats, [&](std::size_t job) {
    const std::size_t row_index = job / repeats;
    const std::size_t r = job % repeats;
    TradeoffRow& row = rows[row_index];
    const PenaltySpec spec = sweep_penalty(config.penalty, row.gamma);
    const Dataset& dataset = datasets[r];
    RunTrace trace;
    if (row_index % 2 == 0) {
      const StepSchedule schedule = StepSchedule::for_dataset(dataset, spec, compute_bounds(dataset, spec));
      trace = run_algorithm1(dataset, spec, schedule, DualVector::Zero(dataset.front().m()));
    } else {
      trace = run_additive_baseline(dataset, spec, config.baseline);
    }
    row.rewards[r] = mean_reward(trace);
    row.penalties[r] = eval_penalty(spec, mean_residual(trace)) / spec.r_lambda;
  });

  for (TradeoffRow& row : rows) {
    row.reward_mean = mean_of(row.rewards);
    row.penalty_mean = mean_of(row.penalties);
    row.reward_std = std_of(row.rewards);
    row.penalty_std = std_of(row.penalties);
  }
  return rows;
}

std::string tradeoff_csv(const std::vector<TradeoffRow>& rows) {
  std::string out = "gamma,r_lambda,algorithm,reward_mean,penalty_mean,reward_std,penalty_std\n";
  for (const TradeoffRow& row : rows) {
    out += format_double(row.gamma) + "," + format_double(row.r_lambda) + "," + row.algorithm + "," +
           format_double(row.reward_mean) + "," + format_double(row.penalty_mean) + "," +
           format_double(row.reward_std) + "," + format_double(row.penalty_std) + "\n";
  }
  return out;
}

std::vector<RegretRow> run_regret(const ExperimentConfig& config) {
  if (!config.generator) throw ConfigError("regret: requires a \"generator\" section");
  const std::vector<int> horizons = config.horizons.empty() ? default_horizons() : config.horizons;
  const auto repeats = static_cast<std::size_t>(config.repeats.value_or(20));
  const double radius = config.penalty.r_lambda;
  const PenaltySpec regimes[2] = {PenaltySpec::norm(NormKind::L1, radius),
                                  PenaltySpec::huber(radius, 1.0)};
  OfflineOptions offline;
  offline.tol = 1e-6;
  if (config.offline) offline = *config.offline;

  struct Cell {
    double upper = 0.0;
    double lower = 0.0;
    double bound = 0.0;
  };
  std::vector<Cell> cells(horizons.size() * 2 * repeats);
  parallel_for(config.jobs, cells.size(), [&](std::size_t job) {
    const std::size_t h = job / (2 * repeats);
    const std::size_t regime = (job / repeats) % 2;
    const std::size_t r = job % repeats;
    GeneratorConfig g = *config.generator;
    g.horizon = horizons[h];
    g.seed = config.generator->seed + r;
    const Dataset dataset = generate(g);
    const PenaltySpec& spec = regimes[regime];
    const StepSchedule schedule = StepSchedule::for_dataset(dataset, spec, compute_bounds(dataset, spec));
    const RunTrace trace = run_algorithm1(dataset, spec, schedule, DualVector::Zero(g.m));
    const OfflineSolution solution = solve_offline(dataset, spec, offline);
    const BoundReport report = bound_components(trace, dataset, spec, schedule, solution);
    cells[job] = {report.empirical_regret, report.empirical_regret_lower, report.bound_total};
  });

  std::vector<RegretRow> rows;
  for (std::size_t h = 0; h < horizons.size(); ++h) {
    for (std::size_t regime = 0; regime < 2; ++regime) {
      RegretRow row;
      row.horizon = horizons[h];
      row.regime = regime == 0 ? "convex" : "strongly_convex";
      for (std::size_t r = 0; r < repeats; ++r) {
        const Cell& c = cells[(h * 2 + regime) * repeats + r];
        row.regret_upper_mean += c.upper;
        row.regret_lower_mean += c.lower;
        row.bound_total_mean += c.bound;
      }
      row.regret_upper_mean /= static_cast<double>(repeats);
      row.regret_lower_mean /= static_cast<double>(repeats);
      row.bound_total_mean /= static_cast<double>(repeats);
      rows.push_back(row);
    }
  }
  return rows;
}

std::string regret_csv(const std::vector<RegretRow>& rows) {
  std::string out = "T,regime,regret_upper_mean,regret_lower_mean,bound_total_mean\n";
  for (const RegretRow& row : rows) {
    out += std::to_string(row.horizon) + "," + row.regime + "," + format_double(row.regret_upper_mean) +
           "," + format_double(row.regret_lower_mean) + "," + format_double(row.bound_total_mean) + "\n";
  }
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 points");
  double mx = 0.0;
  double my = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("loglog_slope: values must be positive");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw OutputError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw OutputError("write failed for '" + path.string() + "'");
}

}  // namespace saddleflow
