#include "saddleflow/online.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace saddleflow {

namespace {

void check_dataset(const Dataset& dataset) {
  if (dataset.empty()) throw std::invalid_argument("dataset: no rounds");
  const Eigen::Index m = dataset.front().m();
  const Eigen::Index d = dataset.front().d();
  for (const RoundData& round : dataset) {
    round.validate();
    if (round.m() != m || round.d() != d) {
      throw std::invalid_argument("dataset: rounds have inconsistent dimensions");
    }
  }
}

void check_lambda_init(const Dataset& dataset, const PenaltySpec& spec, const DualVector& lambda) {
  if (lambda.size() != dataset.front().m()) {
    throw std::invalid_argument("lambda_init: dimension mismatch");
  }
  if (!in_domain(dual_domain(spec), lambda)) {
    throw std::invalid_argument("lambda_init: outside the dual domain");
  }
}

double additive_objective(const RoundData& round, const PenaltySpec& spec, const ActionVector& x) {
  return round.u.dot(x) - eval_penalty(spec, residual(round, x));
}

}  // namespace

RunBounds compute_bounds(const Dataset& dataset, const PenaltySpec& spec) {
  if (dataset.empty()) throw std::invalid_argument("compute_bounds: empty dataset");
  RunBounds bounds;
  std::size_t max_blocks = 0;
  for (const RoundData& round : dataset) max_blocks = std::max(max_blocks, round.blocks.count());
  // Each block holds at most one unit of mass, so ||x||_2 <= sqrt(#blocks).
  bounds.r_x = std::sqrt(static_cast<double>(max_blocks));

  double worst = 0.0;
  for (const RoundData& round : dataset) {
    const double a_norm = round.a.norm();
    const double b_norm = round.b.norm();
    bounds.r_a = std::max(bounds.r_a, a_norm);
    bounds.b_max = std::max(bounds.b_max, b_norm);
    worst = std::max(worst, a_norm * bounds.r_x + b_norm);
  }
  // grad_lambda L_t = -(A_t x - b_t) + grad E*(lambda), with ||grad E*|| <= R/L.
  bounds.g_bound = worst;
  if (spec.kind == PenaltyKind::HuberL2) bounds.g_bound += spec.r_lambda / spec.smoothness_l;
  return bounds;
}

void StepSchedule::validate() const {
  if (horizon < 1) throw std::invalid_argument("schedule: horizon must be >= 1");
  if (!(r_lambda > 0.0)) throw std::invalid_argument("schedule: r_lambda must be positive");
  if (!(matrix_radius >= 0.0)) throw std::invalid_argument("schedule: matrix_radius must be >= 0");
  if (mode == DualMode::ConvexFixed && !(g_bound > 0.0)) {
    throw std::invalid_argument("schedule: convex step needs G > 0");
  }
  if (mode == DualMode::StronglyConvex && !(kappa > 0.0)) {
    throw std::invalid_argument("schedule: strongly convex step needs kappa > 0");
  }
}

double StepSchedule::eta(int t) const {
  if (mode == DualMode::StronglyConvex) return 1.0 / (kappa * static_cast<double>(t));
  return 2.0 * r_lambda / (g_bound * std::sqrt(static_cast<double>(horizon)));
}

double StepSchedule::nu(int t) const { return matrix_radius / std::sqrt(static_cast<double>(t)); }

double StepSchedule::eta_sum() const {
  double sum = 0.0;
  for (int t = 1; t <= horizon; ++t) sum += eta(t);
  return sum;
}

StepSchedule StepSchedule::for_dataset(const Dataset& dataset, const PenaltySpec& spec,
                                       const RunBounds& bounds) {
  if (dataset.empty()) throw std::invalid_argument("schedule: empty dataset");
  StepSchedule schedule;
  schedule.kappa = strong_convexity(spec);
  schedule.mode = schedule.kappa > 0.0 ? DualMode::StronglyConvex : DualMode::ConvexFixed;
  // An all-zero dataset has G = 0; any positive constant is then a valid bound.
  schedule.g_bound = bounds.g_bound > 0.0 ? bounds.g_bound : 1.0;
  schedule.r_lambda = dual_radius_l2(spec, dataset.front().m());
  schedule.horizon = static_cast<int>(dataset.size());
  schedule.matrix_radius = bounds.r_a;
  return schedule;
}

std::vector<ActionVector> RunTrace::actions() const {
  std::vector<ActionVector> xs;
  xs.reserve(rounds.size());
  for (const RoundRecord& r : rounds) xs.push_back(r.x_hat);
  return xs;
}

namespace {

RunTrace run_saddle_point(const Dataset& dataset, const PenaltySpec& spec,
                          const StepSchedule& schedule, const DualVector& lambda_init,
                          const Matrix* a_init) {
  check_dataset(dataset);
  spec.validate();
  schedule.validate();
  check_lambda_init(dataset, spec, lambda_init);
  if (static_cast<std::size_t>(schedule.horizon) != dataset.size()) {
    throw std::invalid_argument("schedule: horizon does not match the dataset length");
  }

  const DualDomain domain = dual_domain(spec);
  RunTrace trace;
  trace.algorithm = a_init ? Algorithm::Alg2 : Algorithm::Alg1;
  trace.rounds.reserve(dataset.size());

  DualVector lambda = lambda_init;
  Matrix a_hat;
  if (a_init) {
    if (a_init->rows() != dataset.front().m() || a_init->cols() != dataset.front().d()) {
      throw std::invalid_argument("a_init: dimension mismatch");
    }
    if (a_init->norm() > schedule.matrix_radius * (1.0 + 1e-12) + 1e-12) {
      throw std::invalid_argument("a_init: outside the Frobenius ball of radius R_A");
    }
    a_hat = *a_init;
  }

  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const RoundData& round = dataset[i];
    const int t = static_cast<int>(i) + 1;

    RoundRecord record;
    record.x_hat = primal_argmax(round, a_init ? a_hat : round.a, lambda);
    record.lambda_hat = lambda;
    record.residual_true = residual(round, record.x_hat);
    record.reward = round.u.dot(record.x_hat);

    const Vector gradient = -record.residual_true + conjugate_gradient(spec, lambda);
    lambda = project_dual(domain, lambda - schedule.eta(t) * gradient);

    if (a_init) {
      record.a_hat = a_hat;
      Matrix step = a_hat - round.a;
      const double gap = step.norm();
      if (gap > 0.0) step /= gap;
      a_hat -= schedule.nu(t) * step;
      const double norm = a_hat.norm();
      if (norm > schedule.matrix_radius) {
        a_hat *= norm > 0.0 ? schedule.matrix_radius / norm : 0.0;
      }
    }
    trace.rounds.push_back(std::move(record));
  }
  return trace;
}

}  // namespace

RunTrace run_algorithm1(const Dataset& dataset, const PenaltySpec& spec,
                        const StepSchedule& schedule, const DualVector& lambda_init) {
  return run_saddle_point(dataset, spec, schedule, lambda_init, nullptr);
}

RunTrace run_algorithm2(const Dataset& dataset, const PenaltySpec& spec,
                        const StepSchedule& schedule, const DualVector& lambda_init,
                        const Matrix& a_init) {
  return run_saddle_point(dataset, spec, schedule, lambda_init, &a_init);
}

ActionVector solve_additive_round(const RoundData& round, const PenaltySpec& spec,
                                  const BaselineOptions& options) {
  if (options.inner_iters < 1) throw std::invalid_argument("baseline: inner_iters must be >= 1");
  const double scale =
      options.inner_step_scale.value_or(1.0 / std::max(1.0, round.u.norm()));

  ActionVector x = ActionVector::Zero(round.d());
  ActionVector sum = x;
  ActionVector best = x;
  double best_value = additive_objective(round, spec, x);

  for (int k = 1; k <= options.inner_iters; ++k) {
    const Vector g = penalty_subgradient(spec, residual(round, x));
    const Vector ascent = round.u - round.a.transpose() * g;
    x = project_block_simplex(round.blocks, x + (scale / std::sqrt(static_cast<double>(k))) * ascent);

    const double raw_value = additive_objective(round, spec, x);
    if (raw_value > best_value) {
      best_value = raw_value;
      best = x;
    }
    sum += x;
    const ActionVector average = sum / static_cast<double>(k + 1);
    const double average_value = additive_objective(round, spec, average);
    if (average_value > best_value) {
      best_value = average_value;
      best = average;
    }
  }
  return best;
}

RunTrace run_additive_baseline(const Dataset& dataset, const PenaltySpec& spec,
                               const BaselineOptions& options) {
  check_dataset(dataset);
  spec.validate();
  RunTrace trace;
  trace.algorithm = Algorithm::Additive;
  trace.rounds.reserve(dataset.size());
  for (const RoundData& round : dataset) {
    RoundRecord record;
    record.x_hat = solve_additive_round(round, spec, options);
    record.residual_true = residual(round, record.x_hat);
    record.reward = round.u.dot(record.x_hat);
    trace.rounds.push_back(std::move(record));
  }
  return trace;
}

double dual_path_variation(const RunTrace& trace) {
  double total = 0.0;
  for (std::size_t t = 1; t < trace.rounds.size(); ++t) {
    total += (trace.rounds[t - 1].lambda_hat - trace.rounds[t].lambda_hat).norm();
  }
  return total;
}

double matrix_variation(const Dataset& dataset) {
  double total = 0.0;
  for (std::size_t t = 1; t < dataset.size(); ++t) total += (dataset[t - 1].a - dataset[t].a).norm();
  return total;
}

double mean_matrix_tracking_error(const RunTrace& trace, const Dataset& dataset) {
  if (!trace.estimated_matrices()) throw std::invalid_argument("tracking error needs an Alg2 trace");
  if (trace.size() != dataset.size()) throw std::invalid_argument("trace/dataset length mismatch");
  double total = 0.0;
  for (std::size_t t = 0; t < dataset.size(); ++t) {
    total += (trace.rounds[t].a_hat - dataset[t].a).norm();
  }
  return total / static_cast<double>(dataset.size());
}

}  // namespace saddleflow
