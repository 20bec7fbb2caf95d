#include "saddleflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "saddleflow/data.hpp"

namespace saddleflow {

double psi(const std::vector<Vector>& e_stack, int t) {
  const int horizon = static_cast<int>(e_stack.size());
  if (t < 1 || t > horizon - 1) throw std::out_of_range("psi: t must lie in [1, T-1]");
  const double T = horizon;
  Vector head = Vector::Zero(e_stack.front().size());
  Vector tail = Vector::Zero(e_stack.front().size());
  for (int j = 0; j < t; ++j) head += e_stack[static_cast<std::size_t>(j)];
  for (int j = t; j < horizon; ++j) tail += e_stack[static_cast<std::size_t>(j)];
  return (((T - t) / T) * head - (t / T) * tail).norm();
}

double max_psi(const std::vector<Vector>& e_stack) {
  if (e_stack.size() < 2) return 0.0;
  // Psi_t = || S_t - (t/T) S_T || with prefix sums S_t.
  const double T = static_cast<double>(e_stack.size());
  Vector total = Vector::Zero(e_stack.front().size());
  for (const Vector& e : e_stack) total += e;
  Vector prefix = Vector::Zero(total.size());
  double best = 0.0;
  for (std::size_t t = 1; t < e_stack.size(); ++t) {
    prefix += e_stack[t - 1];
    best = std::max(best, (prefix - (static_cast<double>(t) / T) * total).norm());
  }
  return best;
}

double regret_term(const StepSchedule& schedule) {
  const double T = schedule.horizon;
  if (schedule.mode == DualMode::StronglyConvex) {
    return schedule.g_bound * schedule.g_bound / (2.0 * schedule.kappa * T) * std::log(std::exp(1.0) * T);
  }
  return 2.0 * schedule.r_lambda * schedule.g_bound / std::sqrt(T);
}

BoundReport bound_components(const RunTrace& trace, const Dataset& dataset,
                             const PenaltySpec& spec, const StepSchedule& schedule,
                             const OfflineSolution& offline) {
  if (trace.algorithm == Algorithm::Additive) {
    throw std::invalid_argument("bound_components: the additive baseline has no dual sequence");
  }
  if (trace.size() != dataset.size() || offline.primal_star.size() != dataset.size() ||
      static_cast<std::size_t>(schedule.horizon) != dataset.size()) {
    throw std::invalid_argument("bound_components: trace, schedule and offline solution must match the dataset");
  }
  const double T = static_cast<double>(dataset.size());

  BoundReport report;
  report.r_t = regret_term(schedule);
  report.epsilon = schedule.g_bound * schedule.eta_sum();
  report.m_e = max_psi(optimal_error_vectors(dataset, offline));
  report.s_e = report.epsilon / T * report.m_e;
  if (trace.estimated_matrices()) {
    const RunBounds bounds = compute_bounds(dataset, spec);
    report.s_a = 6.0 * schedule.r_lambda * bounds.r_x / std::sqrt(T) *
                 (schedule.matrix_radius + matrix_variation(dataset));
  }
  report.bound_total = report.r_t + report.s_e + report.s_a;

  report.primal_online = eval_primal(dataset, spec, trace.actions());
  report.empirical_regret = offline.d_value - report.primal_online;
  report.empirical_regret_lower = offline.p_value - report.primal_online;
  report.offline_gap = offline.gap;
  report.dual_path_variation = dual_path_variation(trace);

  if (!trace.estimated_matrices()) {
    double dual_sum = 0.0;
    for (std::size_t t = 0; t < dataset.size(); ++t) {
      const DualVector& lambda = trace.rounds[t].lambda_hat;
      const ActionVector x = primal_argmax(dataset[t], dataset[t].a, lambda);
      dual_sum += lagrangian(dataset[t], spec, x, lambda);
    }
    report.lower_bound = std::max(0.0, dual_sum / T - report.primal_online - report.r_t);
  }
  return report;
}

double static_dual_regret(const RunTrace& trace, const Dataset& dataset, const PenaltySpec& spec,
                          const DualVector& comparator) {
  if (trace.size() != dataset.size()) throw std::invalid_argument("static_dual_regret: length mismatch");
  double total = 0.0;
  for (std::size_t t = 0; t < dataset.size(); ++t) {
    const RoundRecord& r = trace.rounds[t];
    total += lagrangian(dataset[t], spec, r.x_hat, r.lambda_hat) -
             lagrangian(dataset[t], spec, r.x_hat, comparator);
  }
  return total / static_cast<double>(dataset.size());
}

double max_psi_bound(double sigma, const std::vector<Vector>& mu_stack, int horizon, int m) {
  if (sigma < 0.0) throw std::invalid_argument("max_psi_bound: sigma must be >= 0");
  if (static_cast<int>(mu_stack.size()) != horizon) {
    throw std::invalid_argument("max_psi_bound: mu stack length must equal T");
  }
  const double omega = std::pow(max_psi(mu_stack), 2);
  const double spread = sigma * sigma * m * horizon;
  return std::sqrt(spread + omega) + std::sqrt(spread * std::log(static_cast<double>(horizon)));
}

MonteCarloResult max_psi_monte_carlo(double sigma, const std::vector<Vector>& mu_stack,
                                    int horizon, int m, int n_samples, std::uint64_t seed) {
  if (n_samples < 100) throw std::invalid_argument("max_psi_monte_carlo: n_samples must be >= 100");
  if (static_cast<int>(mu_stack.size()) != horizon) {
    throw std::invalid_argument("max_psi_monte_carlo: mu stack length must equal T");
  }
  MonteCarloResult result;
  result.bound = max_psi_bound(sigma, mu_stack, horizon, m);

  double sum = 0.0;
  double sum_sq = 0.0;
  std::vector<Vector> sample(mu_stack.size(), Vector(m));
  for (int s = 0; s < n_samples; ++s) {
    RoundStream stream(seed, static_cast<std::uint64_t>(s));
    for (std::size_t t = 0; t < sample.size(); ++t) {
      for (int i = 0; i < m; ++i) {
        sample[t][i] = mu_stack[t][i] + sigma * stream.draw(Distribution::Gaussian);
      }
    }
    const double value = max_psi(sample);
    sum += value;
    sum_sq += value * value;
  }
  const double n = n_samples;
  result.empirical_mean = sum / n;
  const double variance = std::max(0.0, (sum_sq - n * result.empirical_mean * result.empirical_mean) / (n - 1.0));
  result.standard_error = std::sqrt(variance / n);
  return result;
}

}  // namespace saddleflow
