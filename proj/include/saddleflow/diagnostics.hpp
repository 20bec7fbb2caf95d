#pragma once

#include <cstdint>
#include <vector>

#include "saddleflow/offline.hpp"
#include "saddleflow/online.hpp"

namespace saddleflow {

/// Psi_t(e) = || sum_{j<=t} ((T-t)/T) e_j - sum_{j>t} (t/T) e_j ||_2 for
/// 1 <= t <= T-1 (t is 1-based).
double psi(const std::vector<Vector>& e_stack, int t);

/// max_{1<=t<=T-1} Psi_t(e); 0 when T < 2.
double max_psi(const std::vector<Vector>& e_stack);

/// Every term of the dynamic regret bound for one run.
struct BoundReport {
  double r_t = 0.0;        // dual OPSM regret term
  double m_e = 0.0;        // max_t Psi_t(e*)
  double s_e = 0.0;        // (epsilon / T) M_e
  double s_a = 0.0;        // matrix estimation term (0 for Alg1)
  double bound_total = 0.0;
  double empirical_regret = 0.0;        // upper end: best D - P(x_hat)
  double empirical_regret_lower = 0.0;  // lower end: P(x_bar) - P(x_hat)
  double lower_bound = 0.0;             // [(1/T) sum D_t(lambda_t) - P(x_hat) - R_T]_+
  double dual_path_variation = 0.0;
  double epsilon = 0.0;  // G sum_t eta_t
  double primal_online = 0.0;  // P(x_hat)
  double offline_gap = 0.0;

  bool within_bound(double slack = 1e-6) const {
    return empirical_regret <= bound_total + slack;
  }
};

/// Requires an Alg1 or Alg2 trace; S_A is computed only for Alg2.
BoundReport bound_components(const RunTrace& trace, const Dataset& dataset,
                             const PenaltySpec& spec, const StepSchedule& schedule,
                             const OfflineSolution& offline);

/// R_T: 2 R_lambda G / sqrt(T) for the fixed step, G^2 / (2 kappa T) log(e T)
/// for the 1/(kappa t) step.
double regret_term(const StepSchedule& schedule);

/// (1/T) sum_t [L_t(x_t, lambda_t) - L_t(x_t, lambda)] for a fixed comparator.
double static_dual_regret(const RunTrace& trace, const Dataset& dataset, const PenaltySpec& spec,
                          const DualVector& comparator);

/// sqrt(sigma^2 m T + omega) + sqrt(sigma^2 m T log T), omega = max_t Psi_t(mu)^2.
double max_psi_bound(double sigma, const std::vector<Vector>& mu_stack, int horizon, int m);

struct MonteCarloResult {
  double empirical_mean = 0.0;
  double standard_error = 0.0;
  double bound = 0.0;
};

/// Samples e ~ N(mu, sigma^2 I) and averages max_t Psi_t(e).
MonteCarloResult max_psi_monte_carlo(double sigma, const std::vector<Vector>& mu_stack,
                                    int horizon, int m, int n_samples, std::uint64_t seed);

}  // namespace saddleflow
