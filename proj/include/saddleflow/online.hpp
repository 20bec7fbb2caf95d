#pragma once

#include <optional>
#include <vector>

#include "saddleflow/oracle.hpp"
#include "saddleflow/penalty.hpp"

namespace saddleflow {

/// A-priori constants of a dataset: G bounds ||grad_lambda L_t||, R_x bounds
/// ||x||_2 over the action sets, R_A bounds ||A_t||_F.
struct RunBounds {
  double g_bound = 0.0;
  double r_x = 0.0;
  double r_a = 0.0;
  double b_max = 0.0;
};

RunBounds compute_bounds(const Dataset& dataset, const PenaltySpec& spec);

enum class DualMode { ConvexFixed, StronglyConvex };

/// Dual step eta_t and matrix step nu_t.
///
///   ConvexFixed:     eta_t = 2 R_lambda / (G sqrt(T))
///   StronglyConvex:  eta_t = 1 / (kappa t)
///   matrix:          nu_t  = R_A / sqrt(t)
///
/// `r_lambda` is the Euclidean radius of the dual domain (see dual_radius_l2).
struct StepSchedule {
  DualMode mode = DualMode::ConvexFixed;
  double g_bound = 1.0;
  double kappa = 0.0;
  double r_lambda = 1.0;
  int horizon = 1;
  double matrix_radius = 1.0;

  void validate() const;
  double eta(int t) const;  // t is 1-based
  double nu(int t) const;
  double eta_sum() const;

  /// Schedule matching the penalty: StronglyConvex when E* is strongly convex.
  static StepSchedule for_dataset(const Dataset& dataset, const PenaltySpec& spec,
                                  const RunBounds& bounds);
};

enum class Algorithm { Alg1, Alg2, Additive };

struct RoundRecord {
  ActionVector x_hat;
  DualVector lambda_hat;  // empty for the additive baseline
  Matrix a_hat;           // empty unless the matrices were estimated
  Vector residual_true;
  double reward = 0.0;
};

struct RunTrace {
  Algorithm algorithm = Algorithm::Alg1;
  std::vector<RoundRecord> rounds;

  std::size_t size() const { return rounds.size(); }
  bool estimated_matrices() const { return algorithm == Algorithm::Alg2; }
  std::vector<ActionVector> actions() const;
};

/// Online saddle point optimization with the true A_t revealed before playing.
RunTrace run_algorithm1(const Dataset& dataset, const PenaltySpec& spec,
                        const StepSchedule& schedule, const DualVector& lambda_init);

/// Same game, but x_t is computed from the running estimate A_hat_t. The dual
/// update uses the true A_t once revealed; A_hat follows projected subgradient
/// descent on ||A_t - A||_F inside the Frobenius ball of radius R_A.
RunTrace run_algorithm2(const Dataset& dataset, const PenaltySpec& spec,
                        const StepSchedule& schedule, const DualVector& lambda_init,
                        const Matrix& a_init);

struct BaselineOptions {
  int inner_iters = 500;
  /// Fixed inner step scale; when unset each round uses 1 / max(1, ||u_t||).
  std::optional<double> inner_step_scale;
};

/// Approximate maximizer of u^T x - E(A x - b) over one round's action set by
/// projected subgradient ascent from the origin with steps scale / sqrt(k).
/// Returns the best of all raw and running-average iterates (origin included).
ActionVector solve_additive_round(const RoundData& round, const PenaltySpec& spec,
                                  const BaselineOptions& options);

/// Primal-only baseline maximizing the per-round additive objective.
RunTrace run_additive_baseline(const Dataset& dataset, const PenaltySpec& spec,
                               const BaselineOptions& options = {});

/// sum_{t<T} ||lambda_t - lambda_{t+1}||_2
double dual_path_variation(const RunTrace& trace);

/// sum_{t<T} ||A_t - A_{t+1}||_F
double matrix_variation(const Dataset& dataset);

/// (1/T) sum_t ||A_hat_t - A_t||_F ; requires an Alg2 trace.
double mean_matrix_tracking_error(const RunTrace& trace, const Dataset& dataset);

}  // namespace saddleflow
