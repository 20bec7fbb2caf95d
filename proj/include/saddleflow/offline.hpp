#pragma once

#include <vector>

#include "saddleflow/oracle.hpp"
#include "saddleflow/penalty.hpp"

namespace saddleflow {

/// P(x_1..x_T) = (1/T) sum u_t^T x_t - E((1/T) sum (A_t x_t - b_t)).
/// Throws std::invalid_argument on infeasible actions or length mismatch.
double eval_primal(const Dataset& dataset, const PenaltySpec& spec,
                   const std::vector<ActionVector>& xs);

struct DualEvaluation {
  double value = 0.0;
  std::vector<ActionVector> maximizers;
};

/// D(lambda) = (1/T) sum_t max_x L_t(x, lambda), with the per-round maximizers.
DualEvaluation eval_dual(const Dataset& dataset, const PenaltySpec& spec,
                         const DualVector& lambda);

struct OfflineOptions {
  int max_iters = 20000;
  double tol = 1e-3;
  /// Fraction of max_iters skipped before ergodic averaging of the maximizers.
  double burn_in_fraction = 0.1;
  /// Evaluate the primal certificate every `check_every` iterations.
  int check_every = 10;
};

/// Certified bracket P(primal_star) <= P* <= d_value.
struct OfflineSolution {
  DualVector lambda_star;
  std::vector<ActionVector> primal_star;
  double p_value = 0.0;
  double d_value = 0.0;
  double gap = 0.0;
  int iterations = 0;

  bool converged(double tol) const { return gap <= tol * (1.0 + std::abs(d_value)); }
};

/// Projected subgradient descent on D over the dual domain, with ergodic
/// averaging of the primal maximizers and a duality-gap stopping rule.
OfflineSolution solve_offline(const Dataset& dataset, const PenaltySpec& spec,
                              const OfflineOptions& options = {});

/// e*_t = A_t x*_t - b_t for the certified primal sequence.
std::vector<Vector> optimal_error_vectors(const Dataset& dataset, const OfflineSolution& solution);

}  // namespace saddleflow
