#include "saddleflow/offline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "saddleflow/online.hpp"

namespace saddleflow {

namespace {

/// All rounds laid out as one (T*d) x m system so that the per-iteration work
/// of the dual solver is a single matrix-vector product.
class StackedProblem {
 public:
  explicit StackedProblem(const Dataset& dataset) : dataset_(dataset) {
    if (dataset.empty()) throw std::invalid_argument("offline: dataset has no rounds");
    m_ = dataset.front().m();
    d_ = dataset.front().d();
    const auto rounds = static_cast<Eigen::Index>(dataset.size());
    at_.resize(rounds * d_, m_);
    u_.resize(rounds * d_);
    b_mean_ = Vector::Zero(m_);
    for (Eigen::Index t = 0; t < rounds; ++t) {
      const RoundData& round = dataset[static_cast<std::size_t>(t)];
      round.validate();
      if (round.m() != m_ || round.d() != d_) {
        throw std::invalid_argument("offline: rounds have inconsistent dimensions");
      }
      at_.middleRows(t * d_, d_) = round.a.transpose();
      u_.segment(t * d_, d_) = round.u;
      b_mean_ += round.b;
    }
    b_mean_ /= static_cast<double>(rounds);
  }

  Eigen::Index m() const { return m_; }
  double horizon() const { return static_cast<double>(dataset_.size()); }

  /// Fills `x` (stacked, length T*d) with the per-round maximizers at lambda
  /// and returns (1/T) sum_t max_x (u_t - A_t^T lambda)^T x.
  double maximize(const DualVector& lambda, Vector& x) const {
    const Vector scores = u_ - at_ * lambda;
    x.setZero(scores.size());
    double total = 0.0;
    for (std::size_t t = 0; t < dataset_.size(); ++t) {
      const SimplexBlocks& blocks = dataset_[t].blocks;
      const Eigen::Index base = static_cast<Eigen::Index>(t) * d_;
      for (std::size_t k = 0; k < blocks.count(); ++k) {
        const Eigen::Index begin = base + static_cast<Eigen::Index>(blocks.begin(k));
        const Eigen::Index end = begin + static_cast<Eigen::Index>(blocks.width(k));
        Eigen::Index best = begin;
        for (Eigen::Index j = begin + 1; j < end; ++j) {
          if (scores[j] > scores[best]) best = j;
        }
        if (scores[best] > 0.0) {
          x[best] = 1.0;
          total += scores[best];
        }
      }
    }
    return total / horizon();
  }

  /// (1/T) sum_t (A_t x_t - b_t) for stacked x.
  Vector mean_residual(const Vector& x) const {
    return at_.transpose() * x / horizon() - b_mean_;
  }

  double primal(const PenaltySpec& spec, const Vector& x) const {
    return u_.dot(x) / horizon() - eval_penalty(spec, mean_residual(x));
  }

  std::vector<ActionVector> unstack(const Vector& x) const {
    std::vector<ActionVector> xs;
    xs.reserve(dataset_.size());
    for (std::size_t t = 0; t < dataset_.size(); ++t) {
      xs.push_back(x.segment(static_cast<Eigen::Index>(t) * d_, d_));
    }
    return xs;
  }

  const Vector& b_mean() const { return b_mean_; }

 private:
  const Dataset& dataset_;
  Eigen::Index m_ = 0;
  Eigen::Index d_ = 0;
  Matrix at_;
  Vector u_;
  Vector b_mean_;
};

}  // namespace

double eval_primal(const Dataset& dataset, const PenaltySpec& spec,
                   const std::vector<ActionVector>& xs) {
  if (dataset.empty()) throw std::invalid_argument("eval_primal: dataset has no rounds");
  if (xs.size() != dataset.size()) throw std::invalid_argument("eval_primal: length mismatch");
  const double horizon = static_cast<double>(dataset.size());
  double reward = 0.0;
  Vector mean_residual = Vector::Zero(dataset.front().m());
  for (std::size_t t = 0; t < dataset.size(); ++t) {
    if (!is_feasible(dataset[t].blocks, xs[t])) {
      throw std::invalid_argument("eval_primal: infeasible action at round " + std::to_string(t));
    }
    reward += dataset[t].u.dot(xs[t]);
    mean_residual += residual(dataset[t], xs[t]);
  }
  return reward / horizon - eval_penalty(spec, mean_residual / horizon);
}

DualEvaluation eval_dual(const Dataset& dataset, const PenaltySpec& spec,
                         const DualVector& lambda) {
  if (dataset.empty()) throw std::invalid_argument("eval_dual: dataset has no rounds");
  if (lambda.size() != dataset.front().m()) throw std::invalid_argument("eval_dual: dimension mismatch");
  if (!in_domain(dual_domain(spec), lambda)) {
    throw std::invalid_argument("eval_dual: lambda outside the dual domain");
  }
  DualEvaluation out;
  out.maximizers.reserve(dataset.size());
  double total = 0.0;
  for (const RoundData& round : dataset) {
    ActionVector x = primal_argmax(round, round.a, lambda);
    total += round.u.dot(x) - lambda.dot(residual(round, x));
    out.maximizers.push_back(std::move(x));
  }
  out.value = total / static_cast<double>(dataset.size()) + eval_conjugate(spec, lambda);
  return out;
}

OfflineSolution solve_offline(const Dataset& dataset, const PenaltySpec& spec,
                              const OfflineOptions& options) {
  if (options.max_iters < 1) throw std::invalid_argument("solve_offline: max_iters must be >= 1");
  if (!(options.tol > 0.0)) throw std::invalid_argument("solve_offline: tol must be positive");
  spec.validate();

  const StackedProblem problem(dataset);
  const DualDomain domain = dual_domain(spec);
  const RunBounds bounds = compute_bounds(dataset, spec);
  const double g = bounds.g_bound > 0.0 ? bounds.g_bound : 1.0;
  const double radius = dual_radius_l2(spec, problem.m());
  const int burn_in = static_cast<int>(options.burn_in_fraction * options.max_iters);
  const int check_every = std::max(1, options.check_every);

  DualVector lambda = DualVector::Zero(problem.m());
  Vector x;
  Vector x_sum;
  int averaged = 0;
  // Second average restarted at every power of two, so it only covers the
  // latest half of the iterates. Early maximizers belong to dual points far
  // from lambda*, and a full-history average keeps paying for them.
  Vector x_recent;
  int recent = 0;

  OfflineSolution solution;
  solution.d_value = std::numeric_limits<double>::infinity();
  solution.p_value = -std::numeric_limits<double>::infinity();

  for (int k = 1; k <= options.max_iters; ++k) {
    // D(lambda) = (1/T) sum max_x (u - A^T lambda)^T x + lambda^T b_mean + E*(lambda)
    const double reduced = problem.maximize(lambda, x);
    const double dual = reduced + lambda.dot(problem.b_mean()) + eval_conjugate(spec, lambda);
    if (dual < solution.d_value) {
      solution.d_value = dual;
      solution.lambda_star = lambda;
    }

    if (k > burn_in) {
      if (averaged == 0) x_sum = Vector::Zero(x.size());
      x_sum += x;
      ++averaged;
    }
    if ((k & (k - 1)) == 0) {
      x_recent = Vector::Zero(x.size());
      recent = 0;
    }
    x_recent += x;
    ++recent;
    solution.iterations = k;

    const bool last = k == options.max_iters;
    if (averaged > 0 && (averaged % check_every == 0 || last)) {
      for (const Vector* sum : {&x_sum, &x_recent}) {
        const Vector x_bar = *sum / static_cast<double>(sum == &x_sum ? averaged : recent);
        const double primal = problem.primal(spec, x_bar);
        if (primal > solution.p_value) {
          solution.p_value = primal;
          solution.primal_star = problem.unstack(x_bar);
        }
      }
      solution.gap = solution.d_value - solution.p_value;
      if (solution.converged(options.tol)) break;
    }
    if (last) break;

    const Vector subgradient = -problem.mean_residual(x) + conjugate_gradient(spec, lambda);
    const double step = radius / (g * std::sqrt(static_cast<double>(k)));
    lambda = project_dual(domain, lambda - step * subgradient);
  }
  solution.gap = solution.d_value - solution.p_value;
  return solution;
}

std::vector<Vector> optimal_error_vectors(const Dataset& dataset, const OfflineSolution& solution) {
  if (solution.primal_star.size() != dataset.size()) {
    throw std::invalid_argument("optimal_error_vectors: solution does not match the dataset");
  }
  std::vector<Vector> errors;
  errors.reserve(dataset.size());
  for (std::size_t t = 0; t < dataset.size(); ++t) {
    errors.push_back(residual(dataset[t], solution.primal_star[t]));
  }
  return errors;
}

}  // namespace saddleflow
