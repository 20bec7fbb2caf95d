#pragma once

#include <cstddef>
#include <vector>

#include "saddleflow/penalty.hpp"

namespace saddleflow {

/// Primal action x_t. Feasible when x >= 0 and every block sums to at most 1.
using ActionVector = Eigen::VectorXd;

/// Contiguous partition of {0, ..., d-1}; one block per bid request. Each block
/// is a simplex with slack {v >= 0, 1^T v <= 1}.
class SimplexBlocks {
 public:
  SimplexBlocks() = default;
  /// offsets = {0, o_1, ..., d}; strictly increasing.
  explicit SimplexBlocks(std::vector<std::size_t> offsets);

  static SimplexBlocks single(std::size_t d);
  /// `count` blocks of (nearly) equal width covering d coordinates.
  static SimplexBlocks uniform(std::size_t d, std::size_t count);

  std::size_t count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t dimension() const { return offsets_.empty() ? 0 : offsets_.back(); }
  std::size_t begin(std::size_t block) const { return offsets_[block]; }
  std::size_t width(std::size_t block) const { return offsets_[block + 1] - offsets_[block]; }
  const std::vector<std::size_t>& offsets() const { return offsets_; }

  bool operator==(const SimplexBlocks&) const = default;

 private:
  std::vector<std::size_t> offsets_;
};

/// One round of the online game: reward u_t^T x, constraint matrix A_t and
/// target b_t.
struct RoundData {
  Matrix a;  // m x d
  Vector b;  // m
  Vector u;  // d
  SimplexBlocks blocks;

  Eigen::Index m() const { return a.rows(); }
  Eigen::Index d() const { return a.cols(); }
  /// Throws std::invalid_argument on inconsistent dimensions or non-finite data.
  void validate() const;
};

using Dataset = std::vector<RoundData>;

bool is_feasible(const SimplexBlocks& blocks, const ActionVector& x, double tol = 1e-9);

/// Exact maximizer of (u - a_used^T lambda)^T x over the block product.
/// Per block: unit mass on the lowest index of the largest score when that
/// score is strictly positive, otherwise the block stays empty.
ActionVector primal_argmax(const RoundData& round, const Matrix& a_used, const DualVector& lambda);

/// Score-vector form of primal_argmax, shared with the offline solver.
ActionVector argmax_scores(const SimplexBlocks& blocks, const Vector& scores);

/// Exhaustive enumeration over block vertices (unit vectors and the origin).
/// Throws std::length_error when the vertex count exceeds 10^6.
ActionVector brute_force_argmax(const RoundData& round, const Matrix& a_used,
                                const DualVector& lambda);

/// A_t x - b_t
Vector residual(const RoundData& round, const ActionVector& x);

/// Per-block Euclidean projection onto {v >= 0, 1^T v <= 1}.
ActionVector project_block_simplex(const SimplexBlocks& blocks, const Vector& x);

/// L_t(x, lambda) = u^T x - lambda^T (A x - b) + E*(lambda)
double lagrangian(const RoundData& round, const PenaltySpec& spec, const ActionVector& x,
                  const DualVector& lambda);

}  // namespace saddleflow
