#include "saddleflow/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace saddleflow {

SimplexBlocks::SimplexBlocks(std::vector<std::size_t> offsets) : offsets_(std::move(offsets)) {
  if (offsets_.size() < 2 || offsets_.front() != 0) {
    throw std::invalid_argument("blocks: offsets must start at 0 and contain at least one block");
  }
  for (std::size_t i = 1; i < offsets_.size(); ++i) {
    if (offsets_[i] <= offsets_[i - 1]) {
      throw std::invalid_argument("blocks: offsets must be strictly increasing");
    }
  }
}

SimplexBlocks SimplexBlocks::single(std::size_t d) { return SimplexBlocks({0, d}); }

SimplexBlocks SimplexBlocks::uniform(std::size_t d, std::size_t count) {
  if (count == 0 || count > d) throw std::invalid_argument("blocks: need 1 <= count <= d");
  std::vector<std::size_t> offsets(count + 1, 0);
  for (std::size_t i = 1; i <= count; ++i) offsets[i] = (i * d) / count;
  return SimplexBlocks(std::move(offsets));
}

void RoundData::validate() const {
  if (a.rows() != b.size()) throw std::invalid_argument("round: A rows must equal len(b)");
  if (a.cols() != u.size()) throw std::invalid_argument("round: A cols must equal len(u)");
  if (blocks.dimension() != static_cast<std::size_t>(u.size())) {
    throw std::invalid_argument("round: blocks must cover exactly d coordinates");
  }
  if (!a.allFinite() || !b.allFinite() || !u.allFinite()) {
    throw std::invalid_argument("round: non-finite entries");
  }
}

bool is_feasible(const SimplexBlocks& blocks, const ActionVector& x, double tol) {
  if (static_cast<std::size_t>(x.size()) != blocks.dimension()) return false;
  if (x.size() > 0 && x.minCoeff() < -tol) return false;
  for (std::size_t k = 0; k < blocks.count(); ++k) {
    const auto begin = static_cast<Eigen::Index>(blocks.begin(k));
    const auto width = static_cast<Eigen::Index>(blocks.width(k));
    if (x.segment(begin, width).sum() > 1.0 + tol) return false;
  }
  return true;
}

ActionVector argmax_scores(const SimplexBlocks& blocks, const Vector& scores) {
  ActionVector x = ActionVector::Zero(scores.size());
  for (std::size_t k = 0; k < blocks.count(); ++k) {
    const auto begin = static_cast<Eigen::Index>(blocks.begin(k));
    const auto end = begin + static_cast<Eigen::Index>(blocks.width(k));
    Eigen::Index best = begin;
    for (Eigen::Index j = begin + 1; j < end; ++j) {
      if (scores[j] > scores[best]) best = j;
    }
    if (scores[best] > 0.0) x[best] = 1.0;
  }
  return x;
}

namespace {

void check_dims(const RoundData& round, const Matrix& a_used, const DualVector& lambda) {
  if (a_used.rows() != round.m() || a_used.cols() != round.d() || lambda.size() != round.m()) {
    throw std::invalid_argument("primal oracle: dimension mismatch");
  }
}

}  // namespace

ActionVector primal_argmax(const RoundData& round, const Matrix& a_used, const DualVector& lambda) {
  check_dims(round, a_used, lambda);
  const Vector scores = round.u - a_used.transpose() * lambda;
  return argmax_scores(round.blocks, scores);
}

ActionVector brute_force_argmax(const RoundData& round, const Matrix& a_used,
                                const DualVector& lambda) {
  check_dims(round, a_used, lambda);
  const Vector scores = round.u - a_used.transpose() * lambda;
  const std::size_t nblocks = round.blocks.count();

  // choice[k] in [0, width]; `width` encodes the origin of that block.
  double total = 1.0;
  for (std::size_t k = 0; k < nblocks; ++k) total *= static_cast<double>(round.blocks.width(k) + 1);
  if (total > 1e6) throw std::length_error("brute_force_argmax: more than 1e6 vertices");

  std::vector<std::size_t> choice(nblocks, 0);
  auto advance = [&]() {
    for (std::size_t k = nblocks; k-- > 0;) {
      if (++choice[k] <= round.blocks.width(k)) return true;
      choice[k] = 0;
    }
    return false;
  };
  std::vector<std::size_t> best_choice;
  double best_value = -std::numeric_limits<double>::infinity();
  while (true) {
    double value = 0.0;
    for (std::size_t k = 0; k < nblocks; ++k) {
      if (choice[k] < round.blocks.width(k)) {
        value += scores[static_cast<Eigen::Index>(round.blocks.begin(k) + choice[k])];
      }
    }
    if (value > best_value) {
      best_value = value;
      best_choice = choice;
    }
    if (!advance()) break;
  }

  ActionVector x = ActionVector::Zero(round.d());
  for (std::size_t k = 0; k < nblocks; ++k) {
    if (best_choice[k] < round.blocks.width(k)) {
      x[static_cast<Eigen::Index>(round.blocks.begin(k) + best_choice[k])] = 1.0;
    }
  }
  return x;
}

Vector residual(const RoundData& round, const ActionVector& x) {
  if (x.size() != round.d()) throw std::invalid_argument("residual: dimension mismatch");
  return round.a * x - round.b;
}

ActionVector project_block_simplex(const SimplexBlocks& blocks, const Vector& x) {
  if (static_cast<std::size_t>(x.size()) != blocks.dimension()) {
    throw std::invalid_argument("project_block_simplex: dimension mismatch");
  }
  ActionVector out = x.cwiseMax(0.0);
  for (std::size_t k = 0; k < blocks.count(); ++k) {
    const auto begin = static_cast<Eigen::Index>(blocks.begin(k));
    const auto width = static_cast<Eigen::Index>(blocks.width(k));
    auto segment = out.segment(begin, width);
    if (segment.sum() > 1.0) segment = project_simplex(x.segment(begin, width), 1.0);
  }
  return out;
}

double lagrangian(const RoundData& round, const PenaltySpec& spec, const ActionVector& x,
                  const DualVector& lambda) {
  return round.u.dot(x) - lambda.dot(residual(round, x)) + eval_conjugate(spec, lambda);
}

}  // namespace saddleflow
