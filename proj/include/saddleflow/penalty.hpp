#pragma once

#include <Eigen/Core>
#include <string>

namespace saddleflow {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Dual variable lambda. Kept as a plain Eigen vector so that it composes with
/// the rest of the linear algebra; membership in the dual domain is checked
/// where it matters (`in_domain`, `project_dual`).
using DualVector = Eigen::VectorXd;

enum class PenaltyKind { ScaledNorm, HuberL2 };
enum class NormKind { L1, L2, Linf };

/// A non-additive penalty E applied to the averaged residual.
///
/// ScaledNorm: E(z) = r_lambda * ||w||_q.
/// HuberL2:    E(z) = H_{r_lambda, L}(||w||_2).
/// with w = z, or w = [z]_+ for the asymmetric variants.
struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::ScaledNorm;
  NormKind q = NormKind::L2;
  bool asymmetric = false;
  double r_lambda = 1.0;
  double smoothness_l = 1.0;  // only meaningful for HuberL2

  static PenaltySpec norm(NormKind q, double r_lambda, bool asymmetric = false);
  static PenaltySpec huber(double r_lambda, double smoothness_l, bool asymmetric = false);

  /// Throws std::invalid_argument on non-positive radius or smoothness.
  void validate() const;
  bool strongly_convex_dual() const { return kind == PenaltyKind::HuberL2; }
  std::string describe() const;
};

/// Euclidean-projectable dual domain Lambda = dom(E*).
struct DualDomain {
  enum class Ball { L2Ball, LinfBox, L1Ball };
  Ball ball = Ball::L2Ball;
  double radius = 1.0;
  bool nonneg = false;
};

DualDomain dual_domain(const PenaltySpec& spec);

/// max_{lambda in Lambda} ||lambda||_2 for an m-dimensional dual space. This is
/// the radius entering step sizes and regret bounds; for the l1 penalty the
/// box [-R, R]^m has Euclidean radius R * sqrt(m).
double dual_radius_l2(const PenaltySpec& spec, Eigen::Index m);

bool in_domain(const DualDomain& domain, const Vector& lambda, double tol = 1e-9);

/// H_{r,s}(t) = 1/2 min{s t^2, r^2/s} + r [|t| - r/s]_+
double huber(double r, double s, double t);
/// d/dt H_{r,s}(t) = sign(t) min{s |t|, r}
double huber_derivative(double r, double s, double t);

double eval_penalty(const PenaltySpec& spec, const Vector& z);

/// E*(lambda); +infinity outside the dual domain.
double eval_conjugate(const PenaltySpec& spec, const DualVector& lambda);

/// Gradient of E* on its domain. Throws std::domain_error outside it.
Vector conjugate_gradient(const PenaltySpec& spec, const DualVector& lambda);

/// An element of the subdifferential of E at z, with a deterministic selection
/// at kinks: zero at the origin, lowest index for l-infinity ties.
Vector penalty_subgradient(const PenaltySpec& spec, const Vector& z);

/// Exact Euclidean projection onto the domain.
DualVector project_dual(const DualDomain& domain, const Vector& lambda);

/// Modulus of strong convexity of E* (1/L for Huber, 0 for norms).
double strong_convexity(const PenaltySpec& spec);

/// Sort-based projection of v onto {w >= 0, sum(w) = radius}.
Vector project_simplex(const Vector& v, double radius = 1.0);

/// Brute-force lower approximation of E*(lambda): max over a uniform grid of
/// [-grid_radius, grid_radius]^m of lambda^T z - E(z). Requires m <= 3.
double conjugate_bruteforce(const PenaltySpec& spec, const DualVector& lambda, double grid_radius,
                            int grid_points);

}  // namespace saddleflow
