#include "saddleflow/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace saddleflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vector positive_part(const Vector& z) { return z.cwiseMax(0.0); }

Vector effective_argument(const PenaltySpec& spec, const Vector& z) {
  return spec.asymmetric ? positive_part(z) : z;
}

double norm_of(NormKind q, const Vector& w) {
  switch (q) {
    case NormKind::L1:
      return w.lpNorm<1>();
    case NormKind::L2:
      return w.norm();
    case NormKind::Linf:
      return w.size() == 0 ? 0.0 : w.lpNorm<Eigen::Infinity>();
  }
  return 0.0;
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

PenaltySpec PenaltySpec::norm(NormKind q, double r_lambda, bool asymmetric) {
  PenaltySpec spec;
  spec.kind = PenaltyKind::ScaledNorm;
  spec.q = q;
  spec.r_lambda = r_lambda;
  spec.asymmetric = asymmetric;
  spec.validate();
  return spec;
}

PenaltySpec PenaltySpec::huber(double r_lambda, double smoothness_l, bool asymmetric) {
  PenaltySpec spec;
  spec.kind = PenaltyKind::HuberL2;
  spec.q = NormKind::L2;
  spec.r_lambda = r_lambda;
  spec.smoothness_l = smoothness_l;
  spec.asymmetric = asymmetric;
  spec.validate();
  return spec;
}

void PenaltySpec::validate() const {
  if (!(r_lambda > 0.0) || !std::isfinite(r_lambda)) {
    throw std::invalid_argument("penalty: r_lambda must be positive and finite");
  }
  if (kind == PenaltyKind::HuberL2) {
    if (!(smoothness_l > 0.0) || !std::isfinite(smoothness_l)) {
      throw std::invalid_argument("penalty: huber smoothness l must be positive and finite");
    }
    if (q != NormKind::L2) {
      throw std::invalid_argument("penalty: huber is only defined on the l2 norm");
    }
  }
}

std::string PenaltySpec::describe() const {
  std::ostringstream os;
  if (kind == PenaltyKind::HuberL2) {
    os << "huber(R=" << r_lambda << ",L=" << smoothness_l << ")";
  } else {
    const char* name = q == NormKind::L1 ? "l1" : (q == NormKind::L2 ? "l2" : "linf");
    os << name << "(R=" << r_lambda << ")";
  }
  if (asymmetric) os << "+";
  return os.str();
}

DualDomain dual_domain(const PenaltySpec& spec) {
  DualDomain domain;
  domain.radius = spec.r_lambda;
  domain.nonneg = spec.asymmetric;
  if (spec.kind == PenaltyKind::HuberL2) {
    domain.ball = DualDomain::Ball::L2Ball;
    return domain;
  }
  switch (spec.q) {
    case NormKind::L1:
      domain.ball = DualDomain::Ball::LinfBox;
      break;
    case NormKind::L2:
      domain.ball = DualDomain::Ball::L2Ball;
      break;
    case NormKind::Linf:
      domain.ball = DualDomain::Ball::L1Ball;
      break;
  }
  return domain;
}

double dual_radius_l2(const PenaltySpec& spec, Eigen::Index m) {
  const DualDomain domain = dual_domain(spec);
  if (domain.ball == DualDomain::Ball::LinfBox) {
    return domain.radius * std::sqrt(static_cast<double>(m));
  }
  return domain.radius;
}

bool in_domain(const DualDomain& domain, const Vector& lambda, double tol) {
  const double slack = tol * std::max(1.0, domain.radius);
  if (domain.nonneg && lambda.size() > 0 && lambda.minCoeff() < -slack) return false;
  switch (domain.ball) {
    case DualDomain::Ball::L2Ball:
      return lambda.norm() <= domain.radius + slack;
    case DualDomain::Ball::LinfBox:
      return lambda.size() == 0 || lambda.lpNorm<Eigen::Infinity>() <= domain.radius + slack;
    case DualDomain::Ball::L1Ball:
      return lambda.lpNorm<1>() <= domain.radius + slack;
  }
  return false;
}

double huber(double r, double s, double t) {
  const double a = std::abs(t);
  return 0.5 * std::min(s * t * t, r * r / s) + r * std::max(a - r / s, 0.0);
}

double huber_derivative(double r, double s, double t) {
  return sign(t) * std::min(s * std::abs(t), r);
}

double eval_penalty(const PenaltySpec& spec, const Vector& z) {
  const Vector w = effective_argument(spec, z);
  if (spec.kind == PenaltyKind::HuberL2) {
    return huber(spec.r_lambda, spec.smoothness_l, w.norm());
  }
  return spec.r_lambda * norm_of(spec.q, w);
}

double eval_conjugate(const PenaltySpec& spec, const DualVector& lambda) {
  if (!in_domain(dual_domain(spec), lambda)) return kInf;
  if (spec.kind == PenaltyKind::HuberL2) {
    return lambda.squaredNorm() / (2.0 * spec.smoothness_l);
  }
  return 0.0;
}

Vector conjugate_gradient(const PenaltySpec& spec, const DualVector& lambda) {
  if (!in_domain(dual_domain(spec), lambda)) {
    throw std::domain_error("conjugate_gradient: lambda outside the dual domain");
  }
  if (spec.kind == PenaltyKind::HuberL2) return lambda / spec.smoothness_l;
  return Vector::Zero(lambda.size());
}

Vector penalty_subgradient(const PenaltySpec& spec, const Vector& z) {
  const Vector w = effective_argument(spec, z);
  Vector g = Vector::Zero(z.size());
  const double r = spec.r_lambda;

  if (spec.kind == PenaltyKind::HuberL2) {
    const double t = w.norm();
    if (t > 0.0) g = huber_derivative(r, spec.smoothness_l, t) * w / t;
  } else {
    switch (spec.q) {
      case NormKind::L2: {
        const double t = w.norm();
        if (t > 0.0) g = r * w / t;
        break;
      }
      case NormKind::L1:
        for (Eigen::Index j = 0; j < w.size(); ++j) g[j] = r * sign(w[j]);
        break;
      case NormKind::Linf: {
        Eigen::Index best = -1;
        double best_abs = 0.0;
        for (Eigen::Index j = 0; j < w.size(); ++j) {
          if (std::abs(w[j]) > best_abs) {
            best_abs = std::abs(w[j]);
            best = j;
          }
        }
        if (best >= 0) g[best] = r * sign(w[best]);
        break;
      }
    }
  }

  if (spec.asymmetric) {
    for (Eigen::Index j = 0; j < z.size(); ++j) {
      if (z[j] <= 0.0) g[j] = 0.0;
    }
  }
  return g;
}

Vector project_simplex(const Vector& v, double radius) {
  const Eigen::Index n = v.size();
  if (n == 0) return v;
  std::vector<double> sorted(v.data(), v.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    cumulative += sorted[static_cast<std::size_t>(k)];
    const double candidate = (cumulative - radius) / static_cast<double>(k + 1);
    if (sorted[static_cast<std::size_t>(k)] - candidate > 0.0) theta = candidate;
  }
  return (v.array() - theta).cwiseMax(0.0).matrix();
}

DualVector project_dual(const DualDomain& domain, const Vector& lambda) {
  Vector v = domain.nonneg ? positive_part(lambda) : lambda;
  const double r = domain.radius;
  switch (domain.ball) {
    case DualDomain::Ball::L2Ball: {
      const double n = v.norm();
      if (n > r) v *= r / n;
      return v;
    }
    case DualDomain::Ball::LinfBox:
      return v.cwiseMax(domain.nonneg ? 0.0 : -r).cwiseMin(r);
    case DualDomain::Ball::L1Ball: {
      if (v.lpNorm<1>() <= r) return v;
      const Vector magnitude = project_simplex(v.cwiseAbs(), r);
      for (Eigen::Index j = 0; j < v.size(); ++j) v[j] = sign(v[j]) * magnitude[j];
      return v;
    }
  }
  return v;
}

double strong_convexity(const PenaltySpec& spec) {
  return spec.kind == PenaltyKind::HuberL2 ? 1.0 / spec.smoothness_l : 0.0;
}

double conjugate_bruteforce(const PenaltySpec& spec, const DualVector& lambda, double grid_radius,
                            int grid_points) {
  const Eigen::Index m = lambda.size();
  if (m < 1 || m > 3) throw std::invalid_argument("conjugate_bruteforce: requires 1 <= m <= 3");
  if (grid_points < 2) throw std::invalid_argument("conjugate_bruteforce: grid_points < 2");

  const double h = 2.0 * grid_radius / static_cast<double>(grid_points - 1);
  std::vector<int> index(static_cast<std::size_t>(m), 0);
  Vector z(m);
  double best = -kInf;
  while (true) {
    for (Eigen::Index j = 0; j < m; ++j) {
      z[j] = -grid_radius + h * index[static_cast<std::size_t>(j)];
    }
    best = std::max(best, lambda.dot(z) - eval_penalty(spec, z));

    Eigen::Index j = 0;
    while (j < m && ++index[static_cast<std::size_t>(j)] == grid_points) {
      index[static_cast<std::size_t>(j)] = 0;
      ++j;
    }
    if (j == m) break;
  }
  return best;
}

}  // namespace saddleflow
