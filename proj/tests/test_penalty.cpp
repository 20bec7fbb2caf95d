#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "saddleflow/penalty.hpp"

using namespace saddleflow;

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

std::vector<PenaltySpec> all_specs() {
  std::vector<PenaltySpec> out;
  for (bool asym : {false, true}) {
    out.push_back(PenaltySpec::norm(NormKind::L1, 1.5, asym));
    out.push_back(PenaltySpec::norm(NormKind::L2, 0.8, asym));
    out.push_back(PenaltySpec::norm(NormKind::Linf, 2.0, asym));
    out.push_back(PenaltySpec::huber(1.0, 1.0, asym));
    out.push_back(PenaltySpec::huber(3.0, 0.5, asym));
  }
  return out;
}

// Test-side reference for E, written from the definitions.
double reference_penalty(const PenaltySpec& spec, const Vector& z) {
  Vector w = spec.asymmetric ? Vector(z.cwiseMax(0.0)) : z;
  if (spec.kind == PenaltyKind::HuberL2) {
    const double t = w.norm();
    const double r = spec.r_lambda, s = spec.smoothness_l;
    return 0.5 * std::min(s * t * t, r * r / s) + r * std::max(0.0, t - r / s);
  }
  double n = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (spec.q == NormKind::L1) n += std::abs(w[i]);
    if (spec.q == NormKind::L2) n += w[i] * w[i];
    if (spec.q == NormKind::Linf) n = std::max(n, std::abs(w[i]));
  }
  if (spec.q == NormKind::L2) n = std::sqrt(n);
  return spec.r_lambda * n;
}

DualVector random_in_domain(std::mt19937_64& rng, const PenaltySpec& spec, Eigen::Index m) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const DualDomain dom = dual_domain(spec);
  Vector v(m);
  for (Eigen::Index i = 0; i < m; ++i) v[i] = 2.0 * dom.radius * unit(rng);
  return project_dual(dom, v) * (0.5 + 0.5 * std::abs(unit(rng)));
}

}  // namespace

TEST(Huber, HandValues) {
  EXPECT_DOUBLE_EQ(huber(1, 1, 0), 0.0);
  EXPECT_DOUBLE_EQ(huber(1, 1, 0.5), 0.125);
  EXPECT_DOUBLE_EQ(huber(2, 1, 5), 8.0);
}

TEST(Huber, EvenContinuousAndDerivativeMatchesFiniteDifferences) {
  for (double r : {0.5, 1.0, 3.0}) {
    for (double s : {0.25, 1.0, 4.0}) {
      const double kink = r / s;
      EXPECT_NEAR(huber(r, s, kink - 1e-12), huber(r, s, kink + 1e-12), 1e-9);
      for (double t = -3 * kink; t <= 3 * kink; t += kink / 7.3) {
        EXPECT_DOUBLE_EQ(huber(r, s, t), huber(r, s, -t));
        if (std::abs(std::abs(t) - kink) < 1e-3) continue;
        const double h = 1e-6;
        const double fd = (huber(r, s, t + h) - huber(r, s, t - h)) / (2 * h);
        EXPECT_NEAR(huber_derivative(r, s, t), fd, 1e-6 * std::max(1.0, r));
      }
    }
  }
}

TEST(Penalty, SpecExamples) {
  EXPECT_DOUBLE_EQ(eval_penalty(PenaltySpec::norm(NormKind::L2, 1.0), vec({0, 0})), 0.0);
  EXPECT_DOUBLE_EQ(eval_penalty(PenaltySpec::norm(NormKind::L2, 1.0, true), vec({-3, -4})), 0.0);
  EXPECT_DOUBLE_EQ(eval_penalty(PenaltySpec::huber(1.0, 1.0), vec({2, 0})), 1.5);
}

TEST(Penalty, MatchesReferenceOnRandomPoints) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (const PenaltySpec& spec : all_specs()) {
    for (int k = 0; k < 200; ++k) {
      Vector z(4);
      for (auto& x : z) x = 3 * g(rng);
      EXPECT_NEAR(eval_penalty(spec, z), reference_penalty(spec, z), 1e-12) << spec.describe();
      EXPECT_GE(eval_penalty(spec, z), 0.0);
    }
  }
}

TEST(Penalty, InvalidSpecsAreRejected) {
  EXPECT_THROW(PenaltySpec::norm(NormKind::L2, 0.0), std::invalid_argument);
  EXPECT_THROW(PenaltySpec::norm(NormKind::L2, -1.0), std::invalid_argument);
  EXPECT_THROW(PenaltySpec::huber(1.0, 0.0), std::invalid_argument);
}

TEST(DualDomain, CatalogMapping) {
  EXPECT_EQ(dual_domain(PenaltySpec::norm(NormKind::L1, 2)).ball, DualDomain::Ball::LinfBox);
  EXPECT_EQ(dual_domain(PenaltySpec::norm(NormKind::L2, 2)).ball, DualDomain::Ball::L2Ball);
  EXPECT_EQ(dual_domain(PenaltySpec::norm(NormKind::Linf, 2)).ball, DualDomain::Ball::L1Ball);
  EXPECT_EQ(dual_domain(PenaltySpec::huber(2, 1)).ball, DualDomain::Ball::L2Ball);
  EXPECT_TRUE(dual_domain(PenaltySpec::huber(2, 1, true)).nonneg);
  EXPECT_FALSE(dual_domain(PenaltySpec::norm(NormKind::L1, 2)).nonneg);
  EXPECT_DOUBLE_EQ(dual_domain(PenaltySpec::norm(NormKind::L1, 2)).radius, 2.0);
  EXPECT_DOUBLE_EQ(dual_radius_l2(PenaltySpec::norm(NormKind::L1, 2), 4), 4.0);
  EXPECT_DOUBLE_EQ(dual_radius_l2(PenaltySpec::norm(NormKind::L2, 2), 4), 2.0);
}

TEST(Conjugate, SpecExamples) {
  const auto l2 = PenaltySpec::norm(NormKind::L2, 1.0);
  EXPECT_DOUBLE_EQ(eval_conjugate(l2, vec({0.3, 0.4})), 0.0);
  EXPECT_EQ(eval_conjugate(l2, vec({3, 4})), std::numeric_limits<double>::infinity());
  EXPECT_NEAR(eval_conjugate(PenaltySpec::huber(1.0, 2.0), vec({0.6, 0.8})), 0.25, 1e-15);
}

TEST(Conjugate, GradientExamples) {
  const Vector g1 = conjugate_gradient(PenaltySpec::norm(NormKind::L1, 5.0), vec({1, -2}));
  EXPECT_EQ(g1, vec({0, 0}));
  const Vector g2 = conjugate_gradient(PenaltySpec::huber(1.0, 4.0), vec({0.4, 0}));
  EXPECT_NEAR(g2[0], 0.1, 1e-15);
  EXPECT_EQ(g2[1], 0.0);
  EXPECT_EQ(conjugate_gradient(PenaltySpec::huber(1.0, 1.0), vec({0, 0})), vec({0, 0}));
  EXPECT_THROW(conjugate_gradient(PenaltySpec::huber(1.0, 1.0), vec({3, 0})), std::domain_error);
}

TEST(Conjugate, FiniteExactlyOnTheDomain) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(-3.0, 3.0);
  for (const PenaltySpec& spec : all_specs()) {
    const DualDomain dom = dual_domain(spec);
    for (int k = 0; k < 300; ++k) {
      Vector l(3);
      for (auto& x : l) x = unit(rng) * spec.r_lambda;
      EXPECT_EQ(std::isfinite(eval_conjugate(spec, l)), in_domain(dom, l)) << spec.describe();
    }
  }
}

TEST(Conjugate, BruteforceExamples) {
  EXPECT_NEAR(conjugate_bruteforce(PenaltySpec::huber(1, 1), vec({0.5}), 5.0, 10001), 0.125, 1e-3);
  EXPECT_DOUBLE_EQ(conjugate_bruteforce(PenaltySpec::norm(NormKind::L2, 1), vec({0}), 5.0, 1001), 0.0);
  EXPECT_NEAR(conjugate_bruteforce(PenaltySpec::norm(NormKind::L2, 1), vec({2}), 5.0, 1001), 5.0, 1e-9);
  EXPECT_THROW(conjugate_bruteforce(PenaltySpec::norm(NormKind::L2, 1), Vector::Zero(4), 1.0, 3),
               std::invalid_argument);
}

TEST(Conjugate, FenchelYoung) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  for (const PenaltySpec& spec : all_specs()) {
    for (int k = 0; k < 500; ++k) {
      Vector z(3);
      for (auto& x : z) x = 2 * g(rng);
      const DualVector l = random_in_domain(rng, spec, 3);
      EXPECT_LE(l.dot(z), eval_penalty(spec, z) + eval_conjugate(spec, l) + 1e-12) << spec.describe();
    }
  }
}

TEST(Subgradient, SpecExamples) {
  EXPECT_EQ(penalty_subgradient(PenaltySpec::norm(NormKind::L1, 2), vec({1, -3, 0})), vec({2, -2, 0}));
  const Vector g = penalty_subgradient(PenaltySpec::norm(NormKind::L2, 1), vec({3, 4}));
  EXPECT_NEAR(g[0], 0.6, 1e-15);
  EXPECT_NEAR(g[1], 0.8, 1e-15);
  for (const PenaltySpec& spec : all_specs()) {
    EXPECT_EQ(penalty_subgradient(spec, Vector::Zero(3)), Vector::Zero(3)) << spec.describe();
  }
  // l-infinity ties go to the lowest index.
  EXPECT_EQ(penalty_subgradient(PenaltySpec::norm(NormKind::Linf, 1), vec({-2, 2, 1})), vec({-1, 0, 0}));
}

TEST(Subgradient, SatisfiesTheSubgradientInequality) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  for (const PenaltySpec& spec : all_specs()) {
    for (int k = 0; k < 1000; ++k) {
      Vector z(3), y(3);
      for (auto& x : z) x = 2 * g(rng);
      for (auto& x : y) x = 2 * g(rng);
      if (k % 10 == 0) z[1] = 0.0;
      const Vector s = penalty_subgradient(spec, z);
      EXPECT_GE(eval_penalty(spec, y), eval_penalty(spec, z) + s.dot(y - z) - 1e-12) << spec.describe();
    }
  }
}

TEST(Projection, SpecExamples) {
  const DualDomain ball{DualDomain::Ball::L2Ball, 1.0, false};
  const DualVector p = project_dual(ball, vec({3, 4}));
  EXPECT_NEAR(p[0], 0.6, 1e-15);
  EXPECT_NEAR(p[1], 0.8, 1e-15);
  const DualDomain half{DualDomain::Ball::L2Ball, 1.0, true};
  EXPECT_EQ(project_dual(half, vec({-1, 2})), vec({0, 1}));
  const DualDomain box{DualDomain::Ball::LinfBox, 1.0, true};
  EXPECT_EQ(project_dual(box, vec({-3, 0.5, 7})), vec({0, 0.5, 1}));
  const DualDomain l1{DualDomain::Ball::L1Ball, 1.0, false};
  const DualVector q = project_dual(l1, vec({2, -0.5}));
  EXPECT_NEAR(q[0], 1.0, 1e-15);
  EXPECT_NEAR(q[1], 0.0, 1e-15);
}

TEST(Projection, IdempotentAndNonexpansive) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (const PenaltySpec& spec : all_specs()) {
    const DualDomain dom = dual_domain(spec);
    for (int k = 0; k < 300; ++k) {
      Vector a(4), b(4);
      for (auto& x : a) x = 3 * g(rng);
      for (auto& x : b) x = 3 * g(rng);
      const DualVector pa = project_dual(dom, a);
      const DualVector pb = project_dual(dom, b);
      EXPECT_TRUE(in_domain(dom, pa));
      EXPECT_LE((project_dual(dom, pa) - pa).norm(), 1e-12);
      EXPECT_LE((pa - pb).norm(), (a - b).norm() + 1e-12);
    }
  }
}

// Optimality against a 201 x 201 grid of domain points at m = 2.
TEST(Projection, NoCloserGridPointInTwoDimensions) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  for (const PenaltySpec& spec : all_specs()) {
    const DualDomain dom = dual_domain(spec);
    std::vector<Vector> grid;
    for (int i = 0; i < 201; ++i) {
      for (int j = 0; j < 201; ++j) {
        Vector w(2);
        w << -dom.radius + dom.radius * i / 100.0, -dom.radius + dom.radius * j / 100.0;
        if (in_domain(dom, w, 0.0)) grid.push_back(w);
      }
    }
    for (int k = 0; k < 100; ++k) {
      Vector l(2);
      for (auto& x : l) x = 2 * dom.radius * g(rng);
      const double d = (l - project_dual(dom, l)).norm();
      double best = std::numeric_limits<double>::infinity();
      for (const Vector& w : grid) best = std::min(best, (l - w).norm());
      EXPECT_LE(d, best + 1e-9) << spec.describe();
    }
  }
}

TEST(Projection, SimplexSortBased) {
  const Vector p = project_simplex(vec({0.1, 2.0, 0.5}), 1.0);
  EXPECT_NEAR(p.sum(), 1.0, 1e-15);
  // Two active coordinates would need theta = (2.0 + 0.5 - 1) / 2 = 0.75 > 0.5,
  // so only the top one stays: theta = 1.0.
  EXPECT_NEAR(p[0], 0.0, 1e-15);
  EXPECT_NEAR(p[1], 1.0, 1e-15);
  EXPECT_NEAR(p[2], 0.0, 1e-15);
  const Vector q = project_simplex(vec({0.6, 0.6}), 1.0);
  EXPECT_NEAR(q[0], 0.5, 1e-15);
  EXPECT_NEAR(q[1], 0.5, 1e-15);
}

TEST(StrongConvexity, Moduli) {
  EXPECT_DOUBLE_EQ(strong_convexity(PenaltySpec::huber(1, 2)), 0.5);
  EXPECT_DOUBLE_EQ(strong_convexity(PenaltySpec::huber(1, 1)), 1.0);
  EXPECT_DOUBLE_EQ(strong_convexity(PenaltySpec::norm(NormKind::L2, 1)), 0.0);
}
