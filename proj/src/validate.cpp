#include "saddleflow/validate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "saddleflow/data.hpp"
#include "saddleflow/diagnostics.hpp"
#include "saddleflow/offline.hpp"
#include "saddleflow/online.hpp"

namespace saddleflow {

namespace {

std::string fmt(double value) {
  std::ostringstream os;
  os.precision(10);
  os << value;
  return os.str();
}

std::string fmt(const Vector& v) {
  std::ostringstream os;
  os.precision(10);
  os << '(';
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ')';
  return os.str();
}

void expect(SuiteResult& suite, bool ok, const std::string& invariant, const std::string& witness) {
  ++suite.checks;
  if (!ok) suite.failures.push_back(invariant + ": " + witness);
}

std::vector<PenaltySpec> penalty_catalog() {
  std::vector<PenaltySpec> out;
  for (bool asymmetric : {false, true}) {
    out.push_back(PenaltySpec::norm(NormKind::L1, 1.0, asymmetric));
    out.push_back(PenaltySpec::norm(NormKind::L2, 0.7, asymmetric));
    out.push_back(PenaltySpec::norm(NormKind::Linf, 1.3, asymmetric));
    out.push_back(PenaltySpec::huber(1.0, 1.0, asymmetric));
    out.push_back(PenaltySpec::huber(2.0, 0.5, asymmetric));
  }
  return out;
}

Vector gaussian_vector(RoundStream& stream, Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = stream.draw(Distribution::Gaussian);
  return v;
}

// A point of the dual domain; domains are convex and contain 0, so scaling a
// projected point toward the origin stays inside.
DualVector sample_dual(RoundStream& stream, const PenaltySpec& spec, Eigen::Index m) {
  const DualDomain domain = dual_domain(spec);
  Vector v(m);
  for (Eigen::Index i = 0; i < m; ++i) v[i] = (4.0 * stream.uniform01() - 2.0) * domain.radius;
  return project_dual(domain, v) * stream.uniform01();
}

ActionVector sample_feasible(RoundStream& stream, const SimplexBlocks& blocks) {
  ActionVector x = ActionVector::Zero(static_cast<Eigen::Index>(blocks.dimension()));
  for (std::size_t k = 0; k < blocks.count(); ++k) {
    double total = -std::log(stream.uniform01());  // slack mass
    for (std::size_t j = 0; j < blocks.width(k); ++j) {
      const auto i = static_cast<Eigen::Index>(blocks.begin(k) + j);
      x[i] = -std::log(stream.uniform01());
      total += x[i];
    }
    for (std::size_t j = 0; j < blocks.width(k); ++j) {
      x[static_cast<Eigen::Index>(blocks.begin(k) + j)] /= total;
    }
  }
  return x;
}

GeneratorConfig small_generator(std::uint64_t seed, int horizon) {
  GeneratorConfig g;
  g.m = 5;
  g.d = 4;
  g.horizon = horizon;
  g.seed = seed;
  return g;
}

}  // namespace

bool ValidationReport::passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed(); });
}

std::string ValidationReport::format() const {
  std::string out;
  for (const SuiteResult& s : suites) {
    out += std::string(s.passed() ? "PASS" : "FAIL") + "  " + s.module + "/" + s.name + "  (" +
           std::to_string(s.checks - static_cast<int>(s.failures.size())) + "/" +
           std::to_string(s.checks) + " checks)\n";
    const std::size_t shown = std::min<std::size_t>(s.failures.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) out += "    " + s.failures[i] + "\n";
    if (s.failures.size() > shown) {
      out += "    ... " + std::to_string(s.failures.size() - shown) + " more\n";
    }
  }
  return out;
}

SuiteResult validate_conjugacy(const ValidationHooks& hooks) {
  SuiteResult suite{"conjugacy", "penalty", 0, {}};
  constexpr double kGridRadius = 10.0;
  RoundStream stream(0xC0417, 0);
  for (const PenaltySpec& spec : penalty_catalog()) {
    const DualDomain domain = dual_domain(spec);
    for (Eigen::Index m : {1, 2}) {
      const int grid_points = m == 1 ? 4001 : 401;
      for (int sample = 0; sample < 6; ++sample) {
        Vector lambda(m);
        for (Eigen::Index i = 0; i < m; ++i) lambda[i] = (4.0 * stream.uniform01() - 2.0) * domain.radius;
        const double distance = (lambda - hooks.project(domain, lambda)).norm();
        const double brute = conjugate_bruteforce(spec, lambda, kGridRadius, grid_points);
        if (in_domain(domain, lambda)) {
          const double exact = eval_conjugate(spec, lambda);
          expect(suite, std::abs(brute - exact) <= 5e-2, spec.describe() + " E*(lambda) matches grid sup",
                 "lambda=" + fmt(lambda) + " closed=" + fmt(exact) + " grid=" + fmt(brute));
          expect(suite, distance <= 1e-9, spec.describe() + " projection fixes domain points",
                 "lambda=" + fmt(lambda) + " moved by " + fmt(distance));
        } else if (distance > 0.1) {
          // Outside the domain the sup grows at least linearly along the normal
          // direction of the nearest domain point.
          expect(suite, brute >= 0.4 * distance * kGridRadius,
                 spec.describe() + " E*(lambda) diverges outside the domain",
                 "lambda=" + fmt(lambda) + " distance=" + fmt(distance) + " grid=" + fmt(brute));
        }
      }
    }
  }
  return suite;
}

SuiteResult validate_projection(const ValidationHooks& hooks) {
  SuiteResult suite{"projection_optimality", "penalty", 0, {}};
  RoundStream stream(0x9E01, 0);
  for (const PenaltySpec& spec : penalty_catalog()) {
    const DualDomain domain = dual_domain(spec);
    for (Eigen::Index m : {1, 2, 3, 5, 8}) {
      for (int sample = 0; sample < 10; ++sample) {
        const Vector v = 2.0 * domain.radius * gaussian_vector(stream, m);
        const DualVector p = hooks.project(domain, v);
        expect(suite, in_domain(domain, p), spec.describe() + " projection lands in the domain",
               "v=" + fmt(v) + " p=" + fmt(p));
        // Variational inequality (v - p)^T (w - p) <= 0 against vertices and
        // random domain points w.
        std::vector<DualVector> witnesses;
        if (domain.ball == DualDomain::Ball::LinfBox) {
          const double low = domain.nonneg ? 0.0 : -domain.radius;
          for (unsigned corner = 0; corner < (1u << std::min<Eigen::Index>(m, 8)); ++corner) {
            DualVector w(m);
            for (Eigen::Index i = 0; i < m; ++i) w[i] = (corner >> i) & 1u ? domain.radius : low;
            witnesses.push_back(w);
          }
        } else {
          for (Eigen::Index i = 0; i < m; ++i) {
            for (double s : {1.0, -1.0}) {
              DualVector w = DualVector::Zero(m);
              w[i] = s * domain.radius;
              if (in_domain(domain, w)) witnesses.push_back(w);
            }
          }
        }
        for (int k = 0; k < 10; ++k) witnesses.push_back(sample_dual(stream, spec, m));
        double worst = -1e300;
        for (const DualVector& w : witnesses) worst = std::max(worst, (v - p).dot(w - p));
        expect(suite, worst <= 1e-9 * std::max(1.0, v.squaredNorm()),
               spec.describe() + " projection is the nearest domain point",
               "v=" + fmt(v) + " p=" + fmt(p) + " max (v-p)^T(w-p)=" + fmt(worst));
      }
    }
  }
  return suite;
}

SuiteResult validate_oracle() {
  SuiteResult suite{"argmax_vs_enumeration", "oracle", 0, {}};
  for (int instance = 0; instance < 300; ++instance) {
    RoundStream stream(0x0AC1E, static_cast<std::uint64_t>(instance));
    const auto m = static_cast<Eigen::Index>(1 + instance % 4);
    const auto d = static_cast<std::size_t>(1 + instance % 7);
    const std::size_t count = 1 + static_cast<std::size_t>(stream.uniform01() * static_cast<double>(d));
    RoundData round;
    round.blocks = SimplexBlocks::uniform(d, std::min(count, d));
    round.a = Matrix(m, static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < round.a.size(); ++i) round.a.data()[i] = stream.draw(Distribution::Gaussian);
    round.b = gaussian_vector(stream, m);
    round.u = gaussian_vector(stream, static_cast<Eigen::Index>(d));
    const DualVector lambda = gaussian_vector(stream, m);
    const Vector scores = round.u - round.a.transpose() * lambda;
    const ActionVector fast = primal_argmax(round, round.a, lambda);
    const ActionVector slow = brute_force_argmax(round, round.a, lambda);
    const double gap = std::abs(scores.dot(fast) - scores.dot(slow));
    expect(suite, gap <= 1e-12 && is_feasible(round.blocks, fast), "oracle value equals enumeration",
           "instance " + std::to_string(instance) + " gap=" + fmt(gap));
  }
  return suite;
}

SuiteResult validate_static_dual_regret() {
  SuiteResult suite{"static_dual_regret", "online", 0, {}};
  const std::vector<PenaltySpec> specs = {PenaltySpec::norm(NormKind::L1, 1.0), PenaltySpec::norm(NormKind::L2, 1.0),
                                          PenaltySpec::norm(NormKind::Linf, 1.0, true),
                                          PenaltySpec::huber(1.0, 1.0), PenaltySpec::huber(1.0, 4.0, true)};
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Dataset dataset = generate(small_generator(100 + seed, 100));
    for (const PenaltySpec& spec : specs) {
      const StepSchedule schedule = StepSchedule::for_dataset(dataset, spec, compute_bounds(dataset, spec));
      const RunTrace trace = run_algorithm1(dataset, spec, schedule, DualVector::Zero(5));
      const double bound = regret_term(schedule);
      RoundStream stream(seed, 7);
      for (int k = 0; k < 20; ++k) {
        const DualVector comparator = sample_dual(stream, spec, 5);
        const double regret = static_dual_regret(trace, dataset, spec, comparator);
        expect(suite, regret <= bound + 1e-9, spec.describe() + " static dual regret <= R_T",
               "seed " + std::to_string(seed) + " regret=" + fmt(regret) + " R_T=" + fmt(bound));
      }
      const double variation = dual_path_variation(trace);
      const double epsilon = schedule.g_bound * schedule.eta_sum();
      expect(suite, variation <= epsilon + 1e-9, spec.describe() + " dual path variation <= epsilon",
             "variation=" + fmt(variation) + " epsilon=" + fmt(epsilon));
    }
  }
  return suite;
}

SuiteResult validate_matrix_tracking() {
  SuiteResult suite{"matrix_tracking", "online", 0, {}};
  const PenaltySpec spec = PenaltySpec::norm(NormKind::L2, 1.0);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    GeneratorConfig g = small_generator(200 + seed, 200);
    g.drift = 0.01;
    const Dataset dataset = generate(g);
    const StepSchedule schedule = StepSchedule::for_dataset(dataset, spec, compute_bounds(dataset, spec));
    const RunTrace trace = run_algorithm2(dataset, spec, schedule, DualVector::Zero(g.m), Matrix::Zero(g.m, g.d));
    const double error = mean_matrix_tracking_error(trace, dataset);
    const double bound = 3.0 / std::sqrt(static_cast<double>(g.horizon)) *
                         (schedule.matrix_radius + matrix_variation(dataset));
    expect(suite, error <= bound + 1e-9, "mean tracking error <= 3/sqrt(T) (R_A + variation)",
           "seed " + std::to_string(seed) + " error=" + fmt(error) + " bound=" + fmt(bound));
    double worst_norm = 0.0;
    for (const RoundRecord& r : trace.rounds) worst_norm = std::max(worst_norm, r.a_hat.norm());
    expect(suite, worst_norm <= schedule.matrix_radius + 1e-12, "estimates stay in the Frobenius ball",
           "max ||A_hat||=" + fmt(worst_norm) + " R_A=" + fmt(schedule.matrix_radius));
  }
  return suite;
}

SuiteResult validate_regret_bound() {
  SuiteResult suite{"regret_bound", "diagnostics", 0, {}};
  OfflineOptions offline;
  offline.tol = 1e-5;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Dataset dataset = generate(small_generator(300 + seed, 50));
    for (const PenaltySpec& spec : {PenaltySpec::norm(NormKind::L1, 1.0), PenaltySpec::huber(1.0, 1.0)}) {
      const StepSchedule schedule = StepSchedule::for_dataset(dataset, spec, compute_bounds(dataset, spec));
      const OfflineSolution solution = solve_offline(dataset, spec, offline);
      expect(suite, solution.gap >= -1e-9, spec.describe() + " offline bracket is ordered",
             "gap=" + fmt(solution.gap));
      const RunTrace runs[2] = {
          run_algorithm1(dataset, spec, schedule, DualVector::Zero(5)),
          run_algorithm2(dataset, spec, schedule, DualVector::Zero(5), Matrix::Zero(5, 4))};
      for (const RunTrace& trace : runs) {
        const BoundReport report = bound_components(trace, dataset, spec, schedule, solution);
        const std::string label = spec.describe() + (trace.estimated_matrices() ? " alg2" : " alg1");
        expect(suite, report.within_bound(), label + " regret <= R_T + S_e + S_A",
               "seed " + std::to_string(seed) + " regret=" + fmt(report.empirical_regret) +
                   " bound=" + fmt(report.bound_total));
        expect(suite, report.lower_bound <= report.empirical_regret + 1e-9, label + " lower bound below regret",
               "lower=" + fmt(report.lower_bound) + " regret=" + fmt(report.empirical_regret));
      }
    }
  }
  return suite;
}

SuiteResult validate_weak_duality() {
  SuiteResult suite{"weak_duality", "offline", 0, {}};
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    GeneratorConfig g = small_generator(400 + seed, 20);
    g.block_offsets = {0, 2, 4};
    const Dataset dataset = generate(g);
    RoundStream stream(seed, 11);
    for (const PenaltySpec& spec : penalty_catalog()) {
      for (int k = 0; k < 5; ++k) {
        const DualVector lambda = sample_dual(stream, spec, g.m);
        std::vector<ActionVector> xs;
        for (const RoundData& round : dataset) xs.push_back(sample_feasible(stream, round.blocks));
        const double dual = eval_dual(dataset, spec, lambda).value;
        const double primal = eval_primal(dataset, spec, xs);
        expect(suite, dual >= primal - 1e-9, spec.describe() + " D(lambda) >= P(x)",
               "D=" + fmt(dual) + " P=" + fmt(primal));
      }
    }
  }
  return suite;
}

SuiteResult validate_max_psi_concentration() {
  SuiteResult suite{"max_psi_monte_carlo", "diagnostics", 0, {}};
  struct Setting {
    double sigma;
    double drift;
    int m;
    int horizon;
  };
  const Setting settings[] = {{1.0, 0.0, 2, 20}, {0.5, 0.1, 3, 30}, {2.0, 0.0, 1, 10}, {0.1, 1.0, 4, 25}};
  std::uint64_t seed = 500;
  for (const Setting& s : settings) {
    std::vector<Vector> mu(static_cast<std::size_t>(s.horizon), Vector::Zero(s.m));
    for (int t = 0; t < s.horizon; ++t) mu[static_cast<std::size_t>(t)].setConstant(s.drift * t);
    const MonteCarloResult r = max_psi_monte_carlo(s.sigma, mu, s.horizon, s.m, 500, seed++);
    expect(suite, r.empirical_mean <= r.bound + 3.0 * r.standard_error, "E[max Psi] <= bound",
           "sigma=" + fmt(s.sigma) + " mean=" + fmt(r.empirical_mean) + " se=" + fmt(r.standard_error) +
               " bound=" + fmt(r.bound));
  }
  return suite;
}

ValidationReport run_validation(const ValidationHooks& hooks) {
  ValidationReport report;
  report.suites.push_back(validate_conjugacy(hooks));
  report.suites.push_back(validate_projection(hooks));
  report.suites.push_back(validate_oracle());
  report.suites.push_back(validate_static_dual_regret());
  report.suites.push_back(validate_matrix_tracking());
  report.suites.push_back(validate_regret_bound());
  report.suites.push_back(validate_weak_duality());
  report.suites.push_back(validate_max_psi_concentration());
  return report;
}

}  // namespace saddleflow
