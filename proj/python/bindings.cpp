#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cmath>
#include <optional>

#include "saddleflow/data.hpp"
#include "saddleflow/diagnostics.hpp"
#include "saddleflow/experiments.hpp"
#include "saddleflow/offline.hpp"
#include "saddleflow/online.hpp"
#include "saddleflow/oracle.hpp"
#include "saddleflow/penalty.hpp"
#include "saddleflow/validate.hpp"

namespace py = pybind11;
using namespace saddleflow;

namespace {

NormKind norm_from_python(const py::object& q) {
  if (py::isinstance<py::str>(q)) {
    const auto s = q.cast<std::string>();
    if (s == "inf") return NormKind::Linf;
    throw py::value_error("q must be 1, 2 or 'inf'");
  }
  const double v = q.cast<double>();
  if (v == 1.0) return NormKind::L1;
  if (v == 2.0) return NormKind::L2;
  if (std::isinf(v)) return NormKind::Linf;
  throw py::value_error("q must be 1, 2 or 'inf'");
}

RoundData make_round(Matrix a, Vector b, Vector u, std::optional<std::vector<std::size_t>> offsets) {
  RoundData r;
  r.blocks = offsets ? SimplexBlocks(*offsets) : SimplexBlocks::single(static_cast<std::size_t>(a.cols()));
  r.a = std::move(a);
  r.b = std::move(b);
  r.u = std::move(u);
  r.validate();
  return r;
}

StepSchedule default_schedule(const Dataset& dataset, const PenaltySpec& spec) {
  if (dataset.empty()) throw py::value_error("dataset has no rounds");
  return StepSchedule::for_dataset(dataset, spec, compute_bounds(dataset, spec));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Online primal-dual optimization with non-additive long-term penalties.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DatasetError>(m, "DatasetError", PyExc_IOError);

  py::enum_<NormKind>(m, "NormKind").value("L1", NormKind::L1).value("L2", NormKind::L2).value("Linf", NormKind::Linf);
  py::enum_<PenaltyKind>(m, "PenaltyKind")
      .value("ScaledNorm", PenaltyKind::ScaledNorm)
      .value("HuberL2", PenaltyKind::HuberL2);
  py::enum_<Distribution>(m, "Distribution")
      .value("Gaussian", Distribution::Gaussian)
      .value("Cauchy", Distribution::Cauchy)
      .value("Uniform", Distribution::Uniform)
      .value("Gamma", Distribution::Gamma);
  py::enum_<DualMode>(m, "DualMode")
      .value("ConvexFixed", DualMode::ConvexFixed)
      .value("StronglyConvex", DualMode::StronglyConvex);

  py::class_<PenaltySpec>(m, "PenaltySpec")
      .def_static(
          "norm", [](const py::object& q, double r, bool asymmetric) { return PenaltySpec::norm(norm_from_python(q), r, asymmetric); },
          py::arg("q"), py::arg("r_lambda"), py::arg("asymmetric") = false)
      .def_static("huber", &PenaltySpec::huber, py::arg("r_lambda"), py::arg("smoothness_l"),
                  py::arg("asymmetric") = false)
      .def_readonly("kind", &PenaltySpec::kind)
      .def_readonly("q", &PenaltySpec::q)
      .def_readonly("asymmetric", &PenaltySpec::asymmetric)
      .def_readonly("r_lambda", &PenaltySpec::r_lambda)
      .def_readonly("smoothness_l", &PenaltySpec::smoothness_l)
      .def("__repr__", &PenaltySpec::describe);

  m.def("penalty", &eval_penalty, py::arg("spec"), py::arg("z"));
  m.def("conjugate", &eval_conjugate, py::arg("spec"), py::arg("lam"),
        "E*(lambda); inf outside the dual domain.");
  m.def(
      "project_dual", [](const PenaltySpec& spec, const Vector& v) { return project_dual(dual_domain(spec), v); },
      py::arg("spec"), py::arg("v"));
  m.def("huber", &huber, py::arg("r"), py::arg("s"), py::arg("t"));

  py::class_<RoundData>(m, "Round")
      .def(py::init(&make_round), py::arg("a"), py::arg("b"), py::arg("u"), py::arg("blocks") = py::none())
      .def_readonly("a", &RoundData::a)
      .def_readonly("b", &RoundData::b)
      .def_readonly("u", &RoundData::u)
      .def_property_readonly("blocks", [](const RoundData& r) { return r.blocks.offsets(); });

  m.def(
      "primal_argmax", [](const RoundData& r, const Vector& lam) { return primal_argmax(r, r.a, lam); },
      py::arg("round"), py::arg("lam"));

  m.def(
      "generate",
      [](int m_, int d, int horizon, std::uint64_t seed, Distribution dist, std::vector<std::size_t> blocks,
         double drift) {
        GeneratorConfig g;
        g.m = m_;
        g.d = d;
        g.horizon = horizon;
        g.seed = seed;
        g.distribution = dist;
        g.block_offsets = std::move(blocks);
        g.drift = drift;
        g.validate();
        return generate(g);
      },
      py::arg("m") = 25, py::arg("d") = 10, py::arg("T") = 200, py::arg("seed") = 0,
      py::arg("distribution") = Distribution::Gaussian, py::arg("blocks") = std::vector<std::size_t>{},
      py::arg("drift") = 0.0);
  m.def("load_dataset", &load_dataset, py::arg("path"));
  m.def("save_dataset", &save_dataset, py::arg("path"), py::arg("dataset"));

  py::class_<StepSchedule>(m, "StepSchedule")
      .def_readwrite("mode", &StepSchedule::mode)
      .def_readwrite("g_bound", &StepSchedule::g_bound)
      .def_readwrite("kappa", &StepSchedule::kappa)
      .def_readwrite("r_lambda", &StepSchedule::r_lambda)
      .def_readwrite("horizon", &StepSchedule::horizon)
      .def_readwrite("matrix_radius", &StepSchedule::matrix_radius)
      .def("eta", &StepSchedule::eta)
      .def("nu", &StepSchedule::nu);
  m.def("default_schedule", &default_schedule, py::arg("dataset"), py::arg("spec"));

  py::class_<RoundRecord>(m, "RoundRecord")
      .def_readonly("x_hat", &RoundRecord::x_hat)
      .def_readonly("lambda_hat", &RoundRecord::lambda_hat)
      .def_readonly("a_hat", &RoundRecord::a_hat)
      .def_readonly("residual", &RoundRecord::residual_true)
      .def_readonly("reward", &RoundRecord::reward);
  py::class_<RunTrace>(m, "RunTrace")
      .def_readonly("rounds", &RunTrace::rounds)
      .def("__len__", &RunTrace::size)
      .def("actions", &RunTrace::actions);

  m.def(
      "run_algorithm1",
      [](const Dataset& data, const PenaltySpec& spec, std::optional<StepSchedule> schedule) {
        const StepSchedule s = schedule ? *schedule : default_schedule(data, spec);
        if (data.empty()) throw py::value_error("dataset has no rounds");
        return run_algorithm1(data, spec, s, DualVector::Zero(data.front().m()));
      },
      py::arg("dataset"), py::arg("spec"), py::arg("schedule") = py::none());
  m.def(
      "run_algorithm2",
      [](const Dataset& data, const PenaltySpec& spec, std::optional<StepSchedule> schedule) {
        const StepSchedule s = schedule ? *schedule : default_schedule(data, spec);
        if (data.empty()) throw py::value_error("dataset has no rounds");
        const RoundData& first = data.front();
        return run_algorithm2(data, spec, s, DualVector::Zero(first.m()), Matrix::Zero(first.m(), first.d()));
      },
      py::arg("dataset"), py::arg("spec"), py::arg("schedule") = py::none());
  m.def(
      "run_additive_baseline",
      [](const Dataset& data, const PenaltySpec& spec, int inner_iters) {
        BaselineOptions options;
        options.inner_iters = inner_iters;
        return run_additive_baseline(data, spec, options);
      },
      py::arg("dataset"), py::arg("spec"), py::arg("inner_iters") = 500);

  py::class_<OfflineSolution>(m, "OfflineSolution")
      .def_readonly("lambda_star", &OfflineSolution::lambda_star)
      .def_readonly("primal_star", &OfflineSolution::primal_star)
      .def_readonly("p_value", &OfflineSolution::p_value)
      .def_readonly("d_value", &OfflineSolution::d_value)
      .def_readonly("gap", &OfflineSolution::gap)
      .def_readonly("iterations", &OfflineSolution::iterations);
  m.def(
      "solve_offline",
      [](const Dataset& data, const PenaltySpec& spec, int max_iters, double tol) {
        OfflineOptions options;
        options.max_iters = max_iters;
        options.tol = tol;
        return solve_offline(data, spec, options);
      },
      py::arg("dataset"), py::arg("spec"), py::arg("max_iters") = 20000, py::arg("tol") = 1e-3);
  m.def("eval_primal", &eval_primal, py::arg("dataset"), py::arg("spec"), py::arg("actions"));
  m.def(
      "eval_dual", [](const Dataset& data, const PenaltySpec& spec, const Vector& lam) {
        return eval_dual(data, spec, lam).value;
      },
      py::arg("dataset"), py::arg("spec"), py::arg("lam"));

  py::class_<BoundReport>(m, "BoundReport")
      .def_readonly("r_t", &BoundReport::r_t)
      .def_readonly("m_e", &BoundReport::m_e)
      .def_readonly("s_e", &BoundReport::s_e)
      .def_readonly("s_a", &BoundReport::s_a)
      .def_readonly("total", &BoundReport::bound_total)
      .def_readonly("regret_upper", &BoundReport::empirical_regret)
      .def_readonly("regret_lower", &BoundReport::empirical_regret_lower)
      .def_readonly("lower_bound", &BoundReport::lower_bound)
      .def_readonly("epsilon", &BoundReport::epsilon)
      .def("within_bound", &BoundReport::within_bound, py::arg("slack") = 1e-6);
  m.def("bound_components", &bound_components, py::arg("trace"), py::arg("dataset"), py::arg("spec"),
        py::arg("schedule"), py::arg("offline"));
  m.def("max_psi", &max_psi, py::arg("errors"));

  m.def(
      "run_config",
      [](const std::string& json) {
        const ExperimentConfig config = parse_config(json);
        const RunOutcome outcome = execute_run(config, load_or_generate(config));
        py::dict out;
        out["summary"] = summary_line(outcome);
        out["reward"] = outcome.reward;
        out["penalty"] = outcome.penalty;
        out["trace_jsonl"] = trace_to_jsonl(outcome.trace);
        if (outcome.report) out["report_json"] = report_to_json(outcome, config);
        return out;
      },
      py::arg("config_json"), "Executes a JSON run configuration, like `saddleflow run`.");

  m.def(
      "validate",
      [] {
        const ValidationReport report = run_validation();
        return py::make_tuple(report.passed(), report.format());
      },
      "Runs the built-in invariant suites; returns (passed, report text).");
}
