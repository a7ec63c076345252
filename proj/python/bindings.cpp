#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "biasgame/cli.hpp"
#include "biasgame/equilibrium.hpp"
#include "biasgame/errors.hpp"
#include "biasgame/model.hpp"
#include "biasgame/oracle.hpp"
#include "biasgame/serialize.hpp"
#include "biasgame/simulate.hpp"
#include "biasgame/statics.hpp"

namespace py = pybind11;
using namespace biasgame;

namespace {

std::string params_repr(const ModelParams& p) {
    std::ostringstream os;
    os << "ModelParams(a=" << p.a << ", delta=" << p.delta << ", c_o=" << p.c_o
       << ", c_a=" << p.c_a << ", s=" << p.s << ", theta=" << p.theta << ", p=" << p.p << ")";
    return os.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Closed-form equilibrium, numerical oracle, comparative statics and Monte Carlo "
              "for the biased-investor Bayesian game.";
    m.attr("__version__") = "0.1.0";

    auto game_error = py::register_exception<GameError>(m, "GameError", PyExc_RuntimeError);
    py::register_exception<InvalidParams>(m, "InvalidParams", PyExc_ValueError);
    auto compute_error = py::register_exception<ComputeError>(m, "ComputeError", game_error.ptr());
    py::register_exception<SingularSystem>(m, "SingularSystem", compute_error.ptr());
    py::register_exception<BracketExhausted>(m, "BracketExhausted", compute_error.ptr());
    py::register_exception<NoConvergence>(m, "NoConvergence", compute_error.ptr());

    py::enum_<PlayerType>(m, "PlayerType")
        .value("Overconfident", PlayerType::Overconfident)
        .value("RiskAverse", PlayerType::RiskAverse);
    py::enum_<ActionChoice>(m, "ActionChoice")
        .value("Invest", ActionChoice::Invest)
        .value("Wait", ActionChoice::Wait);
    py::enum_<FocMode>(m, "FocMode")
        .value("DerivedFoc", FocMode::DerivedFoc)
        .value("PaperVerbatim", FocMode::PaperVerbatim);
    py::enum_<QuantityDomain>(m, "QuantityDomain")
        .value("Unconstrained", QuantityDomain::Unconstrained)
        .value("NonNegative", QuantityDomain::NonNegative);
    py::enum_<Parameter>(m, "Parameter")
        .value("a", Parameter::A)
        .value("delta", Parameter::Delta)
        .value("c_o", Parameter::CO)
        .value("c_a", Parameter::CA)
        .value("s", Parameter::S)
        .value("theta", Parameter::Theta)
        .value("p", Parameter::P);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init([](double a, double delta, double c_o, double c_a, double s, double theta,
                         double p) {
                 ModelParams params{a, delta, c_o, c_a, s, theta, p};
                 params.validate();
                 return params;
             }),
             py::arg("a") = 10.0, py::arg("delta") = 1.0, py::arg("c_o") = 1.0,
             py::arg("c_a") = 2.0, py::arg("s") = 1.0, py::arg("theta") = 0.5,
             py::arg("p") = 0.5)
        .def_readwrite("a", &ModelParams::a)
        .def_readwrite("delta", &ModelParams::delta)
        .def_readwrite("c_o", &ModelParams::c_o)
        .def_readwrite("c_a", &ModelParams::c_a)
        .def_readwrite("s", &ModelParams::s)
        .def_readwrite("theta", &ModelParams::theta)
        .def_readwrite("p", &ModelParams::p)
        .def("validate", &ModelParams::validate)
        .def("is_valid", &ModelParams::is_valid)
        .def("__eq__", [](const ModelParams& x, const ModelParams& y) { return x == y; })
        .def("__repr__", &params_repr);
    m.def("worked_example_params", &worked_example_params);

    py::class_<EquilibriumSolution>(m, "EquilibriumSolution")
        .def_readonly("q1_o", &EquilibriumSolution::q1_o)
        .def_readonly("q1_a", &EquilibriumSolution::q1_a)
        .def_readonly("q2", &EquilibriumSolution::q2)
        .def_readonly("r_o", &EquilibriumSolution::r_o)
        .def_readonly("r_a", &EquilibriumSolution::r_a)
        .def_readonly("mode", &EquilibriumSolution::mode)
        .def_readonly("residuals", &EquilibriumSolution::residuals)
        .def("to_json", [](const EquilibriumSolution& s) { return nlohmann::json(s).dump(); });

    m.def("market_return",
          [](const ModelParams& p, double q1, double q2) { return market_return(p, {q1, q2}); },
          py::arg("params"), py::arg("q1"), py::arg("q2"));
    m.def("per_share_utility_p1", &per_share_utility_p1, py::arg("type"), py::arg("action"),
          py::arg("params"), py::arg("r"));
    m.def("expected_utility_p1",
          [](PlayerType t, const ModelParams& p, double q1, double q2) {
              return expected_utility_p1(t, p, {q1, q2});
          },
          py::arg("type"), py::arg("params"), py::arg("q1"), py::arg("q2"));
    m.def("expected_utility_p2", &expected_utility_p2, py::arg("params"), py::arg("q1_o"),
          py::arg("q1_a"), py::arg("q2"));
    m.def("action_rule_p1", &action_rule_p1, py::arg("type"), py::arg("params"), py::arg("r"));
    m.def("action_rule_p2", &action_rule_p2, py::arg("observed_p1_action"));

    m.def("best_response_p1", &best_response_p1, py::arg("type"), py::arg("q2"),
          py::arg("params"), py::arg("mode") = FocMode::DerivedFoc,
          py::arg("domain") = QuantityDomain::Unconstrained);
    m.def("best_response_p2", &best_response_p2, py::arg("q1_o"), py::arg("q1_a"),
          py::arg("params"), py::arg("mode") = FocMode::DerivedFoc,
          py::arg("domain") = QuantityDomain::Unconstrained);
    m.def("solve_bne", &solve_bne, py::arg("params"), py::arg("mode") = FocMode::DerivedFoc,
          py::arg("domain") = QuantityDomain::Unconstrained);
    m.def("foc_residuals", &foc_residuals, py::arg("solution"), py::arg("params"));

    py::class_<OracleConfig>(m, "OracleConfig")
        .def(py::init<>())
        .def_readwrite("bracket_halfwidth", &OracleConfig::bracket_halfwidth)
        .def_readwrite("tol", &OracleConfig::tol)
        .def_readwrite("damping", &OracleConfig::damping)
        .def_readwrite("max_iter", &OracleConfig::max_iter);
    m.def("fd_gradient", &fd_gradient, py::arg("objective"), py::arg("x"), py::arg("h"));
    m.def("numeric_best_response_p1", &numeric_best_response_p1, py::arg("type"), py::arg("q2"),
          py::arg("params"), py::arg("cfg") = OracleConfig{}, py::arg("center") = 0.0);
    m.def("numeric_best_response_p2", &numeric_best_response_p2, py::arg("q1_o"),
          py::arg("q1_a"), py::arg("params"), py::arg("cfg") = OracleConfig{},
          py::arg("center") = 0.0);
    m.def(
        "fixed_point_solve",
        [](const ModelParams& p, const OracleConfig& cfg, double q1_o, double q1_a, double q2) {
            return fixed_point_solve(p, cfg, {q1_o, q1_a, q2});
        },
        py::arg("params"), py::arg("cfg") = OracleConfig{}, py::arg("q1_o") = 0.0,
        py::arg("q1_a") = 0.0, py::arg("q2") = 0.0);

    py::class_<SweepSpec>(m, "SweepSpec")
        .def(py::init<>())
        .def_readwrite("base", &SweepSpec::base)
        .def_readwrite("parameter", &SweepSpec::parameter)
        .def_readwrite("lo", &SweepSpec::lo)
        .def_readwrite("hi", &SweepSpec::hi)
        .def_readwrite("steps", &SweepSpec::steps)
        .def_readwrite("mode", &SweepSpec::mode);
    py::class_<SweepRow>(m, "SweepRow")
        .def_readonly("value", &SweepRow::value)
        .def_readonly("params", &SweepRow::params)
        .def_readonly("solution", &SweepRow::solution)
        .def_readonly("error", &SweepRow::error)
        .def_readonly("aggregate_demand", &SweepRow::aggregate_demand)
        .def_readonly("aggregate_demand_o", &SweepRow::aggregate_demand_o)
        .def_readonly("aggregate_demand_a", &SweepRow::aggregate_demand_a)
        .def_readonly("divergence", &SweepRow::divergence)
        .def_readonly("divergence_slope_sign", &SweepRow::divergence_slope_sign);
    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("parameter", &SweepResult::parameter)
        .def_readonly("is_spillover", &SweepResult::is_spillover)
        .def_readonly("mode", &SweepResult::mode)
        .def_readonly("rows", &SweepResult::rows)
        .def("to_json", [](const SweepResult& r) { return nlohmann::json(r).dump(); });
    py::class_<SolutionDerivatives>(m, "SolutionDerivatives")
        .def_readonly("q1_o", &SolutionDerivatives::q1_o)
        .def_readonly("q1_a", &SolutionDerivatives::q1_a)
        .def_readonly("q2", &SolutionDerivatives::q2)
        .def_readonly("r_o", &SolutionDerivatives::r_o)
        .def_readonly("r_a", &SolutionDerivatives::r_a)
        .def_readonly("divergence", &SolutionDerivatives::divergence)
        .def_readonly("aggregate_demand", &SolutionDerivatives::aggregate_demand);
    m.def("sweep", &sweep, py::arg("spec"));
    m.def("sensitivity", &sensitivity, py::arg("params"), py::arg("parameter"),
          py::arg("mode") = FocMode::DerivedFoc, py::arg("h") = 0.0);
    m.def("spillover_report", &spillover_report, py::arg("base"), py::arg("gap_lo"),
          py::arg("gap_hi"), py::arg("steps"), py::arg("mode") = FocMode::DerivedFoc);

    py::class_<RunningStats>(m, "RunningStats")
        .def_readonly("count", &RunningStats::count)
        .def_readonly("mean", &RunningStats::mean)
        .def("stddev", &RunningStats::stddev)
        .def("standard_error", &RunningStats::standard_error);
    py::class_<SimulationConfig>(m, "SimulationConfig")
        .def(py::init<>())
        .def_readwrite("params", &SimulationConfig::params)
        .def_readwrite("rounds", &SimulationConfig::rounds)
        .def_readwrite("seed", &SimulationConfig::seed)
        .def_readwrite("mode", &SimulationConfig::mode);
    py::class_<SimulationReport>(m, "SimulationReport")
        .def_readonly("rounds", &SimulationReport::rounds)
        .def_readonly("seed", &SimulationReport::seed)
        .def_readonly("equilibrium", &SimulationReport::equilibrium)
        .def_readonly("count_overconfident", &SimulationReport::count_overconfident)
        .def_readonly("count_risk_averse", &SimulationReport::count_risk_averse)
        .def_readonly("invest_freq_p1", &SimulationReport::invest_freq_p1)
        .def_readonly("invest_freq_overconfident", &SimulationReport::invest_freq_overconfident)
        .def_readonly("invest_freq_risk_averse", &SimulationReport::invest_freq_risk_averse)
        .def_readonly("herd_match_rate", &SimulationReport::herd_match_rate)
        .def_readonly("utility_p1", &SimulationReport::utility_p1)
        .def_readonly("utility_p2", &SimulationReport::utility_p2)
        .def_readonly("utility_p1_overconfident", &SimulationReport::utility_p1_overconfident)
        .def_readonly("utility_p1_risk_averse", &SimulationReport::utility_p1_risk_averse)
        .def_readonly("aggregate_demand_mean", &SimulationReport::aggregate_demand_mean)
        .def_readonly("aggregate_demand_stddev", &SimulationReport::aggregate_demand_stddev)
        .def("to_json", [](const SimulationReport& r) { return nlohmann::json(r).dump(); });
    m.def("run_market", &run_market, py::arg("cfg"));

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::vector<const char*> argv{"biasgame"};
            for (const auto& a : args) {
                argv.push_back(a.c_str());
            }
            std::ostringstream out;
            std::ostringstream err;
            const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"),
        "Runs the command-line front end in-process; returns (exit_code, stdout, stderr).");
}
