#pragma once

// Comparative statics: parameter sweeps, finite-difference sensitivities
// and the cost-gap spillover report.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "biasgame/equilibrium.hpp"
#include "biasgame/model.hpp"

namespace biasgame {

enum class Parameter { A, Delta, CO, CA, S, Theta, P };

std::string_view to_string(Parameter parameter);
/// Accepts the ModelParams field names: a, delta, c_o, c_a, s, theta, p.
Parameter parse_parameter(std::string_view name);

double get(const ModelParams& params, Parameter parameter);
ModelParams with(ModelParams params, Parameter parameter, double value);

struct SweepSpec {
    ModelParams base;
    Parameter parameter = Parameter::P;
    double lo = 0.0;
    double hi = 1.0;
    int steps = 11;
    FocMode mode = FocMode::DerivedFoc;

    /// lo < hi, steps >= 2 and every grid point valid; throws InvalidParams.
    void validate() const;
    /// Evenly spaced grid, endpoints exact.
    std::vector<double> grid() const;
};

struct SweepRow {
    double value = 0.0;
    ModelParams params;
    std::optional<EquilibriumSolution> solution;  // empty if the row failed
    std::string error;
    double aggregate_demand = 0.0;    // p*q1_o + (1-p)*q1_a + q2
    double aggregate_demand_o = 0.0;  // q1_o + q2
    double aggregate_demand_a = 0.0;  // q1_a + q2
    double divergence = 0.0;          // q1_o - q1_a
    int divergence_slope_sign = 0;    // spillover only: sign of d|divergence|/d gap

    bool ok() const noexcept { return solution.has_value(); }
};

struct SweepResult {
    Parameter parameter = Parameter::P;  // swept parameter (spillover: the cost gap)
    bool is_spillover = false;
    FocMode mode = FocMode::DerivedFoc;
    std::vector<SweepRow> rows;

    std::size_t succeeded() const;
};

/// Solves at every grid point.  Solver errors are recorded per row.
SweepResult sweep(const SweepSpec& spec);

struct SolutionDerivatives {
    double q1_o = 0.0;
    double q1_a = 0.0;
    double q2 = 0.0;
    double r_o = 0.0;
    double r_a = 0.0;
    double divergence = 0.0;
    double aggregate_demand = 0.0;
};

/// Default finite-difference step for a parameter value x: 1e-5 * (1 + |x|).
double default_step(double x);

/// Central differences of every equilibrium component.  h <= 0 selects
/// default_step.  Throws StepOutOfDomain if params +/- h is invalid.
SolutionDerivatives sensitivity(const ModelParams& params, Parameter parameter,
                                FocMode mode = FocMode::DerivedFoc, double h = 0.0);

/// Varies g = c_o - c_a over [gap_lo, gap_hi] with the cost midpoint of base
/// held fixed: c_o = m + g/2, c_a = m - g/2.  Each row records the sign of
/// d|divergence|/dg.  Throws InvalidParams if a cost would go negative.
SweepResult spillover_report(const ModelParams& base, double gap_lo, double gap_hi, int steps,
                             FocMode mode = FocMode::DerivedFoc);

}  // namespace biasgame
