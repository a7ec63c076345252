#include "biasgame/statics.hpp"

#include <cmath>
#include <string>

#include "biasgame/errors.hpp"

namespace biasgame {

std::string_view to_string(Parameter parameter) {
    switch (parameter) {
        case Parameter::A: return "a";
        case Parameter::Delta: return "delta";
        case Parameter::CO: return "c_o";
        case Parameter::CA: return "c_a";
        case Parameter::S: return "s";
        case Parameter::Theta: return "theta";
        case Parameter::P: return "p";
    }
    return "?";
}

Parameter parse_parameter(std::string_view name) {
    for (auto parameter : {Parameter::A, Parameter::Delta, Parameter::CO, Parameter::CA,
                           Parameter::S, Parameter::Theta, Parameter::P}) {
        if (to_string(parameter) == name) {
            return parameter;
        }
    }
    throw InvalidParams("unknown parameter '" + std::string(name) +
                        "' (expected one of a, delta, c_o, c_a, s, theta, p)");
}

double get(const ModelParams& params, Parameter parameter) {
    switch (parameter) {
        case Parameter::A: return params.a;
        case Parameter::Delta: return params.delta;
        case Parameter::CO: return params.c_o;
        case Parameter::CA: return params.c_a;
        case Parameter::S: return params.s;
        case Parameter::Theta: return params.theta;
        case Parameter::P: return params.p;
    }
    return 0.0;
}

ModelParams with(ModelParams params, Parameter parameter, double value) {
    switch (parameter) {
        case Parameter::A: params.a = value; break;
        case Parameter::Delta: params.delta = value; break;
        case Parameter::CO: params.c_o = value; break;
        case Parameter::CA: params.c_a = value; break;
        case Parameter::S: params.s = value; break;
        case Parameter::Theta: params.theta = value; break;
        case Parameter::P: params.p = value; break;
    }
    return params;
}

namespace {

std::vector<double> even_grid(double lo, double hi, int steps) {
    std::vector<double> values(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        values[i] = lo + (hi - lo) * static_cast<double>(i) / (steps - 1);
    }
    values.back() = hi;
    return values;
}

void check_range(double lo, double hi, int steps, const char* what) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw InvalidParams(std::string(what) + " range requires finite lo < hi");
    }
    if (steps < 2) {
        throw InvalidParams(std::string(what) + " requires steps >= 2");
    }
}

SweepRow solve_row(double value, const ModelParams& params, FocMode mode) {
    SweepRow row;
    row.value = value;
    row.params = params;
    try {
        const auto sol = solve_bne(params, mode);
        row.aggregate_demand = params.p * sol.q1_o + (1.0 - params.p) * sol.q1_a + sol.q2;
        row.aggregate_demand_o = sol.q1_o + sol.q2;
        row.aggregate_demand_a = sol.q1_a + sol.q2;
        row.divergence = sol.q1_o - sol.q1_a;
        row.solution = sol;
    } catch (const ComputeError& e) {
        row.error = e.what();
    }
    return row;
}

ModelParams with_gap(ModelParams params, double midpoint, double gap) {
    params.c_o = midpoint + gap / 2.0;
    params.c_a = midpoint - gap / 2.0;
    return params;
}

}  // namespace

void SweepSpec::validate() const {
    check_range(lo, hi, steps, "sweep");
    for (double value : grid()) {
        try {
            with(base, parameter, value).validate();
        } catch (const InvalidParams& e) {
            throw InvalidParams("sweep point " + std::string(to_string(parameter)) + "=" +
                                std::to_string(value) + " is invalid: " + e.what());
        }
    }
}

std::vector<double> SweepSpec::grid() const {
    return even_grid(lo, hi, steps);
}

std::size_t SweepResult::succeeded() const {
    std::size_t n = 0;
    for (const auto& row : rows) {
        n += row.ok() ? 1 : 0;
    }
    return n;
}

SweepResult sweep(const SweepSpec& spec) {
    spec.validate();
    SweepResult result;
    result.parameter = spec.parameter;
    result.mode = spec.mode;
    for (double value : spec.grid()) {
        result.rows.push_back(solve_row(value, with(spec.base, spec.parameter, value), spec.mode));
    }
    return result;
}

double default_step(double x) {
    return 1e-5 * (1.0 + std::abs(x));
}

SolutionDerivatives sensitivity(const ModelParams& params, Parameter parameter, FocMode mode,
                                double h) {
    params.validate();
    const double x = get(params, parameter);
    if (!(h > 0.0)) {
        h = default_step(x);
    }
    const ModelParams up = with(params, parameter, x + h);
    const ModelParams down = with(params, parameter, x - h);
    if (!up.is_valid() || !down.is_valid()) {
        throw StepOutOfDomain("sensitivity step " + std::to_string(h) + " around " +
                              std::string(to_string(parameter)) + "=" + std::to_string(x) +
                              " leaves the parameter domain");
    }
    const auto hi = solve_bne(up, mode);
    const auto lo = solve_bne(down, mode);
    const auto diff = [h](double f_hi, double f_lo) { return (f_hi - f_lo) / (2.0 * h); };
    const auto aggregate = [](const ModelParams& pp, const EquilibriumSolution& s) {
        return pp.p * s.q1_o + (1.0 - pp.p) * s.q1_a + s.q2;
    };
    SolutionDerivatives d;
    d.q1_o = diff(hi.q1_o, lo.q1_o);
    d.q1_a = diff(hi.q1_a, lo.q1_a);
    d.q2 = diff(hi.q2, lo.q2);
    d.r_o = diff(hi.r_o, lo.r_o);
    d.r_a = diff(hi.r_a, lo.r_a);
    d.divergence = diff(hi.q1_o - hi.q1_a, lo.q1_o - lo.q1_a);
    d.aggregate_demand = diff(aggregate(up, hi), aggregate(down, lo));
    return d;
}

SweepResult spillover_report(const ModelParams& base, double gap_lo, double gap_hi, int steps,
                             FocMode mode) {
    base.validate();
    check_range(gap_lo, gap_hi, steps, "spillover gap");
    const double midpoint = 0.5 * (base.c_o + base.c_a);
    const double widest = std::max(std::abs(gap_lo), std::abs(gap_hi));
    if (midpoint - widest / 2.0 < 0.0) {
        throw InvalidParams("spillover gap range [" + std::to_string(gap_lo) + ", " +
                            std::to_string(gap_hi) + "] drives a cost below 0 around midpoint " +
                            std::to_string(midpoint) + " (needs |gap| <= " +
                            std::to_string(2.0 * midpoint) + ")");
    }

    SweepResult result;
    result.parameter = Parameter::CO;
    result.is_spillover = true;
    result.mode = mode;
    const auto gaps = even_grid(gap_lo, gap_hi, steps);
    const double h = 1e-4 * (1.0 + (gap_hi - gap_lo) / (steps - 1));
    for (double gap : gaps) {
        SweepRow row = solve_row(gap, with_gap(base, midpoint, gap), mode);
        if (row.ok()) {
            // Stencil stays inside the non-negative cost domain.
            const double g_hi = std::min(gap + h, 2.0 * midpoint);
            const double g_lo = std::max(gap - h, -2.0 * midpoint);
            const auto div_at = [&](double g) {
                const auto s = solve_bne(with_gap(base, midpoint, g), mode);
                return std::abs(s.q1_o - s.q1_a);
            };
            try {
                const double slope = (div_at(g_hi) - div_at(g_lo)) / (g_hi - g_lo);
                const double floor = 1e-9 * (1.0 + std::abs(row.divergence));
                row.divergence_slope_sign = slope > floor ? 1 : (slope < -floor ? -1 : 0);
            } catch (const ComputeError& e) {
                row.error = e.what();
            }
        }
        result.rows.push_back(std::move(row));
    }
    return result;
}

}  // namespace biasgame
