#include "biasgame/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "biasgame/errors.hpp"
#include "biasgame/oracle.hpp"

namespace biasgame {

std::string_view to_string(FocMode mode) {
    return mode == FocMode::DerivedFoc ? "derived" : "verbatim";
}

FocMode parse_foc_mode(std::string_view text) {
    if (text == "derived" || text == "DerivedFoc") {
        return FocMode::DerivedFoc;
    }
    if (text == "verbatim" || text == "PaperVerbatim") {
        return FocMode::PaperVerbatim;
    }
    throw InvalidParams("mode must be 'derived' or 'verbatim' (got '" + std::string(text) + "')");
}

namespace {

double clamp_to(QuantityDomain domain, double q) {
    return domain == QuantityDomain::NonNegative ? std::max(0.0, q) : q;
}

// Perceived intercept of a type before the safe-return adjustment:
// a +/- delta - c.
double type_intercept(PlayerType type, const ModelParams& params) {
    return params.a + params.signed_bias(type) - params.cost(type);
}

// Right-hand side "c" of the Player 1 response q1 = (c - q2) / 2.
double p1_constant(PlayerType type, const ModelParams& params, FocMode mode) {
    const double safe = params.safe_weight() * params.s;
    if (mode == FocMode::PaperVerbatim && type == PlayerType::Overconfident) {
        return type_intercept(type, params) - safe;
    }
    return type_intercept(type, params) + safe;
}

double p2_denominator(const ModelParams& params, FocMode mode) {
    return mode == FocMode::DerivedFoc ? 2.0 * params.theta : params.theta;
}

// Solves A x = b for a 3x3 system with partial pivoting.
std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> m, std::array<double, 3> b) {
    double scale = 0.0;
    for (const auto& row : m) {
        for (double v : row) {
            scale = std::max(scale, std::abs(v));
        }
    }
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) {
                pivot = r;
            }
        }
        if (!(std::abs(m[pivot][col]) > 1e-14 * scale)) {
            throw SingularSystem("best-response system is singular (pivot " +
                                 std::to_string(m[pivot][col]) + " in column " +
                                 std::to_string(col) + ")");
        }
        std::swap(m[col], m[pivot]);
        std::swap(b[col], b[pivot]);
        for (int r = col + 1; r < 3; ++r) {
            const double f = m[r][col] / m[col][col];
            for (int c = col; c < 3; ++c) {
                m[r][c] -= f * m[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    std::array<double, 3> x{};
    for (int r = 2; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < 3; ++c) {
            acc -= m[r][c] * x[c];
        }
        x[r] = acc / m[r][r];
    }
    return x;
}

// Damped simultaneous iteration of the clamped analytic responses.
std::array<double, 3> iterate_clamped(const ModelParams& params, FocMode mode,
                                      std::array<double, 3> x) {
    constexpr int kMaxIter = 100000;
    constexpr double kDamping = 0.5;
    const double tol = 1e-14 * (1.0 + std::abs(params.a));
    double change = 0.0;
    for (int it = 0; it < kMaxIter; ++it) {
        const double n1o = best_response_p1(PlayerType::Overconfident, x[2], params, mode,
                                            QuantityDomain::NonNegative);
        const double n1a = best_response_p1(PlayerType::RiskAverse, x[2], params, mode,
                                            QuantityDomain::NonNegative);
        const double n2 = best_response_p2(x[0], x[1], params, mode, QuantityDomain::NonNegative);
        const std::array<double, 3> next{(1 - kDamping) * x[0] + kDamping * n1o,
                                         (1 - kDamping) * x[1] + kDamping * n1a,
                                         (1 - kDamping) * x[2] + kDamping * n2};
        change = std::max({std::abs(next[0] - x[0]), std::abs(next[1] - x[1]),
                           std::abs(next[2] - x[2])});
        x = next;
        if (change <= tol) {
            return x;
        }
    }
    throw NoConvergence("non-negative equilibrium iteration did not converge", change, kMaxIter);
}

}  // namespace

double best_response_p1(PlayerType type, double q2, const ModelParams& params, FocMode mode,
                        QuantityDomain domain) {
    return clamp_to(domain, (p1_constant(type, params, mode) - q2) / 2.0);
}

double best_response_p2(double q1_o, double q1_a, const ModelParams& params, FocMode mode,
                        QuantityDomain domain) {
    const double safe = (1.0 - params.theta) * params.s;
    const double over =
        params.theta * (params.a - q1_o + params.delta - params.c_o) + safe;
    const double averse =
        params.theta * (params.a - q1_a - params.delta - params.c_a) + safe;
    const double numerator = params.p * over + (1.0 - params.p) * averse;
    return clamp_to(domain, numerator / p2_denominator(params, mode));
}

EquilibriumSolution make_solution(double q1_o, double q1_a, double q2, const ModelParams& params,
                                  FocMode mode) {
    EquilibriumSolution sol;
    sol.q1_o = q1_o;
    sol.q1_a = q1_a;
    sol.q2 = q2;
    sol.r_o = market_return(params, {q1_o, q2});
    sol.r_a = market_return(params, {q1_a, q2});
    sol.mode = mode;
    sol.residuals = foc_residuals(sol, params);
    return sol;
}

EquilibriumSolution solve_bne(const ModelParams& params, FocMode mode, QuantityDomain domain) {
    params.validate();

    std::array<double, 3> x{};
    if (mode == FocMode::DerivedFoc) {
        const double b_o = p1_constant(PlayerType::Overconfident, params, mode);
        const double b_a = p1_constant(PlayerType::RiskAverse, params, mode);
        const double b_mix = params.p * b_o + (1.0 - params.p) * b_a;
        const double q2 = b_mix / 3.0;
        x = {(b_o - q2) / 2.0, (b_a - q2) / 2.0, q2};
    } else {
        // Rows: 2 q1_o + q2 = c_O;  2 q1_a + q2 = c_A;
        //       theta p q1_o + theta (1-p) q1_a + den q2 = N0
        // where N0 is Player 2's numerator with both q1 terms removed.
        const double theta = params.theta;
        const double p = params.p;
        const double n0 =
            theta * (p * type_intercept(PlayerType::Overconfident, params) +
                     (1.0 - p) * type_intercept(PlayerType::RiskAverse, params)) +
            (1.0 - theta) * params.s;
        x = solve3({{{2.0, 0.0, 1.0},
                     {0.0, 2.0, 1.0},
                     {theta * p, theta * (1.0 - p), p2_denominator(params, mode)}}},
                   {p1_constant(PlayerType::Overconfident, params, mode),
                    p1_constant(PlayerType::RiskAverse, params, mode), n0});
    }

    if (domain == QuantityDomain::NonNegative &&
        std::any_of(x.begin(), x.end(), [](double q) { return q < 0.0; })) {
        x = iterate_clamped(params, mode, {std::max(0.0, x[0]), std::max(0.0, x[1]),
                                           std::max(0.0, x[2])});
    }
    for (double q : x) {
        if (!std::isfinite(q)) {
            throw SingularSystem("equilibrium quantities are not finite");
        }
    }
    return make_solution(x[0], x[1], x[2], params, mode);
}

std::array<double, 3> foc_residuals(const EquilibriumSolution& sol, const ModelParams& params) {
    const auto step = [](double q) { return std::max(1e-6, 1e-6 * std::abs(q)); };
    const double d_over = fd_gradient(
        [&](double q1) {
            return expected_utility_p1(PlayerType::Overconfident, params, {q1, sol.q2});
        },
        sol.q1_o, step(sol.q1_o));
    const double d_averse = fd_gradient(
        [&](double q1) {
            return expected_utility_p1(PlayerType::RiskAverse, params, {q1, sol.q2});
        },
        sol.q1_a, step(sol.q1_a));
    const double d_p2 = fd_gradient(
        [&](double q2) { return expected_utility_p2(params, sol.q1_o, sol.q1_a, q2); }, sol.q2,
        step(sol.q2));
    return {d_over, d_averse, d_p2};
}

}  // namespace biasgame
