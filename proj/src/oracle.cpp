#include "biasgame/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "biasgame/errors.hpp"

namespace biasgame {

namespace {

constexpr int kGridPoints = 1024;
constexpr int kMaxExpansions = 3;
constexpr int kMaxGoldenSteps = 200;
const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;

struct GridHit {
    double x;
    double spacing;
    bool on_endpoint;
};

GridHit grid_scan(const std::function<double(double)>& f, double lo, double hi) {
    const double spacing = (hi - lo) / (kGridPoints - 1);
    int best = 0;
    double best_value = f(lo);
    for (int i = 1; i < kGridPoints; ++i) {
        const double value = f(lo + i * spacing);
        if (value > best_value) {
            best_value = value;
            best = i;
        }
    }
    const double x = best == kGridPoints - 1 ? hi : lo + best * spacing;
    return {x, spacing, best == 0 || best == kGridPoints - 1};
}

double golden_section(const std::function<double(double)>& f, double lo, double hi, double tol) {
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int i = 0; i < kMaxGoldenSteps && (hi - lo) > tol * (1.0 + std::abs(x1)); ++i) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = f(x1);
        }
    }
    return 0.5 * (lo + hi);
}

// Golden-section comparisons stall at ~sqrt(eps) relative precision once
// objective values agree to rounding.  A parabola through three points a
// grid cell apart recovers the vertex of a quadratic to near machine
// precision.
double parabolic_polish(const std::function<double(double)>& f, double x, double w) {
    for (int pass = 0; pass < 2; ++pass) {
        const double fm = f(x - w);
        const double f0 = f(x);
        const double fp = f(x + w);
        const double curvature = 2.0 * f0 - fm - fp;
        if (!(curvature > 0.0)) {
            break;
        }
        const double shift = w * (fp - fm) / (2.0 * curvature);
        if (!(std::abs(shift) <= w)) {
            break;
        }
        x += shift;
    }
    return x;
}

}  // namespace

void OracleConfig::validate() const {
    if (bracket_halfwidth && !(*bracket_halfwidth > 0.0)) {
        throw InvalidParams("oracle bracket_halfwidth must be > 0");
    }
    if (!(tol > 0.0)) {
        throw InvalidParams("oracle tol must be > 0");
    }
    if (!(damping > 0.0 && damping <= 1.0)) {
        throw InvalidParams("oracle damping must lie in (0, 1]");
    }
    if (max_iter <= 0) {
        throw InvalidParams("oracle max_iter must be positive");
    }
}

double OracleConfig::halfwidth_for(const ModelParams& params) const {
    return bracket_halfwidth.value_or(10.0 * (std::abs(params.a) + std::abs(params.s) + 1.0));
}

double fd_gradient(const std::function<double(double)>& objective, double x, double h) {
    if (!(h > 0.0)) {
        throw InvalidParams("finite-difference step h must be > 0");
    }
    return (objective(x + h) - objective(x - h)) / (2.0 * h);
}

double maximize_concave(const std::function<double(double)>& objective, double center,
                        double halfwidth, double tol) {
    GridHit hit{};
    for (int expansion = 0;; ++expansion) {
        hit = grid_scan(objective, center - halfwidth, center + halfwidth);
        if (!hit.on_endpoint) {
            break;
        }
        if (expansion == kMaxExpansions) {
            throw BracketExhausted("maximizer still on the search boundary at " +
                                   std::to_string(hit.x) + " after " +
                                   std::to_string(kMaxExpansions) + " bracket expansions");
        }
        center = hit.x;
        halfwidth *= 2.0;
    }
    const double x = golden_section(objective, hit.x - hit.spacing, hit.x + hit.spacing, tol);
    return parabolic_polish(objective, x, hit.spacing);
}

double numeric_best_response_p1(PlayerType type, double q2, const ModelParams& params,
                                const OracleConfig& cfg, double center) {
    cfg.validate();
    return maximize_concave(
        [&](double q1) { return expected_utility_p1(type, params, {q1, q2}); }, center,
        cfg.halfwidth_for(params), cfg.tol);
}

double numeric_best_response_p2(double q1_o, double q1_a, const ModelParams& params,
                                const OracleConfig& cfg, double center) {
    cfg.validate();
    return maximize_concave(
        [&](double q2) { return expected_utility_p2(params, q1_o, q1_a, q2); }, center,
        cfg.halfwidth_for(params), cfg.tol);
}

FixedPointResult fixed_point_iterate(const ModelParams& params, const OracleConfig& cfg,
                                     const StartPoint& init) {
    params.validate();
    cfg.validate();
    const double d = cfg.damping;
    double q1_o = init.q1_o;
    double q1_a = init.q1_a;
    double q2 = init.q2;
    double change = 0.0;
    for (int it = 1; it <= cfg.max_iter; ++it) {
        const double br_o =
            numeric_best_response_p1(PlayerType::Overconfident, q2, params, cfg, q1_o);
        const double br_a = numeric_best_response_p1(PlayerType::RiskAverse, q2, params, cfg, q1_a);
        const double br_2 = numeric_best_response_p2(q1_o, q1_a, params, cfg, q2);
        const double n1o = (1.0 - d) * q1_o + d * br_o;
        const double n1a = (1.0 - d) * q1_a + d * br_a;
        const double n2 = (1.0 - d) * q2 + d * br_2;
        change = std::max({std::abs(n1o - q1_o), std::abs(n1a - q1_a), std::abs(n2 - q2)});
        q1_o = n1o;
        q1_a = n1a;
        q2 = n2;
        if (change < cfg.tol) {
            return {make_solution(q1_o, q1_a, q2, params, FocMode::DerivedFoc), it, change};
        }
    }
    throw NoConvergence("fixed-point iteration did not converge after " +
                            std::to_string(cfg.max_iter) + " iterations (last change " +
                            std::to_string(change) + ", iterate " + std::to_string(q1_o) + ", " +
                            std::to_string(q1_a) + ", " + std::to_string(q2) + ")",
                        change, cfg.max_iter);
}

EquilibriumSolution fixed_point_solve(const ModelParams& params, const OracleConfig& cfg,
                                      const StartPoint& init) {
    return fixed_point_iterate(params, cfg, init).solution;
}

}  // namespace biasgame
