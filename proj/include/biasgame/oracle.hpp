#pragma once

// Numerical verification layer.  Nothing here uses the closed forms of
// equilibrium.hpp: best responses are found by maximizing the expected
// utilities of model.hpp directly, and the equilibrium by damped
// simultaneous best-response iteration.

#include <functional>
#include <optional>

#include "biasgame/equilibrium.hpp"
#include "biasgame/model.hpp"

namespace biasgame {

struct OracleConfig {
    /// Half-width of the search interval around the centre.  Unset means
    /// 10 * (|a| + |s| + 1).
    std::optional<double> bracket_halfwidth;
    double tol = 1e-10;
    double damping = 0.5;
    int max_iter = 10'000;

    /// Throws InvalidParams unless every field is positive and damping <= 1.
    void validate() const;
    double halfwidth_for(const ModelParams& params) const;
};

/// Starting iterate for fixed_point_solve.
struct StartPoint {
    double q1_o = 0.0;
    double q1_a = 0.0;
    double q2 = 0.0;
};

/// Central difference (f(x+h) - f(x-h)) / 2h.  Throws InvalidParams if h <= 0.
double fd_gradient(const std::function<double(double)>& objective, double x, double h);

/// Maximizer of a concave 1-D objective on [center - halfwidth, center +
/// halfwidth]: 1024-point grid pre-pass, golden-section search on the
/// winning cell, then three-point parabolic polish.  The bracket is
/// re-centred on the winning endpoint and doubled up to three times;
/// BracketExhausted if the maximizer is still on an endpoint.
double maximize_concave(const std::function<double(double)>& objective, double center,
                        double halfwidth, double tol);

double numeric_best_response_p1(PlayerType type, double q2, const ModelParams& params,
                                const OracleConfig& cfg = {}, double center = 0.0);

double numeric_best_response_p2(double q1_o, double q1_a, const ModelParams& params,
                                const OracleConfig& cfg = {}, double center = 0.0);

struct FixedPointResult {
    EquilibriumSolution solution;
    int iterations = 0;
    double last_change = 0.0;
};

/// Jacobi iteration x <- (1 - damping) x + damping * numeric_BR(x) until the
/// largest componentwise change drops below cfg.tol.  Throws NoConvergence
/// after cfg.max_iter steps.
FixedPointResult fixed_point_iterate(const ModelParams& params, const OracleConfig& cfg = {},
                                     const StartPoint& init = {});

/// As fixed_point_iterate, returning the solution only (mode DerivedFoc,
/// residuals filled).
EquilibriumSolution fixed_point_solve(const ModelParams& params, const OracleConfig& cfg = {},
                                      const StartPoint& init = {});

}  // namespace biasgame
