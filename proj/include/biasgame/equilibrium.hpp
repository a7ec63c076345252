#pragma once

// Closed-form best responses and the Bayesian Nash equilibrium triple
// (q1_o, q1_a, q2).
//
// Two algebra modes are provided:
//   DerivedFoc     first-order conditions obtained by differentiating the
//                  stated expected utilities.  This is the unique stationary
//                  point and the default.
//   PaperVerbatim  the published best-response formulas as printed: the
//                  overconfident response subtracts the safe-return term and
//                  Player 2's response divides by theta instead of 2*theta.
// Residuals are always measured against the stated utilities, so the gap
// between the modes is visible in EquilibriumSolution::residuals.

#include <array>
#include <string_view>

#include "biasgame/model.hpp"

namespace biasgame {

enum class FocMode { DerivedFoc, PaperVerbatim };

std::string_view to_string(FocMode mode);
/// Accepts "derived"/"verbatim" (and the enumerator names).
FocMode parse_foc_mode(std::string_view text);

/// Unconstrained quantities follow the model as written (short positions
/// allowed).  NonNegative truncates every best response at zero.
enum class QuantityDomain { Unconstrained, NonNegative };

struct EquilibriumSolution {
    double q1_o = 0.0;
    double q1_a = 0.0;
    double q2 = 0.0;
    double r_o = 0.0;  // a - q1_o - q2
    double r_a = 0.0;  // a - q1_a - q2
    FocMode mode = FocMode::DerivedFoc;
    std::array<double, 3> residuals{};  // d/dq1 E[U1^O], d/dq1 E[U1^A], d/dq2 E[U2]

    friend bool operator==(const EquilibriumSolution&, const EquilibriumSolution&) = default;
};

/// Absolute tolerance for the algebraic fixed-point identities.
inline constexpr double kFixedPointTolerance = 1e-10;
/// Absolute tolerance for finite-difference first-order residuals.
inline constexpr double kResidualTolerance = 1e-5;

double best_response_p1(PlayerType type, double q2, const ModelParams& params,
                        FocMode mode = FocMode::DerivedFoc,
                        QuantityDomain domain = QuantityDomain::Unconstrained);

double best_response_p2(double q1_o, double q1_a, const ModelParams& params,
                        FocMode mode = FocMode::DerivedFoc,
                        QuantityDomain domain = QuantityDomain::Unconstrained);

/// Validates params, solves the three best-response equations jointly and
/// fills returns and residuals.  Throws InvalidParams or SingularSystem.
EquilibriumSolution solve_bne(const ModelParams& params, FocMode mode = FocMode::DerivedFoc,
                              QuantityDomain domain = QuantityDomain::Unconstrained);

/// Central finite-difference derivatives of the stated expected utilities
/// with respect to each player's own quantity, with step
/// max(1e-6, 1e-6*|q|).  Independent of sol.mode.
std::array<double, 3> foc_residuals(const EquilibriumSolution& sol, const ModelParams& params);

/// Builds a solution from a quantity triple: returns and residuals filled in.
EquilibriumSolution make_solution(double q1_o, double q1_a, double q2, const ModelParams& params,
                                  FocMode mode);

}  // namespace biasgame
