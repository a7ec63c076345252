#pragma once

// Primitives of the two-player investor game: parameters, types, actions,
// per-share and expected payoffs, and the discrete Invest/Wait rules.
//
// Player 1 is privately either overconfident or risk-averse.  Player 2
// herds on Player 1's observed action and believes Player 1 is
// overconfident with probability p.  The risky per-share return is set by
// the inverse demand R = a - q1 - q2 and is realised with probability
// theta; otherwise the safe return s is paid on the same quantity.

#include <string_view>

namespace biasgame {

enum class PlayerType { Overconfident, RiskAverse };
enum class ActionChoice { Invest, Wait };

std::string_view to_string(PlayerType type);
std::string_view to_string(ActionChoice action);

struct ModelParams {
    double a = 10.0;      // demand intercept, > 0
    double delta = 1.0;   // bias magnitude, >= 0; +delta overconfident, -delta risk-averse
    double c_o = 1.0;     // per-share cost, overconfident type
    double c_a = 2.0;     // per-share cost, risk-averse type
    double s = 1.0;       // safe per-share return
    double theta = 0.5;   // probability the risky payoff is realised, in (0,1)
    double p = 0.5;       // Player 2's belief that Player 1 is overconfident

    /// Throws InvalidParams naming the first violated invariant.
    void validate() const;
    bool is_valid() const noexcept;

    /// (1 - theta) / theta, the weight of the safe return relative to the
    /// risky one in every first-order condition.
    double safe_weight() const noexcept { return (1.0 - theta) / theta; }

    /// Signed bias and cost for a type: (+delta, c_o) or (-delta, c_a).
    double signed_bias(PlayerType type) const noexcept;
    double cost(PlayerType type) const noexcept;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// The worked example used throughout the docs and tests.
ModelParams worked_example_params();

struct QuantityPair {
    double q1 = 0.0;
    double q2 = 0.0;
};

/// Inverse demand: a - q1 - q2.
double market_return(const ModelParams& params, const QuantityPair& q);

/// Per-share utility of Player 1 for a type and action at return r.
double per_share_utility_p1(PlayerType type, ActionChoice action, const ModelParams& params,
                            double r);

/// theta * (a - q1 - q2 +/- delta - c) * q1 + (1 - theta) * s * q1.
double expected_utility_p1(PlayerType type, const ModelParams& params, const QuantityPair& q);

/// Player 2's belief-weighted expected utility.  The opposing quantity is
/// type-contingent: q1_o in the overconfident branch, q1_a in the other.
double expected_utility_p2(const ModelParams& params, double q1_o, double q1_a, double q2);

/// Invest iff the perceived per-share payoff strictly beats s; ties wait.
ActionChoice action_rule_p1(PlayerType type, const ModelParams& params, double r);

/// Herding: with two players the majority is Player 1.
ActionChoice action_rule_p2(ActionChoice observed_p1_action);

}  // namespace biasgame
