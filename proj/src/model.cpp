#include "biasgame/model.hpp"

#include <cmath>
#include <string>

#include "biasgame/errors.hpp"

namespace biasgame {

std::string_view to_string(PlayerType type) {
    return type == PlayerType::Overconfident ? "overconfident" : "risk_averse";
}

std::string_view to_string(ActionChoice action) {
    return action == ActionChoice::Invest ? "invest" : "wait";
}

namespace {

void require_finite(double value, const char* name) {
    if (!std::isfinite(value)) {
        throw InvalidParams(std::string(name) + " must be finite");
    }
}

void require_non_negative(double value, const char* name) {
    require_finite(value, name);
    if (value < 0.0) {
        throw InvalidParams(std::string(name) + " must be >= 0 (got " + std::to_string(value) +
                            ")");
    }
}

}  // namespace

void ModelParams::validate() const {
    require_finite(a, "a");
    if (!(a > 0.0)) {
        throw InvalidParams("a must be > 0 (got " + std::to_string(a) + ")");
    }
    require_non_negative(delta, "delta");
    require_non_negative(c_o, "c_o");
    require_non_negative(c_a, "c_a");
    require_non_negative(s, "s");
    require_finite(theta, "theta");
    if (!(theta > 0.0 && theta < 1.0)) {
        throw InvalidParams("theta must lie in the open interval (0, 1) (got " +
                            std::to_string(theta) + ")");
    }
    require_finite(p, "p");
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidParams("p must lie in the closed interval [0, 1] (got " +
                            std::to_string(p) + ")");
    }
}

bool ModelParams::is_valid() const noexcept {
    try {
        validate();
        return true;
    } catch (const InvalidParams&) {
        return false;
    }
}

double ModelParams::signed_bias(PlayerType type) const noexcept {
    return type == PlayerType::Overconfident ? delta : -delta;
}

double ModelParams::cost(PlayerType type) const noexcept {
    return type == PlayerType::Overconfident ? c_o : c_a;
}

ModelParams worked_example_params() {
    return ModelParams{.a = 10.0, .delta = 1.0, .c_o = 1.0, .c_a = 2.0, .s = 1.0, .theta = 0.5,
                       .p = 0.5};
}

double market_return(const ModelParams& params, const QuantityPair& q) {
    return params.a - q.q1 - q.q2;
}

double per_share_utility_p1(PlayerType type, ActionChoice action, const ModelParams& params,
                            double r) {
    if (action == ActionChoice::Wait) {
        return params.s;
    }
    return r + params.signed_bias(type) - params.cost(type);
}

double expected_utility_p1(PlayerType type, const ModelParams& params, const QuantityPair& q) {
    const double r = market_return(params, q);
    const double risky = r + params.signed_bias(type) - params.cost(type);
    return params.theta * risky * q.q1 + (1.0 - params.theta) * params.s * q.q1;
}

double expected_utility_p2(const ModelParams& params, double q1_o, double q1_a, double q2) {
    const double safe = (1.0 - params.theta) * params.s;
    const double over = params.theta * (params.a - q1_o - q2 + params.delta - params.c_o) + safe;
    const double averse = params.theta * (params.a - q1_a - q2 - params.delta - params.c_a) + safe;
    return q2 * (params.p * over + (1.0 - params.p) * averse);
}

ActionChoice action_rule_p1(PlayerType type, const ModelParams& params, double r) {
    const double invest = per_share_utility_p1(type, ActionChoice::Invest, params, r);
    return invest > params.s ? ActionChoice::Invest : ActionChoice::Wait;
}

ActionChoice action_rule_p2(ActionChoice observed_p1_action) {
    return observed_p1_action;
}

}  // namespace biasgame
