#pragma once

// Shared test helpers: seeded parameter generators and exact references
// for the worked example.

#include <cstdint>
#include <random>

#include "biasgame/model.hpp"

namespace biasgame::testing {

// Worked example equilibrium in exact fractions:
// B_O = 11, B_A = 8, B_mix = 9.5, q2 = 19/6, q1_o = 47/12, q1_a = 29/12.
inline constexpr double kWorkedQ1O = 47.0 / 12.0;
inline constexpr double kWorkedQ1A = 29.0 / 12.0;
inline constexpr double kWorkedQ2 = 19.0 / 6.0;

class Draws {
public:
    explicit Draws(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    /// a in [1,100]; delta, c_o, c_a, s in [0, a/4]; theta in [0.05, 0.95];
    /// p in [0,1].
    ModelParams acceptance_params() {
        ModelParams params;
        params.a = uniform(1.0, 100.0);
        params.delta = uniform(0.0, params.a / 4.0);
        params.c_o = uniform(0.0, params.a / 4.0);
        params.c_a = uniform(0.0, params.a / 4.0);
        params.s = uniform(0.0, params.a / 4.0);
        params.theta = uniform(0.05, 0.95);
        params.p = uniform(0.0, 1.0);
        return params;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace biasgame::testing
