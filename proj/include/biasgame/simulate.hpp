#pragma once

// Seeded Monte Carlo realisation of the game at equilibrium quantities.
//
// Random streams: two std::mt19937_64 engines.  Engine k (k = 0 for type
// draws, k = 1 for payoff draws) is seeded with the k-th output of a
// SplitMix64 generator initialised with the user seed.  Uniforms on [0,1)
// are (x >> 11) * 2^-53, and a Bernoulli(q) draw is uniform < q.  Each
// round consumes exactly one value from each stream.

#include <cstdint>
#include <optional>

#include "biasgame/equilibrium.hpp"
#include "biasgame/model.hpp"

namespace biasgame {

struct SimulationConfig {
    ModelParams params;
    std::uint64_t rounds = 100'000;
    std::uint64_t seed = 42;
    FocMode mode = FocMode::DerivedFoc;

    void validate() const;
};

/// Running mean and sample standard deviation (Welford).
struct RunningStats {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x);
    double variance() const;
    double stddev() const;
    double standard_error() const;

    friend bool operator==(const RunningStats&, const RunningStats&) = default;
};

struct SimulationReport {
    std::uint64_t rounds = 0;
    std::uint64_t seed = 0;
    FocMode mode = FocMode::DerivedFoc;
    EquilibriumSolution equilibrium;

    std::uint64_t count_overconfident = 0;
    std::uint64_t count_risk_averse = 0;

    double invest_freq_p1 = 0.0;
    std::optional<double> invest_freq_overconfident;  // empty if the type never occurred
    std::optional<double> invest_freq_risk_averse;
    double herd_match_rate = 0.0;

    RunningStats utility_p1;
    RunningStats utility_p2;
    RunningStats utility_p1_overconfident;
    RunningStats utility_p1_risk_averse;

    double aggregate_demand_mean = 0.0;
    double aggregate_demand_stddev = 0.0;

    friend bool operator==(const SimulationReport&, const SimulationReport&) = default;
};

/// Splits a user seed into per-purpose stream seeds (SplitMix64 outputs).
std::uint64_t stream_seed(std::uint64_t seed, unsigned stream_index);

SimulationReport run_market(const SimulationConfig& cfg);

}  // namespace biasgame
