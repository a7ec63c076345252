#include "biasgame/simulate.hpp"

#include <cmath>
#include <random>

#include "biasgame/errors.hpp"

namespace biasgame {

void SimulationConfig::validate() const {
    params.validate();
    if (rounds < 1) {
        throw InvalidParams("rounds must be >= 1");
    }
}

void RunningStats::add(double x) {
    ++count;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
}

double RunningStats::variance() const {
    return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
}

double RunningStats::stddev() const {
    return std::sqrt(variance());
}

double RunningStats::standard_error() const {
    return count > 0 ? stddev() / std::sqrt(static_cast<double>(count)) : 0.0;
}

std::uint64_t stream_seed(std::uint64_t seed, unsigned stream_index) {
    std::uint64_t state = seed;
    std::uint64_t z = 0;
    for (unsigned i = 0; i <= stream_index; ++i) {
        state += 0x9E3779B97F4A7C15ULL;
        z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        z ^= z >> 31;
    }
    return z;
}

namespace {

double unit_uniform(std::mt19937_64& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

}  // namespace

SimulationReport run_market(const SimulationConfig& cfg) {
    cfg.validate();
    const ModelParams& params = cfg.params;

    SimulationReport report;
    report.rounds = cfg.rounds;
    report.seed = cfg.seed;
    report.mode = cfg.mode;
    report.equilibrium = solve_bne(params, cfg.mode);
    const auto& eq = report.equilibrium;

    std::mt19937_64 type_stream(stream_seed(cfg.seed, 0));
    std::mt19937_64 payoff_stream(stream_seed(cfg.seed, 1));

    std::uint64_t invest_o = 0;
    std::uint64_t invest_a = 0;
    std::uint64_t herd_matches = 0;
    RunningStats demand;

    for (std::uint64_t round = 0; round < cfg.rounds; ++round) {
        const PlayerType type = unit_uniform(type_stream) < params.p ? PlayerType::Overconfident
                                                                     : PlayerType::RiskAverse;
        const bool risky_realised = unit_uniform(payoff_stream) < params.theta;

        const bool over = type == PlayerType::Overconfident;
        const double r = over ? eq.r_o : eq.r_a;
        const ActionChoice a1 = action_rule_p1(type, params, r);
        const ActionChoice a2 = action_rule_p2(a1);
        herd_matches += a1 == a2 ? 1 : 0;

        const double q1 = a1 == ActionChoice::Invest ? (over ? eq.q1_o : eq.q1_a) : 0.0;
        const double q2 = a2 == ActionChoice::Invest ? eq.q2 : 0.0;
        const double per_share =
            risky_realised ? per_share_utility_p1(type, ActionChoice::Invest, params, r) : params.s;
        const double u1 = per_share * q1;
        const double u2 = per_share * q2;

        if (over) {
            ++report.count_overconfident;
            invest_o += a1 == ActionChoice::Invest ? 1 : 0;
            report.utility_p1_overconfident.add(u1);
        } else {
            ++report.count_risk_averse;
            invest_a += a1 == ActionChoice::Invest ? 1 : 0;
            report.utility_p1_risk_averse.add(u1);
        }
        report.utility_p1.add(u1);
        report.utility_p2.add(u2);
        demand.add(q1 + q2);
    }

    const auto n = static_cast<double>(cfg.rounds);
    report.invest_freq_p1 = static_cast<double>(invest_o + invest_a) / n;
    if (report.count_overconfident > 0) {
        report.invest_freq_overconfident =
            static_cast<double>(invest_o) / static_cast<double>(report.count_overconfident);
    }
    if (report.count_risk_averse > 0) {
        report.invest_freq_risk_averse =
            static_cast<double>(invest_a) / static_cast<double>(report.count_risk_averse);
    }
    report.herd_match_rate = static_cast<double>(herd_matches) / n;
    report.aggregate_demand_mean = demand.mean;
    report.aggregate_demand_stddev = demand.stddev();
    return report;
}

}  // namespace biasgame
