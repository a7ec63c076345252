#include "biasgame/serialize.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace biasgame {

using nlohmann::json;

void to_json(json& j, const ModelParams& params) {
    j = json{{"a", params.a},         {"delta", params.delta}, {"c_o", params.c_o},
             {"c_a", params.c_a},     {"s", params.s},         {"theta", params.theta},
             {"p", params.p}};
}

void from_json(const json& j, ModelParams& params) {
    params.a = j.value("a", params.a);
    params.delta = j.value("delta", params.delta);
    params.c_o = j.value("c_o", params.c_o);
    params.c_a = j.value("c_a", params.c_a);
    params.s = j.value("s", params.s);
    params.theta = j.value("theta", params.theta);
    params.p = j.value("p", params.p);
}

void to_json(json& j, FocMode mode) {
    j = std::string(to_string(mode));
}

void from_json(const json& j, FocMode& mode) {
    mode = parse_foc_mode(j.get<std::string>());
}

void to_json(json& j, const EquilibriumSolution& sol) {
    j = json{{"q1_o", sol.q1_o}, {"q1_a", sol.q1_a}, {"q2", sol.q2},
             {"r_o", sol.r_o},   {"r_a", sol.r_a},   {"mode", sol.mode},
             {"residuals", sol.residuals}};
}

void from_json(const json& j, EquilibriumSolution& sol) {
    j.at("q1_o").get_to(sol.q1_o);
    j.at("q1_a").get_to(sol.q1_a);
    j.at("q2").get_to(sol.q2);
    j.at("r_o").get_to(sol.r_o);
    j.at("r_a").get_to(sol.r_a);
    j.at("mode").get_to(sol.mode);
    j.at("residuals").get_to(sol.residuals);
}

void to_json(json& j, const RunningStats& stats) {
    j = json{{"count", stats.count},
             {"mean", stats.mean},
             {"m2", stats.m2},
             {"stddev", stats.stddev()},
             {"standard_error", stats.standard_error()}};
}

void from_json(const json& j, RunningStats& stats) {
    j.at("count").get_to(stats.count);
    j.at("mean").get_to(stats.mean);
    j.at("m2").get_to(stats.m2);
}

namespace {

json optional_number(const std::optional<double>& value) {
    return value ? json(*value) : json(nullptr);
}

std::optional<double> read_optional(const json& j) {
    return j.is_null() ? std::nullopt : std::optional<double>(j.get<double>());
}

}  // namespace

void to_json(json& j, const SimulationReport& r) {
    j = json{
        {"rounds", r.rounds},
        {"seed", r.seed},
        {"mode", r.mode},
        {"equilibrium", r.equilibrium},
        {"type_counts",
         {{"overconfident", r.count_overconfident}, {"risk_averse", r.count_risk_averse}}},
        {"invest_freq_p1",
         {{"overall", r.invest_freq_p1},
          {"overconfident", optional_number(r.invest_freq_overconfident)},
          {"risk_averse", optional_number(r.invest_freq_risk_averse)}}},
        {"herd_match_rate", r.herd_match_rate},
        {"realized_utility",
         {{"p1", r.utility_p1},
          {"p2", r.utility_p2},
          {"p1_overconfident", r.utility_p1_overconfident},
          {"p1_risk_averse", r.utility_p1_risk_averse}}},
        {"aggregate_demand_mean", r.aggregate_demand_mean},
        {"aggregate_demand_stddev", r.aggregate_demand_stddev},
    };
}

void from_json(const json& j, SimulationReport& r) {
    j.at("rounds").get_to(r.rounds);
    j.at("seed").get_to(r.seed);
    j.at("mode").get_to(r.mode);
    j.at("equilibrium").get_to(r.equilibrium);
    j.at("type_counts").at("overconfident").get_to(r.count_overconfident);
    j.at("type_counts").at("risk_averse").get_to(r.count_risk_averse);
    const auto& freq = j.at("invest_freq_p1");
    freq.at("overall").get_to(r.invest_freq_p1);
    r.invest_freq_overconfident = read_optional(freq.at("overconfident"));
    r.invest_freq_risk_averse = read_optional(freq.at("risk_averse"));
    j.at("herd_match_rate").get_to(r.herd_match_rate);
    const auto& u = j.at("realized_utility");
    u.at("p1").get_to(r.utility_p1);
    u.at("p2").get_to(r.utility_p2);
    u.at("p1_overconfident").get_to(r.utility_p1_overconfident);
    u.at("p1_risk_averse").get_to(r.utility_p1_risk_averse);
    j.at("aggregate_demand_mean").get_to(r.aggregate_demand_mean);
    j.at("aggregate_demand_stddev").get_to(r.aggregate_demand_stddev);
}

void to_json(json& j, const SweepRow& row) {
    j = json{{"value", row.value}, {"params", row.params}};
    if (row.solution) {
        j["solution"] = *row.solution;
        j["aggregate_demand"] = row.aggregate_demand;
        j["aggregate_demand_o"] = row.aggregate_demand_o;
        j["aggregate_demand_a"] = row.aggregate_demand_a;
        j["divergence"] = row.divergence;
    } else {
        j["solution"] = nullptr;
    }
    j["error"] = row.error.empty() ? json(nullptr) : json(row.error);
}

void to_json(json& j, const SweepResult& result) {
    j = json{{"parameter", result.is_spillover ? std::string("gap")
                                               : std::string(to_string(result.parameter))},
             {"mode", result.mode},
             {"rows", json::array()}};
    for (const auto& row : result.rows) {
        json r = row;
        if (result.is_spillover) {
            r["divergence_slope_sign"] = row.divergence_slope_sign;
        }
        j["rows"].push_back(std::move(r));
    }
}

std::string format_full(double value) {
    return fmt::format("{}", value);
}

std::string format_table(double value) {
    // Avoid printing "-0.0000" for tiny negative residuals.
    const std::string text = fmt::format("{:.4f}", value);
    return text == "-0.0000" ? "0.0000" : text;
}

std::string csv_field(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

std::string csv_line(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) {
            line += ',';
        }
        line += csv_field(fields[i]);
    }
    line += '\n';
    return line;
}

std::string render_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
        width[c] = header[c].size();
    }
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) {
            width[c] = std::max(width[c], row[c].size());
        }
    }
    const auto emit = [&](const std::vector<std::string>& cells) {
        std::string line;
        for (std::size_t c = 0; c < width.size(); ++c) {
            const std::string& cell = c < cells.size() ? cells[c] : std::string();
            if (c > 0) {
                line += "  ";
                line += fmt::format("{:>{}}", cell, width[c]);
            } else {
                line += fmt::format("{:<{}}", cell, width[c]);
            }
        }
        while (!line.empty() && line.back() == ' ') {
            line.pop_back();
        }
        return line + '\n';
    };
    std::string out = emit(header);
    std::size_t total = 0;
    for (std::size_t w : width) {
        total += w;
    }
    out += std::string(total + 2 * (width.size() - 1), '-') + '\n';
    for (const auto& row : rows) {
        out += emit(row);
    }
    return out;
}

}  // namespace biasgame
