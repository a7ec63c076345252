#include "biasgame/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <vector>

#include "biasgame/errors.hpp"
#include "biasgame/serialize.hpp"

namespace biasgame::cli {

using nlohmann::json;

std::string_view to_string(Command command) {
    switch (command) {
        case Command::Solve: return "solve";
        case Command::Audit: return "audit";
        case Command::Sweep: return "sweep";
        case Command::Spillover: return "spillover";
        case Command::Simulate: return "simulate";
    }
    return "?";
}

Command parse_command(std::string_view text) {
    for (auto c : {Command::Solve, Command::Audit, Command::Sweep, Command::Spillover,
                   Command::Simulate}) {
        if (to_string(c) == text) {
            return c;
        }
    }
    throw InvalidParams("unknown command '" + std::string(text) + "'");
}

OutputFormat parse_output_format(std::string_view text) {
    if (text == "table") return OutputFormat::Table;
    if (text == "csv") return OutputFormat::Csv;
    if (text == "json") return OutputFormat::Json;
    throw InvalidParams("output must be one of table, csv, json (got '" + std::string(text) +
                        "')");
}

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.emplace_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return parts;
}

double parse_number(const std::string& text, const char* what) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw InvalidParams(std::string(what) + ": '" + text + "' is not a number");
    }
    return value;
}

int parse_steps(const std::string& text, const char* what) {
    const double value = parse_number(text, what);
    if (value != static_cast<int>(value)) {
        throw InvalidParams(std::string(what) + ": steps must be an integer");
    }
    return static_cast<int>(value);
}

const std::vector<std::string> kTopLevelKeys = {"a",     "delta",  "c_o",   "c_a",  "s",
                                                "theta", "p",      "mode",  "output", "out",
                                                "solve", "audit",  "sweep", "spillover",
                                                "simulate"};

void check_keys(const json& object, const std::vector<std::string>& allowed, const char* where) {
    for (const auto& [key, value] : object.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw InvalidParams(std::string("unknown key '") + key + "' in " + where);
        }
    }
}

// Keeps the command block's copy of the parameters in sync.
RunConfig synced(RunConfig config) {
    if (config.sweep) {
        config.sweep->base = config.params;
        config.sweep->mode = config.mode;
    }
    if (config.simulate) {
        config.simulate->params = config.params;
        config.simulate->mode = config.mode;
    }
    return config;
}

}  // namespace

void RunConfig::validate() const {
    params.validate();
    const RunConfig s = synced(*this);
    switch (command) {
        case Command::Sweep:
            if (!s.sweep) {
                throw InvalidParams("sweep requires --sweep <param>:<lo>:<hi>:<steps> or a "
                                    "'sweep' block");
            }
            s.sweep->validate();
            break;
        case Command::Spillover:
            if (!s.spillover) {
                throw InvalidParams("spillover requires --gap <lo>:<hi>:<steps> or a "
                                    "'spillover' block");
            }
            break;
        case Command::Simulate:
            if (!s.simulate) {
                throw InvalidParams("simulate requires a simulation block");
            }
            s.simulate->validate();
            break;
        default:
            break;
    }
}

SweepSpec parse_sweep_flag(std::string_view text) {
    const auto parts = split(text, ':');
    if (parts.size() != 4) {
        throw InvalidParams("--sweep expects <param>:<lo>:<hi>:<steps> (got '" +
                            std::string(text) + "')");
    }
    SweepSpec spec;
    spec.parameter = parse_parameter(parts[0]);
    spec.lo = parse_number(parts[1], "--sweep lo");
    spec.hi = parse_number(parts[2], "--sweep hi");
    spec.steps = parse_steps(parts[3], "--sweep steps");
    return spec;
}

GapSpec parse_gap_flag(std::string_view text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) {
        throw InvalidParams("--gap expects <lo>:<hi>:<steps> (got '" + std::string(text) + "')");
    }
    return GapSpec{parse_number(parts[0], "--gap lo"), parse_number(parts[1], "--gap hi"),
                   parse_steps(parts[2], "--gap steps")};
}

void apply_config_document(std::string_view document, RunConfig& config) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw InvalidParams(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw InvalidParams("config must be a JSON object");
    }
    check_keys(doc, kTopLevelKeys, "config");
    try {
        from_json(doc, config.params);
        if (doc.contains("mode")) {
            config.mode = parse_foc_mode(doc.at("mode").get<std::string>());
        }
        if (doc.contains("output")) {
            config.format = parse_output_format(doc.at("output").get<std::string>());
        }
        if (doc.contains("out")) {
            config.out_path = doc.at("out").get<std::string>();
        }
        if (config.command == Command::Sweep && doc.contains("sweep")) {
            const auto& block = doc.at("sweep");
            check_keys(block, {"parameter", "lo", "hi", "steps"}, "sweep block");
            SweepSpec spec;
            spec.parameter = parse_parameter(block.at("parameter").get<std::string>());
            spec.lo = block.at("lo").get<double>();
            spec.hi = block.at("hi").get<double>();
            spec.steps = block.at("steps").get<int>();
            config.sweep = spec;
        }
        if (config.command == Command::Spillover && doc.contains("spillover")) {
            const auto& block = doc.at("spillover");
            check_keys(block, {"lo", "hi", "steps"}, "spillover block");
            config.spillover = GapSpec{block.at("lo").get<double>(), block.at("hi").get<double>(),
                                       block.at("steps").get<int>()};
        }
        if (config.command == Command::Simulate && doc.contains("simulate")) {
            const auto& block = doc.at("simulate");
            check_keys(block, {"rounds", "seed"}, "simulate block");
            SimulationConfig sim = config.simulate.value_or(SimulationConfig{});
            sim.rounds = block.value("rounds", sim.rounds);
            sim.seed = block.value("seed", sim.seed);
            config.simulate = sim;
        }
    } catch (const json::exception& e) {
        throw InvalidParams(std::string("malformed config value: ") + e.what());
    }
}

AuditReport make_audit(const ModelParams& params) {
    AuditReport report;
    report.params = params;
    report.derived = solve_bne(params, FocMode::DerivedFoc);
    report.verbatim = solve_bne(params, FocMode::PaperVerbatim);
    const auto& d = report.derived;
    report.br_q1_o = {best_response_p1(PlayerType::Overconfident, d.q2, params, FocMode::DerivedFoc),
                      best_response_p1(PlayerType::Overconfident, d.q2, params,
                                       FocMode::PaperVerbatim)};
    report.br_q1_a = {best_response_p1(PlayerType::RiskAverse, d.q2, params, FocMode::DerivedFoc),
                      best_response_p1(PlayerType::RiskAverse, d.q2, params,
                                       FocMode::PaperVerbatim)};
    report.br_q2 = {best_response_p2(d.q1_o, d.q1_a, params, FocMode::DerivedFoc),
                    best_response_p2(d.q1_o, d.q1_a, params, FocMode::PaperVerbatim)};
    return report;
}

namespace {

struct NamedValue {
    std::string name;
    double value;
};

std::vector<NamedValue> solution_fields(const EquilibriumSolution& sol) {
    return {{"q1_o", sol.q1_o},
            {"q1_a", sol.q1_a},
            {"q2", sol.q2},
            {"r_o", sol.r_o},
            {"r_a", sol.r_a},
            {"residual_q1_o", sol.residuals[0]},
            {"residual_q1_a", sol.residuals[1]},
            {"residual_q2", sol.residuals[2]}};
}

std::vector<std::string> sweep_header(bool spillover) {
    std::vector<std::string> header{spillover ? "gap" : "value"};
    if (spillover) {
        header.insert(header.end(), {"c_o", "c_a"});
    }
    header.insert(header.end(), {"q1_o", "q1_a", "q2", "r_o", "r_a", "residual_q1_o",
                                 "residual_q1_a", "residual_q2", "aggregate_demand",
                                 "aggregate_demand_o", "aggregate_demand_a", "divergence"});
    if (spillover) {
        header.emplace_back("divergence_slope_sign");
    }
    header.emplace_back("error");
    return header;
}

std::vector<std::string> sweep_cells(const SweepResult& result, const SweepRow& row,
                                     std::string (*fmt_number)(double)) {
    std::vector<std::string> cells{fmt_number(row.value)};
    if (result.is_spillover) {
        cells.push_back(fmt_number(row.params.c_o));
        cells.push_back(fmt_number(row.params.c_a));
    }
    if (row.solution) {
        for (const auto& field : solution_fields(*row.solution)) {
            cells.push_back(fmt_number(field.value));
        }
        for (double v : {row.aggregate_demand, row.aggregate_demand_o, row.aggregate_demand_a,
                         row.divergence}) {
            cells.push_back(fmt_number(v));
        }
        if (result.is_spillover) {
            cells.push_back(std::to_string(row.divergence_slope_sign));
        }
    } else {
        cells.resize(cells.size() + 12 + (result.is_spillover ? 1 : 0));
    }
    cells.push_back(row.error);
    return cells;
}

std::string write_output(const RunConfig& config, const std::string& text, std::ostream& out) {
    if (!config.out_path) {
        out << text;
        return {};
    }
    std::ofstream file(*config.out_path, std::ios::binary | std::ios::trunc);
    if (!file) {
        return "cannot open output path '" + *config.out_path + "' for writing";
    }
    file << text;
    if (!file) {
        return "failed writing '" + *config.out_path + "'";
    }
    return {};
}

}  // namespace

std::string render_solution(const ModelParams& params, const EquilibriumSolution& sol,
                            OutputFormat format) {
    const auto fields = solution_fields(sol);
    switch (format) {
        case OutputFormat::Json:
            return json{{"command", "solve"}, {"params", params}, {"solution", sol}}.dump(2) + "\n";
        case OutputFormat::Csv: {
            std::vector<std::string> header{"mode"};
            std::vector<std::string> row{std::string(to_string(sol.mode))};
            for (const auto& f : fields) {
                header.push_back(f.name);
                row.push_back(format_full(f.value));
            }
            return csv_line(header) + csv_line(row);
        }
        case OutputFormat::Table: {
            std::vector<std::vector<std::string>> rows;
            for (const auto& f : fields) {
                rows.push_back({f.name, format_table(f.value)});
            }
            return "mode: " + std::string(to_string(sol.mode)) + "\n" +
                   render_table({"quantity", "value"}, rows);
        }
    }
    return {};
}

std::string render_audit(const AuditReport& report, OutputFormat format) {
    auto rows = std::vector<std::tuple<std::string, double, double>>{};
    const auto d = solution_fields(report.derived);
    const auto v = solution_fields(report.verbatim);
    for (std::size_t i = 0; i < d.size(); ++i) {
        rows.emplace_back(d[i].name, d[i].value, v[i].value);
    }
    rows.emplace_back("br_q1_o_at_derived_q2", report.br_q1_o.derived, report.br_q1_o.verbatim);
    rows.emplace_back("br_q1_a_at_derived_q2", report.br_q1_a.derived, report.br_q1_a.verbatim);
    rows.emplace_back("br_q2_at_derived_q1", report.br_q2.derived, report.br_q2.verbatim);

    switch (format) {
        case OutputFormat::Json: {
            json gap;
            for (std::size_t i = 0; i < d.size(); ++i) {
                gap[d[i].name] = v[i].value - d[i].value;
            }
            json br;
            for (std::size_t i = d.size(); i < rows.size(); ++i) {
                const auto& [name, dv, vv] = rows[i];
                br[name] = {{"derived", dv}, {"verbatim", vv}, {"gap", vv - dv}};
            }
            return json{{"command", "audit"},
                        {"params", report.params},
                        {"derived", report.derived},
                        {"verbatim", report.verbatim},
                        {"gap", gap},
                        {"best_response_at_derived_equilibrium", br}}
                       .dump(2) +
                   "\n";
        }
        case OutputFormat::Csv: {
            std::string out = csv_line({"quantity", "derived", "verbatim", "gap"});
            for (const auto& [name, dv, vv] : rows) {
                out += csv_line({name, format_full(dv), format_full(vv), format_full(vv - dv)});
            }
            return out;
        }
        case OutputFormat::Table: {
            std::vector<std::vector<std::string>> cells;
            for (const auto& [name, dv, vv] : rows) {
                cells.push_back({name, format_table(dv), format_table(vv), format_table(vv - dv)});
            }
            return render_table({"quantity", "derived", "verbatim", "gap"}, cells);
        }
    }
    return {};
}

std::string render_sweep(const SweepResult& result, OutputFormat format) {
    switch (format) {
        case OutputFormat::Json:
            return json(result).dump(2) + "\n";
        case OutputFormat::Csv: {
            std::string out;
            std::vector<std::string> header = sweep_header(result.is_spillover);
            if (!result.is_spillover) {
                header.insert(header.begin(), "parameter");
            }
            out += csv_line(header);
            for (const auto& row : result.rows) {
                auto cells = sweep_cells(result, row, &format_full);
                if (!result.is_spillover) {
                    cells.insert(cells.begin(), std::string(to_string(result.parameter)));
                }
                out += csv_line(cells);
            }
            return out;
        }
        case OutputFormat::Table: {
            std::vector<std::vector<std::string>> rows;
            for (const auto& row : result.rows) {
                rows.push_back(sweep_cells(result, row, &format_table));
            }
            auto header = sweep_header(result.is_spillover);
            if (!result.is_spillover) {
                header.front() = std::string(to_string(result.parameter));
            }
            return "mode: " + std::string(to_string(result.mode)) + "\n" +
                   render_table(header, rows);
        }
    }
    return {};
}

std::string render_simulation(const SimulationReport& r, OutputFormat format) {
    if (format == OutputFormat::Json) {
        return json(r).dump(2) + "\n";
    }
    const bool csv = format == OutputFormat::Csv;
    const auto num = [csv](double v) { return csv ? format_full(v) : format_table(v); };
    const auto opt = [&](const std::optional<double>& v) { return v ? num(*v) : std::string(); };
    const std::vector<std::pair<std::string, std::string>> metrics = {
        {"rounds", std::to_string(r.rounds)},
        {"seed", std::to_string(r.seed)},
        {"mode", std::string(to_string(r.mode))},
        {"count_overconfident", std::to_string(r.count_overconfident)},
        {"count_risk_averse", std::to_string(r.count_risk_averse)},
        {"invest_freq_p1", num(r.invest_freq_p1)},
        {"invest_freq_overconfident", opt(r.invest_freq_overconfident)},
        {"invest_freq_risk_averse", opt(r.invest_freq_risk_averse)},
        {"herd_match_rate", num(r.herd_match_rate)},
        {"mean_utility_p1", num(r.utility_p1.mean)},
        {"mean_utility_p2", num(r.utility_p2.mean)},
        {"mean_utility_p1_overconfident", num(r.utility_p1_overconfident.mean)},
        {"stderr_utility_p1_overconfident", num(r.utility_p1_overconfident.standard_error())},
        {"mean_utility_p1_risk_averse", num(r.utility_p1_risk_averse.mean)},
        {"stderr_utility_p1_risk_averse", num(r.utility_p1_risk_averse.standard_error())},
        {"aggregate_demand_mean", num(r.aggregate_demand_mean)},
        {"aggregate_demand_stddev", num(r.aggregate_demand_stddev)},
    };
    if (csv) {
        std::string out = csv_line({"metric", "value"});
        for (const auto& [k, v] : metrics) {
            out += csv_line({k, v});
        }
        return out;
    }
    std::vector<std::vector<std::string>> rows;
    for (const auto& [k, v] : metrics) {
        rows.push_back({k, v});
    }
    return render_table({"metric", "value"}, rows);
}

int execute(const RunConfig& raw, std::ostream& out, std::ostream& err) {
    const RunConfig config = synced(raw);
    try {
        config.validate();
    } catch (const InvalidParams& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    std::string text;
    int code = kExitOk;
    try {
        switch (config.command) {
            case Command::Solve:
                text = render_solution(config.params, solve_bne(config.params, config.mode),
                                       config.format);
                break;
            case Command::Audit:
                text = render_audit(make_audit(config.params), config.format);
                break;
            case Command::Sweep: {
                const auto result = sweep(*config.sweep);
                text = render_sweep(result, config.format);
                code = result.succeeded() > 0 ? kExitOk : kExitCompute;
                break;
            }
            case Command::Spillover: {
                const auto& g = *config.spillover;
                const auto result =
                    spillover_report(config.params, g.lo, g.hi, g.steps, config.mode);
                text = render_sweep(result, config.format);
                code = result.succeeded() > 0 ? kExitOk : kExitCompute;
                break;
            }
            case Command::Simulate:
                text = render_simulation(run_market(*config.simulate), config.format);
                break;
        }
    } catch (const InvalidParams& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ComputeError& e) {
        err << "computation failed: " << e.what() << "\n";
        return kExitCompute;
    }

    if (auto problem = write_output(config, text, out); !problem.empty()) {
        err << "error: " << problem << "\n";
        return kExitConfig;
    }
    return code;
}

namespace {

constexpr const char* kExample =
    "Example (worked base case):\n"
    "  biasgame solve --a 10 --delta 1 --c_o 1 --c_a 2 --s 1 --theta 0.5 --p 0.5\n";

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Equilibrium solver and audit tool for a two-investor Bayesian game with "
                 "overconfident, risk-averse and herding players."};
    app.name("biasgame");
    app.require_subcommand(0, 1);

    std::string params_file;
    std::string mode_text;
    std::string output_text;
    std::string out_path;
    std::string sweep_text;
    std::string gap_text;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> rounds;
    std::optional<double> a, delta, c_o, c_a, s, theta, p;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--params", params_file, "JSON config file");
        sub->add_option("--mode", mode_text, "derived|verbatim (default derived)");
        sub->add_option("--output", output_text, "csv|json|table (default table)");
        sub->add_option("--out", out_path, "write output to this path instead of stdout");
        sub->add_option("--a", a, "demand intercept");
        sub->add_option("--delta", delta, "bias magnitude");
        sub->add_option("--c_o", c_o, "overconfident cost per share");
        sub->add_option("--c_a", c_a, "risk-averse cost per share");
        sub->add_option("--s", s, "safe per-share return");
        sub->add_option("--theta", theta, "probability the risky payoff is realised");
        sub->add_option("--p", p, "belief that Player 1 is overconfident");
    };

    auto* solve_cmd = app.add_subcommand("solve", "closed-form equilibrium");
    auto* audit_cmd = app.add_subcommand("audit", "compare derived and verbatim algebra");
    auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweep");
    auto* spill_cmd = app.add_subcommand("spillover", "cost-gap spillover report");
    auto* sim_cmd = app.add_subcommand("simulate", "seeded Monte Carlo realisation");
    for (auto* sub : {solve_cmd, audit_cmd, sweep_cmd, spill_cmd, sim_cmd}) {
        add_common(sub);
    }
    sweep_cmd->add_option("--sweep", sweep_text, "<param>:<lo>:<hi>:<steps>");
    spill_cmd->add_option("--gap", gap_text, "<lo>:<hi>:<steps> for c_o - c_a");
    sim_cmd->add_option("--seed", seed, "64-bit seed (default 42)");
    sim_cmd->add_option("--rounds", rounds, "number of rounds (default 100000)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitConfig;
    }

    if (app.get_subcommands().empty()) {
        out << app.help() << "\n" << kExample;
        return kExitOk;
    }

    RunConfig config;
    try {
        config.command = parse_command(app.get_subcommands().front()->get_name());
        if (config.command == Command::Simulate) {
            config.simulate = SimulationConfig{};
        }
        if (!params_file.empty()) {
            std::ifstream in(params_file);
            if (!in) {
                throw InvalidParams("cannot read config file '" + params_file + "'");
            }
            std::stringstream buffer;
            buffer << in.rdbuf();
            apply_config_document(buffer.str(), config);
        }
        const auto override_with = [](double& field, const std::optional<double>& flag) {
            if (flag) field = *flag;
        };
        override_with(config.params.a, a);
        override_with(config.params.delta, delta);
        override_with(config.params.c_o, c_o);
        override_with(config.params.c_a, c_a);
        override_with(config.params.s, s);
        override_with(config.params.theta, theta);
        override_with(config.params.p, p);
        if (!mode_text.empty()) config.mode = parse_foc_mode(mode_text);
        if (!output_text.empty()) config.format = parse_output_format(output_text);
        if (!out_path.empty()) config.out_path = out_path;
        if (!sweep_text.empty()) config.sweep = parse_sweep_flag(sweep_text);
        if (!gap_text.empty()) config.spillover = parse_gap_flag(gap_text);
        if (config.simulate) {
            if (seed) config.simulate->seed = *seed;
            if (rounds) config.simulate->rounds = *rounds;
        }
    } catch (const InvalidParams& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return execute(config, out, err);
}

}  // namespace biasgame::cli
