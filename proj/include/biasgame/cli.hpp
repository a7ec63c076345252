#pragma once

// Command-line front end: config loading, the five commands and their
// CSV / JSON / table renderings.
//
// Exit codes: 0 success, 2 config or validation error, 3 computational error.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "biasgame/equilibrium.hpp"
#include "biasgame/model.hpp"
#include "biasgame/simulate.hpp"
#include "biasgame/statics.hpp"

namespace biasgame::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitCompute = 3;

enum class Command { Solve, Audit, Sweep, Spillover, Simulate };
enum class OutputFormat { Table, Csv, Json };

std::string_view to_string(Command command);
Command parse_command(std::string_view text);
OutputFormat parse_output_format(std::string_view text);

struct GapSpec {
    double lo = 0.0;
    double hi = 0.0;
    int steps = 2;
};

struct RunConfig {
    Command command = Command::Solve;
    ModelParams params;
    FocMode mode = FocMode::DerivedFoc;
    OutputFormat format = OutputFormat::Table;
    std::optional<std::string> out_path;  // stdout when empty

    // Only the block matching `command` is populated.
    std::optional<SweepSpec> sweep;
    std::optional<GapSpec> spillover;
    std::optional<SimulationConfig> simulate;

    /// Throws InvalidParams if the params or the command block are invalid.
    void validate() const;
};

/// Parses "<param>:<lo>:<hi>:<steps>".
SweepSpec parse_sweep_flag(std::string_view text);
/// Parses "<lo>:<hi>:<steps>".
GapSpec parse_gap_flag(std::string_view text);

/// Reads a JSON config document into `config`, overwriting only the keys it
/// contains.  Command blocks for other commands are ignored.  Throws
/// InvalidParams on unknown keys or malformed values.
void apply_config_document(std::string_view document, RunConfig& config);

struct BestResponsePair {
    double derived = 0.0;
    double verbatim = 0.0;
};

/// Both algebra modes side by side.  The best-response rows are evaluated
/// at the DerivedFoc equilibrium so that only the formulas differ.
struct AuditReport {
    ModelParams params;
    EquilibriumSolution derived;
    EquilibriumSolution verbatim;
    BestResponsePair br_q1_o;
    BestResponsePair br_q1_a;
    BestResponsePair br_q2;
};

AuditReport make_audit(const ModelParams& params);

std::string render_solution(const ModelParams& params, const EquilibriumSolution& sol,
                            OutputFormat format);
std::string render_audit(const AuditReport& report, OutputFormat format);
std::string render_sweep(const SweepResult& result, OutputFormat format);
std::string render_simulation(const SimulationReport& report, OutputFormat format);

/// Runs a fully-populated config, writing the rendering to `out` (or to
/// config.out_path).  Returns the exit code.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Entry point used by the executable.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace biasgame::cli
