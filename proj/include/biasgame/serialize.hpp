#pragma once

// JSON conversions (nlohmann ADL hooks) and CSV / table helpers shared by
// the command-line front end and the Python module.

#include <nlohmann/json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "biasgame/equilibrium.hpp"
#include "biasgame/model.hpp"
#include "biasgame/simulate.hpp"
#include "biasgame/statics.hpp"

namespace biasgame {

void to_json(nlohmann::json& j, const ModelParams& params);
/// Missing keys keep their defaults; unknown keys are not checked here.
void from_json(const nlohmann::json& j, ModelParams& params);

void to_json(nlohmann::json& j, FocMode mode);
void from_json(const nlohmann::json& j, FocMode& mode);

void to_json(nlohmann::json& j, const EquilibriumSolution& sol);
void from_json(const nlohmann::json& j, EquilibriumSolution& sol);

void to_json(nlohmann::json& j, const RunningStats& stats);
void from_json(const nlohmann::json& j, RunningStats& stats);

void to_json(nlohmann::json& j, const SimulationReport& report);
void from_json(const nlohmann::json& j, SimulationReport& report);

void to_json(nlohmann::json& j, const SweepRow& row);
void to_json(nlohmann::json& j, const SweepResult& result);

/// Shortest decimal form that parses back to the same double.
std::string format_full(double value);
/// Fixed four-decimal form used in human-readable tables.
std::string format_table(double value);

/// RFC 4180 field quoting: fields containing ',', '"', CR or LF are quoted
/// and embedded quotes doubled.
std::string csv_field(std::string_view field);
std::string csv_line(const std::vector<std::string>& fields);

/// Left-aligned first column, right-aligned remaining columns.
std::string render_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows);

}  // namespace biasgame
