#pragma once

// File formats: network / zone-map / scenario JSON, scenario and flow CSV,
// and the report writers used by the CLI.

#include "zonetrace/classification.hpp"
#include "zonetrace/dc_powerflow.hpp"
#include "zonetrace/grid.hpp"
#include "zonetrace/zone_split.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace zonetrace::io {

using nlohmann::json;

Network parse_network(const json& doc);
Network read_network(const std::filesystem::path& path);

/// {"nodes":[{"id":..,"zone":..}]}; every node of `network` must be listed.
ZoneMap parse_zone_map(const json& doc, const Network& network);
ZoneMap read_zone_map(const std::filesystem::path& path, const Network& network);
json zone_map_to_json(const ZoneMap& zones);

/// {"scenarios":[{"label":..,"injections":[{"node":..,"gen":..,"load":..}]}]}.
/// Nodes not listed inject nothing.
std::vector<Scenario> parse_scenarios_json(const json& doc, const Network& network);
/// CSV with header scenario,node_id,gen_mw,load_mw.
std::vector<Scenario> parse_scenarios_csv(std::istream& in, const Network& network);
/// Dispatches on the file extension (.csv, anything else is JSON).
std::vector<Scenario> read_scenarios(const std::filesystem::path& path, const Network& network);

/// Pre-solved line flows. A two-column file (line_id,mw) applies to every
/// scenario; a three-column file (scenario,line_id,mw) is keyed by label.
class FlowSet {
public:
    static FlowSet parse_csv(std::istream& in, const Network& network);

    /// Throws InputError when no flows are recorded for `label`.
    const Vector& for_scenario(const std::string& label) const;

    std::optional<Vector> shared;
    std::map<std::string, Vector> by_scenario;
};

FlowSet read_flows(const std::filesystem::path& path, const Network& network);
void write_flows_csv(std::ostream& out, const Network& network,
                     const std::vector<std::pair<std::string, Vector>>& flows);

/// Fixed two decimals; values that round to zero print as 0.00.
std::string format_mw(double mw);

/// line_id,IN,IE,TR,LF at two decimals.
void write_decomposition_csv(std::ostream& out, const DecompositionTable& table);
json decomposition_to_json(const DecompositionTable& table);

void write_p_lf_csv(std::ostream& out, const Network& network, const Vector& p_lf);
json ranking_to_json(const std::vector<ZoneScore>& ranking, RankingMode mode);
json split_to_json(const SplitResult& split);

void write_matrix_csv(std::ostream& out, const Matrix& m, const std::vector<std::string>& row_ids,
                      const std::vector<std::string>& col_ids);

/// Writes `text` to `path`, throwing InputError if the file cannot be opened.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace zonetrace::io
