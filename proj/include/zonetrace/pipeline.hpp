#pragma once

#include "zonetrace/classification.hpp"
#include "zonetrace/dc_powerflow.hpp"
#include "zonetrace/grid.hpp"
#include "zonetrace/io.hpp"
#include "zonetrace/psp.hpp"
#include "zonetrace/zone_split.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace zonetrace {

struct PipelineConfig {
    double epsilon = kDefaultEpsilon;
    RankingMode mode = RankingMode::Absolute;
    std::optional<std::string> slack;
    std::filesystem::path output_dir = ".";
    bool emit_debug_matrices = false;
    std::optional<std::filesystem::path> zone_file;  // overrides the network's zones
};

/// Throws InputError when epsilon is not positive.
void validate(const PipelineConfig& config);

/// Everything computed for one scenario under one zone map.
struct ScenarioResult {
    std::string label;
    std::vector<std::string> line_ids;
    Vector flows;  // declared orientation
    OrientedFlows oriented;
    TraceResult trace;
    DecompositionTable table;
    Vector p_lf;
};

ScenarioResult evaluate_scenario(const Network& network, const ZoneMap& zones,
                                 const Scenario& scenario, const Vector& flows,
                                 double epsilon = kDefaultEpsilon);

/// Re-classifies an evaluated scenario under `zones`; flows and trace are reused.
ScenarioResult rezone(const ScenarioResult& result, const ZoneMap& zones,
                      double epsilon = kDefaultEpsilon);

/// Solves (or takes from `flows`) and evaluates every scenario concurrently.
/// Results are returned in input order.
std::vector<ScenarioResult> evaluate_scenarios(const Network& network, const ZoneMap& zones,
                                               const std::vector<Scenario>& scenarios,
                                               const io::FlowSet* flows,
                                               const PipelineConfig& config);

struct AveragedResult {
    DecompositionTable mean_table;
    Vector mean_flows;
    Vector mean_p_lf;
    std::vector<std::string> labels;
    std::vector<DecompositionTable> per_scenario;
};

/// Arithmetic mean of already-decomposed scenarios. Throws InputError on an
/// empty input or results from different networks.
AveragedResult average_decomposition(std::span<const ScenarioResult> results);

struct PipelineReport {
    std::vector<ScenarioResult> scenarios;
    AveragedResult pre;
    std::vector<ZoneScore> ranking;
    std::vector<std::vector<ZoneScore>> per_scenario_rankings;
    std::optional<SplitResult> split;
    std::optional<AveragedResult> post;
    double total_lf_pre = 0.0;
    double total_lf_post = 0.0;
    bool flows_unchanged = true;
    bool converged = false;  // no loop flows, nothing split
    std::string message;
};

/// Decompose, rank, split the target zone and re-decompose. A configuration
/// without loop flows is reported with `converged` set rather than thrown.
PipelineReport run_pipeline(const Network& network, const std::vector<Scenario>& scenarios,
                            const io::FlowSet* flows, const PipelineConfig& config);

/// Writes decomposition_pre.csv/.json, zone_ranking.json, p_lf.csv and, when a
/// split happened, zone_map_new.json, merge_trace.json and decomposition_post.*.
void write_report(const PipelineReport& report, const Network& network,
                  const PipelineConfig& config);

/// Dumps F, G2T and L2T (and every X^k when `exchange` is set) as CSV
/// matrices named "<label>_<matrix>.csv" under `dir`.
void write_trace_matrices(const ScenarioResult& result, const Network& network,
                          const std::filesystem::path& dir, bool exchange);

/// File-level entry point; returns the process exit status (0, or 3 when converged).
int run_pipeline(const std::filesystem::path& network_file,
                 const std::filesystem::path& scenario_file,
                 const std::optional<std::filesystem::path>& flows_file,
                 const PipelineConfig& config);

}  // namespace zonetrace
