#pragma once

#include "zonetrace/classification.hpp"
#include "zonetrace/grid.hpp"

#include <string>
#include <vector>

namespace zonetrace {

/// Top-ranked zone. Throws NoLoopFlowsError when its burden is <= epsilon.
std::string select_target_zone(const std::vector<ZoneScore>& ranking,
                               double epsilon = kDefaultEpsilon);

struct Merge {
    std::vector<std::string> left;
    std::vector<std::string> right;
    double distance = 0.0;
};

struct SplitResult {
    std::string target_zone;
    std::string source_zone;  // "<target>_src", higher mean p_lf
    std::string sink_zone;    // "<target>_snk"
    ZoneMap new_zone_map;
    std::vector<std::pair<std::string, double>> cluster_features;
    std::vector<Merge> merge_trace;
    bool degenerate = false;  // all features equal
};

/// Adjacency-constrained agglomerative clustering of the target zone's nodes
/// on their loop-flow injection, stopped at two clusters. Cluster distance is
/// the absolute difference of mean features; equal-distance candidates are
/// resolved in favour of the pair holding the lowest node id.
SplitResult split_zone(const Network& network, const ZoneMap& zones, const std::string& target,
                       const Vector& p_lf);

}  // namespace zonetrace
