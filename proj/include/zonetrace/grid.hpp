#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace zonetrace {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Flows with |f| at or below this many MW are treated as exactly zero.
inline constexpr double kDefaultEpsilon = 1e-9;

struct Node {
    std::string id;
    std::string zone;
};

struct Line {
    std::string id;
    std::string from;
    std::string to;
    double reactance = 0.0;            // p.u.
    std::optional<double> capacity;    // MW
};

/// Orders ids numerically when both parse as integers, lexicographically otherwise.
bool natural_less(std::string_view a, std::string_view b);

/// Node -> zone assignment over a fixed node ordering.
class ZoneMap {
public:
    ZoneMap() = default;
    ZoneMap(std::vector<std::string> node_ids, std::vector<std::string> zones);

    Index size() const { return static_cast<Index>(zones_.size()); }
    const std::string& zone(Index node) const { return zones_.at(static_cast<std::size_t>(node)); }
    const std::string& zone_of(std::string_view node_id) const;
    const std::vector<std::string>& node_ids() const { return node_ids_; }
    const std::vector<std::string>& assignment() const { return zones_; }

    /// Distinct zone ids in natural order.
    std::vector<std::string> zones() const;
    std::vector<Index> nodes_in(std::string_view zone) const;

    bool operator==(const ZoneMap&) const = default;

private:
    std::vector<std::string> node_ids_;
    std::vector<std::string> zones_;
};

class Network {
public:
    Network() = default;

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Line>& lines() const { return lines_; }
    Index node_count() const { return static_cast<Index>(nodes_.size()); }
    Index line_count() const { return static_cast<Index>(lines_.size()); }

    Index node_index(std::string_view id) const;
    Index line_index(std::string_view id) const;
    Index from_index(Index line) const { return from_[static_cast<std::size_t>(line)]; }
    Index to_index(Index line) const { return to_[static_cast<std::size_t>(line)]; }

    const ZoneMap& zone_map() const { return zone_map_; }

    /// Copy of this network carrying a different zone assignment.
    Network with_zone_map(ZoneMap zones) const;

    friend Network build_network(std::vector<Node> nodes, std::vector<Line> lines,
                                 std::optional<ZoneMap> zones);

private:
    std::vector<Node> nodes_;
    std::vector<Line> lines_;
    std::vector<Index> from_;
    std::vector<Index> to_;
    std::unordered_map<std::string, Index> node_lookup_;
    std::unordered_map<std::string, Index> line_lookup_;
    ZoneMap zone_map_;
};

/// Validates and indexes a network. Node and line order fix matrix indexing.
/// When `zones` is omitted the zone labels carried by the nodes are used.
/// Throws InputError on duplicate ids, dangling endpoints, self-loops,
/// non-positive reactance, a missing zone, or a disconnected graph.
Network build_network(std::vector<Node> nodes, std::vector<Line> lines,
                      std::optional<ZoneMap> zones = std::nullopt);

/// Signed incidence split into nonnegative parts; rows are lines (M x N).
struct IncidenceMatrices {
    Matrix G;
    Matrix G_r;
    Matrix G_t;
};

IncidenceMatrices incidence(const Network& network);

/// Network re-oriented so that every line carries nonnegative flow.
struct OrientedFlows {
    Network network;
    Vector flows;                       // >= 0, clamped to 0 within epsilon
    std::vector<int> orientation;       // +1 kept, -1 endpoints swapped
    std::vector<Index> topological_order;
};

/// Throws InputError if the strictly positive flows contain a directed cycle.
OrientedFlows orient_by_flow(const Network& network, const Vector& flows,
                             double epsilon = kDefaultEpsilon);

}  // namespace zonetrace
