#include "zonetrace/zone_split.hpp"

#include "zonetrace/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace zonetrace {

std::string select_target_zone(const std::vector<ZoneScore>& ranking, double epsilon) {
    if (ranking.empty()) throw InputError("empty zone ranking");
    if (!(ranking.front().lf_total_mw > epsilon)) throw NoLoopFlowsError("no loop flows");
    return ranking.front().zone;
}

namespace {

struct Cluster {
    std::vector<Index> members;
    double sum = 0.0;
    Index lowest = 0;  // member with the lowest node id

    double mean() const { return sum / static_cast<double>(members.size()); }
};

bool id_less(const Network& net, Index a, Index b) {
    return natural_less(net.nodes()[static_cast<std::size_t>(a)].id, net.nodes()[static_cast<std::size_t>(b)].id);
}

std::vector<std::string> member_ids(const Network& net, std::vector<Index> members) {
    std::sort(members.begin(), members.end(), [&](Index a, Index b) { return id_less(net, a, b); });
    std::vector<std::string> ids;
    for (Index i : members) ids.push_back(net.nodes()[static_cast<std::size_t>(i)].id);
    return ids;
}

bool connected_within(const Network& net, const std::vector<Index>& nodes,
                      const std::vector<std::pair<Index, Index>>& edges) {
    std::vector<Index> label(static_cast<std::size_t>(net.node_count()), -1);
    for (std::size_t c = 0; c < nodes.size(); ++c) label[static_cast<std::size_t>(nodes[c])] = static_cast<Index>(c);
    // union-find over the zone's internal edges
    std::vector<Index> parent(nodes.size());
    for (std::size_t c = 0; c < parent.size(); ++c) parent[c] = static_cast<Index>(c);
    auto find = [&](Index x) {
        while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        return x;
    };
    std::size_t components = nodes.size();
    for (auto [u, v] : edges) {
        Index a = find(label[static_cast<std::size_t>(u)]);
        Index b = find(label[static_cast<std::size_t>(v)]);
        if (a != b) {
            parent[static_cast<std::size_t>(a)] = b;
            --components;
        }
    }
    return components == 1;
}

}  // namespace

SplitResult split_zone(const Network& network, const ZoneMap& zones, const std::string& target,
                       const Vector& p_lf) {
    if (p_lf.size() != network.node_count()) throw InputError("loop injections do not match the node count");
    const std::vector<Index> nodes = zones.nodes_in(target);
    if (nodes.size() < 2) throw InputError("zone '" + target + "' has fewer than 2 nodes and cannot be split");

    std::vector<std::pair<Index, Index>> edges;
    for (Index k = 0; k < network.line_count(); ++k) {
        Index u = network.from_index(k), v = network.to_index(k);
        if (zones.zone(u) == target && zones.zone(v) == target) edges.emplace_back(u, v);
    }
    if (!connected_within(network, nodes, edges)) throw InputError("zone '" + target + "' is not connected");

    SplitResult result;
    result.target_zone = target;
    result.source_zone = target + "_src";
    result.sink_zone = target + "_snk";
    for (const std::string& existing : zones.zones())
        if (existing == result.source_zone || existing == result.sink_zone)
            throw InputError("zone '" + existing + "' already exists");

    double lo = std::numeric_limits<double>::infinity(), hi = -lo, scale = 1.0;
    std::vector<Cluster> clusters;
    std::vector<Index> owner(static_cast<std::size_t>(network.node_count()), -1);
    for (Index i : nodes) {
        result.cluster_features.emplace_back(network.nodes()[static_cast<std::size_t>(i)].id, p_lf(i));
        lo = std::min(lo, p_lf(i));
        hi = std::max(hi, p_lf(i));
        scale = std::max(scale, std::abs(p_lf(i)));
        owner[static_cast<std::size_t>(i)] = static_cast<Index>(clusters.size());
        clusters.push_back(Cluster{{i}, p_lf(i), i});
    }
    result.degenerate = hi - lo <= 1e-9 * scale;
    const double tie = 1e-12 * scale;

    std::vector<bool> alive(clusters.size(), true);
    std::size_t remaining = clusters.size();
    while (remaining > 2) {
        Index best_a = -1, best_b = -1;
        double best = std::numeric_limits<double>::infinity();
        for (auto [u, v] : edges) {
            Index a = owner[static_cast<std::size_t>(u)], b = owner[static_cast<std::size_t>(v)];
            if (a == b) continue;
            // a holds the lower id of the pair
            if (id_less(network, clusters[static_cast<std::size_t>(b)].lowest, clusters[static_cast<std::size_t>(a)].lowest))
                std::swap(a, b);
            const double d = std::abs(clusters[static_cast<std::size_t>(a)].mean() - clusters[static_cast<std::size_t>(b)].mean());
            bool take = false;
            if (best_a < 0 || d < best - tie) {
                take = true;
            } else if (d <= best + tie) {
                const Index la = clusters[static_cast<std::size_t>(a)].lowest, lb = clusters[static_cast<std::size_t>(b)].lowest;
                const Index ba = clusters[static_cast<std::size_t>(best_a)].lowest, bb = clusters[static_cast<std::size_t>(best_b)].lowest;
                take = id_less(network, la, ba) || (la == ba && id_less(network, lb, bb));
            }
            if (take) {
                best = d;
                best_a = a;
                best_b = b;
            }
        }

        Cluster& keep = clusters[static_cast<std::size_t>(best_a)];
        Cluster& gone = clusters[static_cast<std::size_t>(best_b)];
        result.merge_trace.push_back(Merge{member_ids(network, keep.members), member_ids(network, gone.members), best});
        for (Index i : gone.members) {
            keep.members.push_back(i);
            owner[static_cast<std::size_t>(i)] = best_a;
        }
        keep.sum += gone.sum;
        if (id_less(network, gone.lowest, keep.lowest)) keep.lowest = gone.lowest;
        gone.members.clear();
        alive[static_cast<std::size_t>(best_b)] = false;
        --remaining;
    }

    std::vector<const Cluster*> final;
    for (std::size_t c = 0; c < clusters.size(); ++c)
        if (alive[c]) final.push_back(&clusters[c]);
    const Cluster* src = final[0];
    const Cluster* snk = final[1];
    if (snk->mean() > src->mean() || (snk->mean() == src->mean() && id_less(network, snk->lowest, src->lowest)))
        std::swap(src, snk);

    std::vector<std::string> assignment = zones.assignment();
    for (Index i : src->members) assignment[static_cast<std::size_t>(i)] = result.source_zone;
    for (Index i : snk->members) assignment[static_cast<std::size_t>(i)] = result.sink_zone;
    result.new_zone_map = ZoneMap(zones.node_ids(), std::move(assignment));
    return result;
}

}  // namespace zonetrace
