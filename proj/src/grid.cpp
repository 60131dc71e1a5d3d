#include "zonetrace/grid.hpp"

#include "zonetrace/error.hpp"

#include <algorithm>
#include <charconv>
#include <queue>
#include <set>

namespace zonetrace {

namespace {

std::optional<long long> as_integer(std::string_view s) {
    long long value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

bool is_connected(Index n, const std::vector<Index>& from, const std::vector<Index>& to) {
    if (n == 0) return false;
    std::vector<std::vector<Index>> adj(static_cast<std::size_t>(n));
    for (std::size_t k = 0; k < from.size(); ++k) {
        adj[static_cast<std::size_t>(from[k])].push_back(to[k]);
        adj[static_cast<std::size_t>(to[k])].push_back(from[k]);
    }
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::queue<Index> queue;
    queue.push(0);
    seen[0] = true;
    Index reached = 1;
    while (!queue.empty()) {
        Index u = queue.front();
        queue.pop();
        for (Index v : adj[static_cast<std::size_t>(u)]) {
            if (!seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = true;
                ++reached;
                queue.push(v);
            }
        }
    }
    return reached == n;
}

}  // namespace

bool natural_less(std::string_view a, std::string_view b) {
    auto ia = as_integer(a);
    auto ib = as_integer(b);
    if (ia && ib) {
        if (*ia != *ib) return *ia < *ib;
        return a < b;
    }
    return a < b;
}

// ---------------------------------------------------------------------------
// ZoneMap
// ---------------------------------------------------------------------------

ZoneMap::ZoneMap(std::vector<std::string> node_ids, std::vector<std::string> zones)
    : node_ids_(std::move(node_ids)), zones_(std::move(zones)) {
    if (node_ids_.size() != zones_.size())
        throw InputError("zone map: " + std::to_string(zones_.size()) + " zones for " +
                         std::to_string(node_ids_.size()) + " nodes");
    for (std::size_t i = 0; i < zones_.size(); ++i) {
        if (zones_[i].empty()) throw InputError("zone map: node '" + node_ids_[i] + "' has no zone");
    }
}

const std::string& ZoneMap::zone_of(std::string_view node_id) const {
    auto it = std::find(node_ids_.begin(), node_ids_.end(), node_id);
    if (it == node_ids_.end()) throw InputError("zone map: unknown node '" + std::string(node_id) + "'");
    return zones_[static_cast<std::size_t>(it - node_ids_.begin())];
}

std::vector<std::string> ZoneMap::zones() const {
    std::vector<std::string> out(zones_.begin(), zones_.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return natural_less(a, b); });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Index> ZoneMap::nodes_in(std::string_view zone) const {
    std::vector<Index> out;
    for (std::size_t i = 0; i < zones_.size(); ++i)
        if (zones_[i] == zone) out.push_back(static_cast<Index>(i));
    return out;
}

// ---------------------------------------------------------------------------
// Network
// ---------------------------------------------------------------------------

Index Network::node_index(std::string_view id) const {
    auto it = node_lookup_.find(std::string(id));
    if (it == node_lookup_.end()) throw InputError("unknown node '" + std::string(id) + "'");
    return it->second;
}

Index Network::line_index(std::string_view id) const {
    auto it = line_lookup_.find(std::string(id));
    if (it == line_lookup_.end()) throw InputError("unknown line '" + std::string(id) + "'");
    return it->second;
}

Network Network::with_zone_map(ZoneMap zones) const {
    if (zones.node_ids().size() != nodes_.size())
        throw InputError("zone map does not cover the network's nodes");
    Network copy = *this;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (zones.node_ids()[i] != nodes_[i].id)
            throw InputError("zone map node order differs from network at '" + nodes_[i].id + "'");
        copy.nodes_[i].zone = zones.assignment()[i];
    }
    copy.zone_map_ = std::move(zones);
    return copy;
}

Network build_network(std::vector<Node> nodes, std::vector<Line> lines, std::optional<ZoneMap> zones) {
    Network net;
    if (nodes.empty()) throw InputError("network has no nodes");

    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].id.empty()) throw InputError("node " + std::to_string(i) + " has an empty id");
        if (!net.node_lookup_.emplace(nodes[i].id, static_cast<Index>(i)).second)
            throw InputError("duplicate node id '" + nodes[i].id + "'");
    }
    for (std::size_t k = 0; k < lines.size(); ++k) {
        const Line& line = lines[k];
        if (!net.line_lookup_.emplace(line.id, static_cast<Index>(k)).second)
            throw InputError("duplicate line id '" + line.id + "'");
        auto f = net.node_lookup_.find(line.from);
        auto t = net.node_lookup_.find(line.to);
        if (f == net.node_lookup_.end() || t == net.node_lookup_.end())
            throw InputError("line '" + line.id + "' has a dangling endpoint");
        if (f->second == t->second) throw InputError("line '" + line.id + "' is a self-loop");
        if (!(line.reactance > 0.0))
            throw InputError("line '" + line.id + "' needs a positive reactance");
        if (line.capacity && !(*line.capacity > 0.0))
            throw InputError("line '" + line.id + "' has a non-positive capacity");
        net.from_.push_back(f->second);
        net.to_.push_back(t->second);
    }
    if (nodes.size() < 2 || !is_connected(static_cast<Index>(nodes.size()), net.from_, net.to_))
        throw InputError("network is disconnected or degenerate");

    if (zones) {
        if (zones->node_ids().size() != nodes.size())
            throw InputError("zone map does not cover the network's nodes");
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (zones->node_ids()[i] != nodes[i].id)
                throw InputError("zone map node order differs from network at '" + nodes[i].id + "'");
            nodes[i].zone = zones->assignment()[i];
        }
        net.zone_map_ = std::move(*zones);
    } else {
        std::vector<std::string> ids, labels;
        for (const Node& n : nodes) {
            ids.push_back(n.id);
            labels.push_back(n.zone);
        }
        net.zone_map_ = ZoneMap(std::move(ids), std::move(labels));
    }
    net.nodes_ = std::move(nodes);
    net.lines_ = std::move(lines);
    return net;
}

IncidenceMatrices incidence(const Network& network) {
    const Index m = network.line_count();
    const Index n = network.node_count();
    IncidenceMatrices inc{Matrix::Zero(m, n), Matrix::Zero(m, n), Matrix::Zero(m, n)};
    for (Index k = 0; k < m; ++k) {
        inc.G_r(k, network.from_index(k)) = 1.0;
        inc.G_t(k, network.to_index(k)) = 1.0;
    }
    inc.G = inc.G_r - inc.G_t;
    return inc;
}

OrientedFlows orient_by_flow(const Network& network, const Vector& flows, double epsilon) {
    const Index m = network.line_count();
    const Index n = network.node_count();
    if (flows.size() != m)
        throw InputError("expected " + std::to_string(m) + " line flows, got " + std::to_string(flows.size()));
    if (!flows.allFinite()) throw InputError("line flows contain non-finite values");

    std::vector<Line> lines = network.lines();
    Vector oriented = flows;
    std::vector<int> orientation(static_cast<std::size_t>(m), 1);
    for (Index k = 0; k < m; ++k) {
        if (flows(k) < -epsilon) {
            std::swap(lines[static_cast<std::size_t>(k)].from, lines[static_cast<std::size_t>(k)].to);
            oriented(k) = -flows(k);
            orientation[static_cast<std::size_t>(k)] = -1;
        } else if (flows(k) <= epsilon) {
            oriented(k) = 0.0;
        }
    }

    // Kahn's algorithm over the strictly positive flows.
    std::vector<std::vector<Index>> out(static_cast<std::size_t>(n));
    std::vector<Index> indegree(static_cast<std::size_t>(n), 0);
    for (Index k = 0; k < m; ++k) {
        if (oriented(k) <= 0.0) continue;
        const Line& line = lines[static_cast<std::size_t>(k)];
        Index u = network.node_index(line.from);
        Index v = network.node_index(line.to);
        out[static_cast<std::size_t>(u)].push_back(v);
        ++indegree[static_cast<std::size_t>(v)];
    }
    std::vector<Index> order;
    std::vector<Index> ready;
    for (Index i = n - 1; i >= 0; --i)
        if (indegree[static_cast<std::size_t>(i)] == 0) ready.push_back(i);
    while (!ready.empty()) {
        Index u = ready.back();
        ready.pop_back();
        order.push_back(u);
        for (Index v : out[static_cast<std::size_t>(u)])
            if (--indegree[static_cast<std::size_t>(v)] == 0) ready.push_back(v);
    }
    if (static_cast<Index>(order.size()) != n)
        throw InputError("line flows contain a directed cycle; they do not come from a DC solution");

    return OrientedFlows{build_network(network.nodes(), std::move(lines), network.zone_map()),
                         std::move(oriented), std::move(orientation), std::move(order)};
}

}  // namespace zonetrace
