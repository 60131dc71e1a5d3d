#pragma once

// Fixtures, random generators and independent oracles shared by the tests.

#include "zonetrace/dc_powerflow.hpp"
#include "zonetrace/grid.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace zonetrace::testing {

// Four-bus case study: zones A = {1, 3}, B = {2, 4}.
inline Network bialek_network() {
    std::vector<Node> nodes{{"1", "A"}, {"2", "B"}, {"3", "A"}, {"4", "B"}};
    std::vector<Line> lines{{"1", "1", "2", 0.13, {}},
                            {"2", "1", "3", 0.40, {}},
                            {"3", "1", "4", 0.25, {}},
                            {"4", "2", "4", 0.12, {}},
                            {"5", "4", "3", 0.73, {}}};
    return build_network(nodes, lines);
}

inline Scenario bialek_scenario() {
    Scenario s;
    s.label = "fig3";
    s.gen = Vector::Zero(4);
    s.load = Vector::Zero(4);
    s.gen << 394.5, 112.5, 0.0, 0.0;
    s.load << 0.0, 0.0, 304.0, 203.0;
    return s;
}

inline ZoneMap zones_of(const Network& net, std::vector<std::string> labels) {
    std::vector<std::string> ids;
    for (const Node& n : net.nodes()) ids.push_back(n.id);
    return ZoneMap(std::move(ids), std::move(labels));
}

/// Connected network: random spanning tree plus extra lines (parallel lines allowed).
/// With `contiguous`, zones are index blocks whose spanning-tree edges stay
/// inside the block, so every zone is connected.
inline Network random_network(std::mt19937_64& rng, int n_nodes, int n_lines, int n_zones, bool contiguous = false) {
    std::uniform_real_distribution<double> reactance(0.05, 1.0);
    std::uniform_int_distribution<int> zone(0, n_zones - 1);
    std::vector<Node> nodes;
    auto block = [&](int i) { return i * n_zones / n_nodes; };
    for (int i = 0; i < n_nodes; ++i) {
        const int z = contiguous ? block(i) : zone(rng);
        nodes.push_back(Node{std::to_string(i + 1), std::string(1, static_cast<char>('A' + z))});
    }
    std::vector<Line> lines;
    auto add = [&](int a, int b) {
        if (rng() % 2) std::swap(a, b);
        lines.push_back(Line{"L" + std::to_string(lines.size() + 1), nodes[static_cast<std::size_t>(a)].id,
                             nodes[static_cast<std::size_t>(b)].id, reactance(rng), {}});
    };
    for (int i = 1; i < n_nodes; ++i) {
        int lo = 0;
        if (contiguous) {
            lo = i;
            while (lo > 0 && block(lo - 1) == block(i)) --lo;
            if (lo == i) lo = 0;  // first node of a block attaches anywhere
        }
        add(i, std::uniform_int_distribution<int>(lo, i - 1)(rng));
    }
    std::uniform_int_distribution<int> any(0, n_nodes - 1);
    while (static_cast<int>(lines.size()) < n_lines) {
        int a = any(rng), b = any(rng);
        if (a != b) add(a, b);
    }
    return build_network(std::move(nodes), std::move(lines));
}

/// Balanced scenario; some nodes carry both generation and load.
inline Scenario random_scenario(std::mt19937_64& rng, Index n, const std::string& label = "rand") {
    std::uniform_real_distribution<double> mw(0.0, 200.0);
    std::bernoulli_distribution has(0.5);
    Scenario s{label, Vector::Zero(n), Vector::Zero(n)};
    for (Index i = 0; i < n; ++i) {
        if (has(rng)) s.gen(i) = mw(rng);
        if (has(rng)) s.load(i) = mw(rng);
    }
    if (s.gen.sum() <= 0.0) s.gen(0) = 100.0;
    if (s.load.sum() <= 0.0) s.load(n - 1) = 100.0;
    s.load *= s.gen.sum() / s.load.sum();
    s.load(n - 1) += s.gen.sum() - s.load.sum();  // exact balance after scaling
    if (s.load(n - 1) < 0.0) s.load(n - 1) = 0.0;
    return s;
}

/// Acyclic positive flow pattern with a consistent balanced scenario. Line
/// directions follow a random topological order; reactances are unused.
struct AcyclicCase {
    Network network;
    Vector flows;
    Scenario scenario;
};

inline AcyclicCase random_acyclic_case(std::mt19937_64& rng, int n_nodes, int n_lines) {
    std::vector<int> order(static_cast<std::size_t>(n_nodes));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> rank(order.size());
    for (std::size_t r = 0; r < order.size(); ++r) rank[static_cast<std::size_t>(order[r])] = static_cast<int>(r);

    std::vector<Node> nodes;
    for (int i = 0; i < n_nodes; ++i) nodes.push_back(Node{std::to_string(i + 1), "Z"});
    std::vector<Line> lines;
    std::vector<double> f;
    std::uniform_real_distribution<double> mw(1.0, 100.0);
    auto add = [&](int a, int b) {
        if (rank[static_cast<std::size_t>(a)] > rank[static_cast<std::size_t>(b)]) std::swap(a, b);
        lines.push_back(Line{"L" + std::to_string(lines.size() + 1), nodes[static_cast<std::size_t>(a)].id,
                             nodes[static_cast<std::size_t>(b)].id, 1.0, {}});
        f.push_back(mw(rng));
    };
    for (int i = 1; i < n_nodes; ++i) add(i, std::uniform_int_distribution<int>(0, i - 1)(rng));
    std::uniform_int_distribution<int> any(0, n_nodes - 1);
    while (static_cast<int>(lines.size()) < n_lines) {
        int a = any(rng), b = any(rng);
        if (a != b) add(a, b);
    }
    Network net = build_network(nodes, lines);

    Vector flows = Eigen::Map<Vector>(f.data(), static_cast<Index>(f.size()));
    Scenario s{"acyclic", Vector::Zero(n_nodes), Vector::Zero(n_nodes)};
    std::uniform_real_distribution<double> extra(0.0, 30.0);
    std::bernoulli_distribution local(0.3);
    for (Index i = 0; i < net.node_count(); ++i) {
        double net_out = 0.0;
        for (Index k = 0; k < net.line_count(); ++k) {
            if (net.from_index(k) == i) net_out += flows(k);
            if (net.to_index(k) == i) net_out -= flows(k);
        }
        const double both = local(rng) ? extra(rng) : 0.0;
        s.gen(i) = std::max(net_out, 0.0) + both;
        s.load(i) = std::max(-net_out, 0.0) + both;
    }
    return AcyclicCase{std::move(net), std::move(flows), std::move(s)};
}

/// Path-enumeration oracle for the exchange matrices. Every unit of a
/// generator's output is pushed down the flow graph, split at each node in
/// proportion to the node's outgoing lines and local load; whatever a load
/// absorbs is credited to every line of the path it travelled.
/// Returns X[k](i, j) for every line k.
inline std::vector<Matrix> path_oracle(const Network& net, const Vector& flows, const Vector& gen, const Vector& load) {
    const Index n = net.node_count();
    const Index m = net.line_count();
    std::vector<double> through(static_cast<std::size_t>(n), 0.0);
    for (Index i = 0; i < n; ++i) {
        through[static_cast<std::size_t>(i)] = gen(i);
        for (Index k = 0; k < m; ++k)
            if (net.to_index(k) == i) through[static_cast<std::size_t>(i)] += flows(k);
    }
    std::vector<Matrix> x(static_cast<std::size_t>(m), Matrix::Zero(n, n));
    std::vector<Index> path;
    std::function<void(Index, Index, double)> walk = [&](Index source, Index at, double amount) {
        const double p = through[static_cast<std::size_t>(at)];
        if (p <= 0.0 || amount == 0.0) return;
        const double absorbed = amount * load(at) / p;
        for (Index k : path) x[static_cast<std::size_t>(k)](at, source) += absorbed;
        for (Index k = 0; k < m; ++k) {
            if (net.from_index(k) != at || flows(k) <= 0.0) continue;
            path.push_back(k);
            walk(source, net.to_index(k), amount * flows(k) / p);
            path.pop_back();
        }
    };
    for (Index j = 0; j < n; ++j)
        if (gen(j) > 0.0) walk(j, j, gen(j));
    return x;
}

/// Largest |a - b| over `a`, relative to the largest |b| (or 1 if b is zero).
inline double max_relative_error(const Matrix& a, const Matrix& b) {
    const double scale = b.size() == 0 ? 0.0 : b.cwiseAbs().maxCoeff();
    const double diff = a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
    return scale > 0.0 ? diff / scale : diff;
}

}  // namespace zonetrace::testing
