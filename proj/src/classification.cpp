#include "zonetrace/classification.hpp"

#include "zonetrace/error.hpp"

#include <algorithm>
#include <cmath>

namespace zonetrace {

std::string_view to_string(Category category) {
    switch (category) {
    case Category::Internal:
        return "IN";
    case Category::ImportExport:
        return "IE";
    case Category::Transit:
        return "TR";
    case Category::LoopFlow:
        return "LF";
    }
    return "?";
}

std::string_view to_string(RankingMode mode) {
    return mode == RankingMode::Absolute ? "absolute" : "relative";
}

namespace {

bool in_pair(std::string_view zone, const ComponentZones& z) { return zone == z.load || zone == z.gen; }

}  // namespace

bool is_internal(const ComponentZones& z) {
    return z.load == z.gen && z.from == z.load && z.to == z.load;
}

bool is_import_export(const ComponentZones& z) {
    return z.load != z.gen && in_pair(z.from, z) && in_pair(z.to, z);
}

bool is_transit(const ComponentZones& z) {
    return z.load != z.gen && (!in_pair(z.from, z) || !in_pair(z.to, z));
}

// Some endpoint of the line lies outside the zone of an intra-zonal transaction.
bool is_loop_flow(const ComponentZones& z) {
    return z.load == z.gen && (z.from != z.load || z.to != z.load);
}

Category classify(const ComponentZones& z) {
    if (is_internal(z)) return Category::Internal;
    if (is_loop_flow(z)) return Category::LoopFlow;
    if (is_import_export(z)) return Category::ImportExport;
    return Category::Transit;
}

Category classify(Index load, Index gen, Index line, const Network& network, const ZoneMap& zones) {
    return classify(ComponentZones{zones.zone(load), zones.zone(gen), zones.zone(network.from_index(line)),
                                   zones.zone(network.to_index(line))});
}

double DecompositionTable::total_loop_flow() const {
    double total = 0.0;
    for (const auto& row : rows) total += std::abs(row.lf_mw);
    return total;
}

Vector DecompositionTable::loop_flow_vector() const {
    Vector lf(static_cast<Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) lf(static_cast<Index>(k)) = rows[k].lf_mw;
    return lf;
}

LineDecomposition decompose_line(const ExchangeMatrix& exchange, const Network& oriented,
                                 const ZoneMap& zones, int orientation) {
    const Index k = exchange.line;
    LineDecomposition row;
    row.line_id = oriented.lines()[static_cast<std::size_t>(k)].id;
    const double sign = orientation < 0 ? -1.0 : 1.0;
    const Index n = exchange.X.rows();
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            const double mw = exchange.X(i, j);
            if (mw == 0.0) continue;
            const double signed_mw = sign * mw;
            switch (classify(i, j, k, oriented, zones)) {
            case Category::Internal:
                row.in_mw += signed_mw;
                break;
            case Category::ImportExport:
                row.ie_mw += signed_mw;
                break;
            case Category::Transit:
                row.tr_mw += signed_mw;
                break;
            case Category::LoopFlow:
                row.lf_mw += signed_mw;
                row.lf_by_zone[zones.zone(i)] += signed_mw;
                break;
            }
        }
    }
    return row;
}

DecompositionTable decompose(const OrientedFlows& oriented, const TraceResult& trace, const ZoneMap& zones,
                             double epsilon) {
    DecompositionTable table;
    const Index m = oriented.network.line_count();
    table.rows.reserve(static_cast<std::size_t>(m));
    for (Index k = 0; k < m; ++k) {
        const ExchangeMatrix x = exchange_matrix(k, trace.attribution, oriented.flows, epsilon);
        table.rows.push_back(
            decompose_line(x, oriented.network, zones, oriented.orientation[static_cast<std::size_t>(k)]));
    }
    return table;
}

Vector loop_injections(const IncidenceMatrices& inc, const Vector& lf) {
    if (lf.size() != inc.G.rows()) throw InputError("loop-flow vector does not match the line count");
    return inc.G.transpose() * lf;
}

std::vector<ZoneScore> rank_zones(const DecompositionTable& table, const ZoneMap& zones,
                                  const Network& network, RankingMode mode) {
    if (static_cast<Index>(table.rows.size()) != network.line_count())
        throw InputError("decomposition table does not match the network");
    if (mode == RankingMode::Relative &&
        std::none_of(network.lines().begin(), network.lines().end(),
                     [](const Line& l) { return l.capacity.has_value(); }))
        throw InputError("relative ranking needs line capacities");

    std::vector<ZoneScore> ranking;
    for (const std::string& zone : zones.zones()) ranking.push_back(ZoneScore{zone, 0.0});
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
        const Line& line = network.lines()[k];
        double scale = 1.0;
        if (mode == RankingMode::Relative) {
            if (!line.capacity) continue;
            scale = 1.0 / *line.capacity;
        }
        for (const auto& [zone, mw] : table.rows[k].lf_by_zone) {
            auto it = std::find_if(ranking.begin(), ranking.end(), [&](const ZoneScore& s) { return s.zone == zone; });
            if (it == ranking.end()) throw InputError("decomposition names unknown zone '" + zone + "'");
            it->lf_total_mw += std::abs(mw) * scale;
        }
    }
    std::stable_sort(ranking.begin(), ranking.end(), [](const ZoneScore& a, const ZoneScore& b) {
        if (a.lf_total_mw != b.lf_total_mw) return a.lf_total_mw > b.lf_total_mw;
        return natural_less(a.zone, b.zone);
    });
    return ranking;
}

}  // namespace zonetrace
