#pragma once

#include "zonetrace/grid.hpp"
#include "zonetrace/psp.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace zonetrace {

enum class Category { Internal, ImportExport, Transit, LoopFlow };

std::string_view to_string(Category category);

/// Zones of the four parties to one exchange component.
struct ComponentZones {
    std::string_view load;
    std::string_view gen;
    std::string_view from;
    std::string_view to;
};

bool is_internal(const ComponentZones& z);
bool is_import_export(const ComponentZones& z);
bool is_transit(const ComponentZones& z);
bool is_loop_flow(const ComponentZones& z);

Category classify(const ComponentZones& z);

/// Category of the exchange from generator node `gen` to load node `load`
/// over `line` of `network`, under `zones`.
Category classify(Index load, Index gen, Index line, const Network& network, const ZoneMap& zones);

/// One row of a decomposition table. Values are signed along the line's
/// declared from->to direction, so a single-scenario row whose flow runs
/// against the declared direction is all <= 0.
struct LineDecomposition {
    std::string line_id;
    double in_mw = 0.0;
    double ie_mw = 0.0;
    double tr_mw = 0.0;
    double lf_mw = 0.0;
    std::map<std::string, double> lf_by_zone;  // culprit zone -> MW

    double total() const { return in_mw + ie_mw + tr_mw + lf_mw; }
};

struct DecompositionTable {
    std::vector<LineDecomposition> rows;

    /// Sum of |LF| over all lines.
    double total_loop_flow() const;
    /// Signed per-line LF (M-vector).
    Vector loop_flow_vector() const;
};

/// Splits the exchange components of one line into categories. `orientation`
/// is +1 when `oriented` keeps the declared direction of the line, -1 otherwise.
LineDecomposition decompose_line(const ExchangeMatrix& exchange, const Network& oriented,
                                 const ZoneMap& zones, int orientation = 1);

DecompositionTable decompose(const OrientedFlows& oriented, const TraceResult& trace,
                             const ZoneMap& zones, double epsilon = kDefaultEpsilon);

/// p_lf = G^T f_lf: positive entries are net loop-flow sources.
Vector loop_injections(const IncidenceMatrices& inc, const Vector& lf);

enum class RankingMode { Absolute, Relative };

std::string_view to_string(RankingMode mode);

struct ZoneScore {
    std::string zone;
    double lf_total_mw = 0.0;
};

/// Zones ordered by descending loop-flow burden of their internal
/// transactions, ties broken by zone id. Relative mode divides each line's
/// contribution by its capacity and skips lines without one; it throws
/// InputError when no line has a capacity.
std::vector<ZoneScore> rank_zones(const DecompositionTable& table, const ZoneMap& zones,
                                  const Network& network, RankingMode mode);

}  // namespace zonetrace
