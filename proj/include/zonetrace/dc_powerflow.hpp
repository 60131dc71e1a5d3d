#pragma once

#include "zonetrace/grid.hpp"

#include <optional>
#include <string>

namespace zonetrace {

/// Nodal generation and load for one operating point, both >= 0 MW.
struct Scenario {
    std::string label;
    Vector gen;
    Vector load;
};

inline constexpr double kBalanceTolerance = 1e-6;  // MW

/// Throws InputError on wrong sizes, negative entries or a generation/load
/// mismatch above kBalanceTolerance.
void validate_scenario(const Network& network, const Scenario& scenario);

struct FlowSolution {
    Vector flows;    // MW along each line's declared direction
    Vector angles;   // bus angles, slack fixed at 0
    std::string slack;
};

/// Lossless DC load flow. The slack defaults to the first node.
FlowSolution solve_dc(const Network& network, const Scenario& scenario,
                      const std::optional<std::string>& slack = std::nullopt);

}  // namespace zonetrace
