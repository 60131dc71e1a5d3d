#include "zonetrace/dc_powerflow.hpp"

#include "zonetrace/error.hpp"

#include <cmath>

namespace zonetrace {

void validate_scenario(const Network& network, const Scenario& scenario) {
    const Index n = network.node_count();
    if (scenario.gen.size() != n || scenario.load.size() != n)
        throw InputError("scenario '" + scenario.label + "' does not match the network's " +
                         std::to_string(n) + " nodes");
    if (!scenario.gen.allFinite() || !scenario.load.allFinite())
        throw InputError("scenario '" + scenario.label + "' has non-finite injections");
    if ((scenario.gen.array() < 0.0).any() || (scenario.load.array() < 0.0).any())
        throw InputError("scenario '" + scenario.label + "' has negative generation or load");
    const double mismatch = scenario.gen.sum() - scenario.load.sum();
    if (std::abs(mismatch) > kBalanceTolerance)
        throw InputError("scenario '" + scenario.label + "' is unbalanced by " + std::to_string(mismatch) +
                         " MW");
}

FlowSolution solve_dc(const Network& network, const Scenario& scenario,
                      const std::optional<std::string>& slack) {
    validate_scenario(network, scenario);
    const Index n = network.node_count();
    const Index m = network.line_count();
    const Index s = slack ? network.node_index(*slack) : 0;

    // B = G^T diag(1/x) G
    const IncidenceMatrices inc = incidence(network);
    Vector susceptance(m);
    for (Index k = 0; k < m; ++k) susceptance(k) = 1.0 / network.lines()[static_cast<std::size_t>(k)].reactance;
    const Matrix B = inc.G.transpose() * susceptance.asDiagonal() * inc.G;
    const Vector injection = scenario.gen - scenario.load;

    // Drop the slack row and column.
    std::vector<Index> keep;
    for (Index i = 0; i < n; ++i)
        if (i != s) keep.push_back(i);
    const Index r = n - 1;
    Matrix reduced(r, r);
    Vector rhs(r);
    for (Index a = 0; a < r; ++a) {
        rhs(a) = injection(keep[static_cast<std::size_t>(a)]);
        for (Index b = 0; b < r; ++b) reduced(a, b) = B(keep[static_cast<std::size_t>(a)], keep[static_cast<std::size_t>(b)]);
    }

    Eigen::FullPivLU<Matrix> lu(reduced);
    if (!lu.isInvertible()) throw NumericalError("susceptance matrix is singular");
    const Vector theta_reduced = lu.solve(rhs);

    FlowSolution sol;
    sol.slack = network.nodes()[static_cast<std::size_t>(s)].id;
    sol.angles = Vector::Zero(n);
    for (Index a = 0; a < r; ++a) sol.angles(keep[static_cast<std::size_t>(a)]) = theta_reduced(a);
    sol.flows = susceptance.asDiagonal() * (inc.G * sol.angles);

    const double residual = (inc.G.transpose() * sol.flows - injection).cwiseAbs().maxCoeff();
    if (!(residual < kBalanceTolerance))
        throw NumericalError("DC solution violates nodal balance by " + std::to_string(residual) + " MW");
    return sol;
}

}  // namespace zonetrace
