#pragma once

// Proportional-sharing flow tracing. Every node mixes its inflows perfectly,
// so the origin mix of each outgoing line equals the node's inflow mix
// (upstream) and the destination mix of each incoming line equals the
// node's outflow mix (downstream).

#include "zonetrace/dc_powerflow.hpp"
#include "zonetrace/grid.hpp"

namespace zonetrace {

/// F = G_r^T diag(f) G_t. Parallel lines accumulate into one entry.
/// Throws InputError on a negative flow.
Matrix flow_matrix(const IncidenceMatrices& inc, const Vector& flows);

/// Nodal throughflow p_i = sum_j F_ji + p^g_i. The outflow identity
/// sum_j F_ij + p^l_i is checked against it; a disagreement above
/// `tolerance` MW throws InputError.
Vector throughflow(const Matrix& F, const Scenario& scenario, double tolerance = 1e-6);

struct DistributionMatrices {
    Matrix C_u;
    Matrix C_d;
    Matrix A_u;
    Matrix A_d;
    Matrix A_u_inv;
    Matrix A_d_inv;
};

/// Nodes with p_i <= epsilon contribute all-zero shares.
/// Throws NumericalError when an inverse fails its residual check.
DistributionMatrices distribution_matrices(const Matrix& F, const Vector& p,
                                           double epsilon = kDefaultEpsilon);

struct DistributionFactors {
    Matrix gdf;  // M x N
    Matrix ldf;  // M x N
};

/// Per-line factors: GDF_kj = f_k / p_from(k) * [A_u^-1]_{from(k), j} and
/// LDF_ki = f_k / p_to(k) * [A_d^-1]_{to(k), i}.
DistributionFactors gdf_ldf(const IncidenceMatrices& inc, const Vector& flows, const Vector& p,
                            const DistributionMatrices& dist, double epsilon = kDefaultEpsilon);

struct Attribution {
    Matrix g2t;  // MW of line k supplied by generator j
    Matrix l2t;  // MW of line k delivered to load i
};

Attribution g2t_l2t(const DistributionFactors& factors, const Scenario& scenario);

/// X_ij = MW that load node i receives from generator node j over one line.
struct ExchangeMatrix {
    Index line = 0;
    Matrix X;
};

ExchangeMatrix exchange_matrix(Index line, const Attribution& attribution, const Vector& flows,
                               double epsilon = kDefaultEpsilon);

struct TraceResult {
    IncidenceMatrices incidence;
    Matrix F;
    Vector p;
    DistributionMatrices dist;
    DistributionFactors factors;
    Attribution attribution;
};

/// Full upstream/downstream trace of one oriented flow pattern.
TraceResult trace(const OrientedFlows& oriented, const Scenario& scenario,
                  double epsilon = kDefaultEpsilon);

}  // namespace zonetrace
