#include "zonetrace/psp.hpp"

#include "zonetrace/error.hpp"

#include <cmath>

namespace zonetrace {

namespace {

// Column holding the single 1 of row k of a G_r / G_t part.
Index endpoint(const Matrix& part, Index k) {
    Index col = 0;
    part.row(k).maxCoeff(&col);
    return col;
}

Matrix checked_inverse(const Matrix& a, const char* name) {
    Eigen::PartialPivLU<Matrix> lu(a);
    Matrix inv = lu.inverse();
    const Index n = a.rows();
    const double residual = n == 0 ? 0.0 : (a * inv - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (!std::isfinite(residual) || residual >= 1e-9)
        throw NumericalError(std::string(name) + " is singular; the flow graph is not acyclic");
    return inv;
}

}  // namespace

Matrix flow_matrix(const IncidenceMatrices& inc, const Vector& flows) {
    if (flows.size() != inc.G.rows()) throw InputError("flow vector does not match the line count");
    if ((flows.array() < 0.0).any()) throw InputError("flow matrix needs nonnegative (oriented) flows");
    return inc.G_r.transpose() * flows.asDiagonal() * inc.G_t;
}

Vector throughflow(const Matrix& F, const Scenario& scenario, double tolerance) {
    if (scenario.gen.size() != F.rows() || scenario.load.size() != F.rows())
        throw InputError("scenario does not match the flow matrix");
    Vector inflow_side = F.colwise().sum().transpose() + scenario.gen;
    Vector outflow_side = F.rowwise().sum() + scenario.load;
    const double gap = F.rows() == 0 ? 0.0 : (inflow_side - outflow_side).cwiseAbs().maxCoeff();
    if (!(gap <= tolerance))
        throw InputError("throughflow identities disagree by " + std::to_string(gap) + " MW in scenario '" +
                         scenario.label + "'; flows and injections are inconsistent");
    return inflow_side;
}

DistributionMatrices distribution_matrices(const Matrix& F, const Vector& p, double epsilon) {
    const Index n = F.rows();
    Vector inv_p = Vector::Zero(n);
    for (Index i = 0; i < n; ++i)
        if (p(i) > epsilon) inv_p(i) = 1.0 / p(i);

    DistributionMatrices d;
    d.C_u = inv_p.asDiagonal() * F;
    d.C_d = F * inv_p.asDiagonal();
    d.A_u = Matrix::Identity(n, n) - d.C_u.transpose();
    d.A_d = Matrix::Identity(n, n) - d.C_d;
    d.A_u_inv = checked_inverse(d.A_u, "A_u");
    d.A_d_inv = checked_inverse(d.A_d, "A_d");
    return d;
}

DistributionFactors gdf_ldf(const IncidenceMatrices& inc, const Vector& flows, const Vector& p,
                            const DistributionMatrices& dist, double epsilon) {
    const Index m = inc.G.rows();
    const Index n = inc.G.cols();
    DistributionFactors out{Matrix::Zero(m, n), Matrix::Zero(m, n)};
    for (Index k = 0; k < m; ++k) {
        if (flows(k) <= epsilon) continue;
        const Index from = endpoint(inc.G_r, k);
        const Index to = endpoint(inc.G_t, k);
        if (p(from) > epsilon) out.gdf.row(k) = (flows(k) / p(from)) * dist.A_u_inv.row(from);
        if (p(to) > epsilon) out.ldf.row(k) = (flows(k) / p(to)) * dist.A_d_inv.row(to);
    }
    return out;
}

Attribution g2t_l2t(const DistributionFactors& factors, const Scenario& scenario) {
    return Attribution{factors.gdf * scenario.gen.asDiagonal(), factors.ldf * scenario.load.asDiagonal()};
}

ExchangeMatrix exchange_matrix(Index line, const Attribution& attribution, const Vector& flows,
                               double epsilon) {
    const Index n = attribution.g2t.cols();
    ExchangeMatrix x{line, Matrix::Zero(n, n)};
    if (flows(line) <= epsilon) return x;
    // X_ij = L2T_ki * G2T_kj / f_k
    x.X = attribution.l2t.row(line).transpose() * attribution.g2t.row(line) / flows(line);
    return x;
}

TraceResult trace(const OrientedFlows& oriented, const Scenario& scenario, double epsilon) {
    TraceResult t;
    t.incidence = incidence(oriented.network);
    t.F = flow_matrix(t.incidence, oriented.flows);
    t.p = throughflow(t.F, scenario);
    t.dist = distribution_matrices(t.F, t.p, epsilon);
    t.factors = gdf_ldf(t.incidence, oriented.flows, t.p, t.dist, epsilon);
    t.attribution = g2t_l2t(t.factors, scenario);
    return t;
}

}  // namespace zonetrace
