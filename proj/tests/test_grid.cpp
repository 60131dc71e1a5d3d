#include "support.hpp"
#include "zonetrace/error.hpp"
#include "zonetrace/grid.hpp"

#include <gtest/gtest.h>

using namespace zonetrace;
using namespace zonetrace::testing;

TEST(BuildNetwork, CaseStudyIsValid) {
    const Network net = bialek_network();
    EXPECT_EQ(net.node_count(), 4);
    EXPECT_EQ(net.line_count(), 5);
    EXPECT_EQ(net.zone_map().zone_of("1"), "A");
    EXPECT_EQ(net.zone_map().zone_of("3"), "A");
    EXPECT_EQ(net.zone_map().zone_of("4"), "B");
    EXPECT_EQ(net.zone_map().zones(), (std::vector<std::string>{"A", "B"}));
    EXPECT_EQ(net.from_index(4), 3);
    EXPECT_EQ(net.to_index(4), 2);
}

TEST(BuildNetwork, RejectsDegenerateInput) {
    EXPECT_THROW(build_network({{"1", "A"}}, {}), InputError);
    EXPECT_THROW(build_network({}, {}), InputError);
}

TEST(BuildNetwork, RejectsSelfLoop) {
    EXPECT_THROW(build_network({{"1", "A"}, {"2", "A"}}, {{"a", "1", "1", 0.1, {}}, {"b", "1", "2", 0.1, {}}}),
                 InputError);
}

TEST(BuildNetwork, RejectsBadInput) {
    const std::vector<Node> two{{"1", "A"}, {"2", "A"}};
    EXPECT_THROW(build_network({{"1", "A"}, {"1", "B"}}, {{"a", "1", "1", 0.1, {}}}), InputError);
    EXPECT_THROW(build_network(two, {{"a", "1", "9", 0.1, {}}}), InputError);
    EXPECT_THROW(build_network(two, {{"a", "1", "2", 0.0, {}}}), InputError);
    EXPECT_THROW(build_network(two, {{"a", "1", "2", 0.1, {}}, {"a", "2", "1", 0.1, {}}}), InputError);
    EXPECT_THROW(build_network(two, {{"a", "1", "2", 0.1, -5.0}}), InputError);
    EXPECT_THROW(build_network({{"1", "A"}, {"2", ""}}, {{"a", "1", "2", 0.1, {}}}), InputError);
    // disconnected
    EXPECT_THROW(build_network({{"1", "A"}, {"2", "A"}, {"3", "A"}}, {{"a", "1", "2", 0.1, {}}}), InputError);
}

TEST(BuildNetwork, ExplicitZoneMapOverridesNodes) {
    const Network base = bialek_network();
    const Network net = base.with_zone_map(zones_of(base, {"X", "Y", "Y", "X"}));
    EXPECT_EQ(net.nodes()[2].zone, "Y");
    EXPECT_EQ(net.zone_map().nodes_in("X"), (std::vector<Index>{0, 3}));
}

TEST(NaturalLess, OrdersIntegersNumerically) {
    EXPECT_TRUE(natural_less("2", "10"));
    EXPECT_FALSE(natural_less("10", "2"));
    EXPECT_TRUE(natural_less("A", "B"));
    EXPECT_TRUE(natural_less("A_snk", "A_src"));
}

TEST(Incidence, TwoNodes) {
    const Network net = build_network({{"1", "A"}, {"2", "A"}}, {{"a", "1", "2", 0.1, {}}});
    const IncidenceMatrices inc = incidence(net);
    EXPECT_EQ(inc.G, (Matrix(1, 2) << 1, -1).finished());
    EXPECT_EQ(inc.G_r, (Matrix(1, 2) << 1, 0).finished());
    EXPECT_EQ(inc.G_t, (Matrix(1, 2) << 0, 1).finished());
}

TEST(Incidence, CaseStudyTopology) {
    const IncidenceMatrices inc = incidence(bialek_network());
    Matrix expected(5, 4);
    expected << 1, -1, 0, 0,  //
        1, 0, -1, 0,          //
        1, 0, 0, -1,          //
        0, 1, 0, -1,          //
        0, 0, -1, 1;
    EXPECT_EQ(inc.G, expected);
}

TEST(Incidence, PropertiesOnRandomNetworks) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 15);
        const Network net = random_network(rng, n, n - 1 + static_cast<int>(rng() % 10), 3);
        const IncidenceMatrices inc = incidence(net);
        EXPECT_EQ(inc.G, inc.G_r - inc.G_t);
        EXPECT_EQ(inc.G * Vector::Ones(n), Vector::Zero(net.line_count()));
        EXPECT_EQ(inc.G_r.rowwise().sum(), Vector::Ones(net.line_count()));
        EXPECT_EQ(inc.G_t.rowwise().sum(), Vector::Ones(net.line_count()));
        EXPECT_TRUE((inc.G_r.array() >= 0).all() && (inc.G_t.array() >= 0).all());
    }
}

TEST(OrientByFlow, FlipsNegativeFlows) {
    const Network net = build_network({{"1", "A"}, {"2", "A"}}, {{"a", "1", "2", 0.1, {}}});
    const OrientedFlows o = orient_by_flow(net, (Vector(1) << -50.0).finished());
    EXPECT_EQ(o.flows(0), 50.0);
    EXPECT_EQ(o.orientation[0], -1);
    EXPECT_EQ(o.network.lines()[0].from, "2");
    EXPECT_EQ(o.network.lines()[0].to, "1");
}

TEST(OrientByFlow, ZeroAndPositiveFlowsKeepOrientation) {
    const Network net = build_network({{"1", "A"}, {"2", "A"}}, {{"a", "1", "2", 0.1, {}}});
    OrientedFlows o = orient_by_flow(net, (Vector(1) << 0.0).finished());
    EXPECT_EQ(o.flows(0), 0.0);
    EXPECT_EQ(o.orientation[0], 1);
    o = orient_by_flow(net, (Vector(1) << -1e-10).finished());
    EXPECT_EQ(o.flows(0), 0.0);
    EXPECT_EQ(o.network.lines()[0].from, "1");

    const Network case_study = bialek_network();
    const Vector f = (Vector(5) << 59.5, 221.5, 113.5, 172.0, 82.5).finished();
    o = orient_by_flow(case_study, f);
    EXPECT_EQ(o.flows, f);
    EXPECT_EQ(o.orientation, (std::vector<int>(5, 1)));
    EXPECT_EQ(o.topological_order.front(), 0);
}

TEST(OrientByFlow, RejectsCycles) {
    const Network tri = build_network({{"1", "A"}, {"2", "A"}, {"3", "A"}},
                                      {{"a", "1", "2", 0.1, {}}, {"b", "2", "3", 0.1, {}}, {"c", "3", "1", 0.1, {}}});
    EXPECT_THROW(orient_by_flow(tri, (Vector(3) << 10.0, 10.0, 10.0).finished()), InputError);
    EXPECT_NO_THROW(orient_by_flow(tri, (Vector(3) << 10.0, 10.0, -10.0).finished()));
    EXPECT_THROW(orient_by_flow(tri, (Vector(2) << 1.0, 1.0).finished()), InputError);
}
