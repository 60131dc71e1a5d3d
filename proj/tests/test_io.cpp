#include "support.hpp"
#include "zonetrace/error.hpp"
#include "zonetrace/io.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace zonetrace;
using namespace zonetrace::testing;
using zonetrace::io::json;

TEST(NetworkJson, ParsesIdsAndCapacity) {
    const Network net = io::parse_network(json::parse(R"({
        "nodes": [{"id": 1, "zone": "A"}, {"id": "b", "zone": 7}],
        "lines": [{"id": "L", "from": 1, "to": "b", "reactance": 0.2, "capacity": 400}]
    })"));
    EXPECT_EQ(net.nodes()[0].id, "1");
    EXPECT_EQ(net.nodes()[1].zone, "7");
    EXPECT_EQ(net.lines()[0].capacity.value(), 400.0);
}

TEST(NetworkJson, SchemaErrors) {
    EXPECT_THROW(io::parse_network(json::parse(R"({"nodes": []})")), InputError);
    EXPECT_THROW(io::parse_network(json::parse(R"({"nodes": [{"id": 1}], "lines": []})")), InputError);
    EXPECT_THROW(io::parse_network(json::parse(
                     R"({"nodes": [{"id": 1, "zone": "A"}, {"id": 2, "zone": "A"}],
                         "lines": [{"id": 1, "from": 1, "to": 2}]})")),
                 InputError);
    EXPECT_THROW(io::parse_network(json::parse(
                     R"({"nodes": [{"id": 1.5, "zone": "A"}, {"id": 2, "zone": "A"}],
                         "lines": [{"id": 1, "from": 1, "to": 2, "reactance": 0.1}]})")),
                 InputError);
    EXPECT_THROW(io::read_network("/nonexistent/network.json"), InputError);
}

TEST(ZoneMapJson, RoundTrip) {
    const Network net = bialek_network();
    const ZoneMap zones = zones_of(net, {"X", "Y", "Z", "Y"});
    EXPECT_EQ(io::parse_zone_map(io::zone_map_to_json(zones), net), zones);
    EXPECT_THROW(io::parse_zone_map(json::parse(R"({"nodes": [{"id": 1, "zone": "A"}]})"), net), InputError);
}

TEST(Scenarios, JsonAndCsvAgree) {
    const Network net = bialek_network();
    const auto from_json = io::parse_scenarios_json(json::parse(R"({"scenarios": [
        {"label": "s", "injections": [{"node": 1, "gen": 394.5}, {"node": 2, "gen": 112.5},
                                       {"node": 3, "load": 304}, {"node": 4, "load": 203}]}]})"),
                                                    net);
    std::istringstream csv("scenario,node_id,gen_mw,load_mw\ns,1,394.5,0\ns,2,112.5,0\ns,3,0,304\ns,4,0,203\n");
    const auto from_csv = io::parse_scenarios_csv(csv, net);
    ASSERT_EQ(from_json.size(), 1u);
    ASSERT_EQ(from_csv.size(), 1u);
    EXPECT_EQ(from_json[0].gen, from_csv[0].gen);
    EXPECT_EQ(from_json[0].load, from_csv[0].load);
    EXPECT_EQ(from_json[0].gen, bialek_scenario().gen);
}

TEST(Scenarios, Errors) {
    const Network net = bialek_network();
    std::istringstream bad_header("a,b\n");
    EXPECT_THROW(io::parse_scenarios_csv(bad_header, net), InputError);
    std::istringstream bad_node("scenario,node_id,gen_mw,load_mw\ns,9,1,0\n");
    EXPECT_THROW(io::parse_scenarios_csv(bad_node, net), InputError);
    std::istringstream bad_number("scenario,node_id,gen_mw,load_mw\ns,1,abc,0\n");
    EXPECT_THROW(io::parse_scenarios_csv(bad_number, net), InputError);
    EXPECT_THROW(io::parse_scenarios_json(json::parse(R"({"scenarios": []})"), net), InputError);
}

TEST(Flows, SharedAndKeyed) {
    const Network net = bialek_network();
    std::istringstream shared("line_id,mw\n1,59.5\n2,221.5\n3,113.5\n4,172\n5,82.5\n");
    const io::FlowSet a = io::FlowSet::parse_csv(shared, net);
    EXPECT_EQ(a.for_scenario("anything")(1), 221.5);

    std::istringstream keyed("scenario,line_id,mw\ns,5,82.5\ns,4,172\ns,3,113.5\ns,2,221.5\ns,1,59.5\n");
    const io::FlowSet b = io::FlowSet::parse_csv(keyed, net);
    EXPECT_EQ(b.for_scenario("s"), a.for_scenario("s"));
    EXPECT_THROW(b.for_scenario("other"), InputError);

    std::istringstream missing("line_id,mw\n1,59.5\n");
    EXPECT_THROW(io::FlowSet::parse_csv(missing, net), InputError);
    std::istringstream twice("line_id,mw\n1,1\n1,2\n2,1\n3,1\n4,1\n5,1\n");
    EXPECT_THROW(io::FlowSet::parse_csv(twice, net), InputError);
}

TEST(Flows, WrittenFlowsReadBackBitExact) {
    const Network net = bialek_network();
    const Vector f = solve_dc(net, bialek_scenario()).flows;
    std::ostringstream out;
    io::write_flows_csv(out, net, {{"fig3", f}});
    std::istringstream in(out.str());
    EXPECT_EQ(io::FlowSet::parse_csv(in, net).for_scenario("fig3"), f);
}

TEST(Format, TwoDecimals) {
    EXPECT_EQ(io::format_mw(221.5), "221.50");
    EXPECT_EQ(io::format_mw(-1e-12), "0.00");
    EXPECT_EQ(io::format_mw(-0.004), "0.00");
    EXPECT_EQ(io::format_mw(-3.456), "-3.46");
}

TEST(Report, DecompositionCsvLayout) {
    DecompositionTable t;
    t.rows.push_back(LineDecomposition{"1", 0.0, 42.3112, 0.0, 17.1888, {{"A", 17.1888}}});
    std::ostringstream out;
    io::write_decomposition_csv(out, t);
    EXPECT_EQ(out.str(), "line_id,IN,IE,TR,LF\n1,0.00,42.31,0.00,17.19\n");
    const json j = io::decomposition_to_json(t);
    EXPECT_EQ(j["rows"][0]["lf_by_zone"]["A"].get<double>(), 17.1888);
}

TEST(Report, RankingJsonShape) {
    const json j = io::ranking_to_json({{"A", 117.17}, {"B", 0.0}}, RankingMode::Absolute);
    ASSERT_EQ(j.size(), 2u);
    EXPECT_EQ(j[0]["zone"], "A");
    EXPECT_EQ(j[0]["mode"], "absolute");
    EXPECT_EQ(j[1]["lf_total_mw"].get<double>(), 0.0);
}
