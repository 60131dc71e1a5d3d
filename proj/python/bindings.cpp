#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "zonetrace/error.hpp"
#include "zonetrace/pipeline.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace zonetrace;

namespace {

py::dict row_to_dict(const LineDecomposition& row) {
    py::dict d;
    d["line_id"] = row.line_id;
    d["IN"] = row.in_mw;
    d["IE"] = row.ie_mw;
    d["TR"] = row.tr_mw;
    d["LF"] = row.lf_mw;
    d["lf_by_zone"] = row.lf_by_zone;
    return d;
}

py::list table_to_list(const DecompositionTable& table) {
    py::list rows;
    for (const auto& row : table.rows) rows.append(row_to_dict(row));
    return rows;
}

Network network_with(const Network& network, const std::optional<std::map<std::string, std::string>>& zones) {
    if (!zones) return network;
    std::vector<std::string> ids, labels;
    for (const Node& n : network.nodes()) {
        ids.push_back(n.id);
        auto it = zones->find(n.id);
        labels.push_back(it == zones->end() ? std::string() : it->second);
    }
    return network.with_zone_map(ZoneMap(std::move(ids), std::move(labels)));
}

ScenarioResult evaluate(const Network& network, const Scenario& scenario, const std::optional<Vector>& flows,
                        double epsilon) {
    const Vector f = flows ? *flows : solve_dc(network, scenario).flows;
    return evaluate_scenario(network, network.zone_map(), scenario, f, epsilon);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Proportional-sharing loop-flow decomposition and bidding-zone splitting";

    auto base = py::register_exception<Error>(m, "ZonetraceError", PyExc_RuntimeError);
    py::register_exception<InputError>(m, "InputError", base.ptr());
    py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
    py::register_exception<NoLoopFlowsError>(m, "NoLoopFlowsError", base.ptr());

    py::class_<Network>(m, "Network")
        .def_property_readonly("node_ids",
                               [](const Network& n) {
                                   std::vector<std::string> ids;
                                   for (const Node& node : n.nodes()) ids.push_back(node.id);
                                   return ids;
                               })
        .def_property_readonly("line_ids",
                               [](const Network& n) {
                                   std::vector<std::string> ids;
                                   for (const Line& line : n.lines()) ids.push_back(line.id);
                                   return ids;
                               })
        .def_property_readonly("zones",
                               [](const Network& n) {
                                   std::map<std::string, std::string> z;
                                   for (const Node& node : n.nodes()) z[node.id] = node.zone;
                                   return z;
                               })
        .def_property_readonly("node_count", &Network::node_count)
        .def_property_readonly("line_count", &Network::line_count);

    m.def("load_network", [](const std::filesystem::path& p) { return io::read_network(p); }, py::arg("path"));
    m.def("parse_network",
          [](const std::string& text) {
              try {
                  return io::parse_network(io::json::parse(text));
              } catch (const io::json::exception& e) {
                  throw InputError(e.what());
              }
          },
          py::arg("text"));
    m.def("incidence",
          [](const Network& n) {
              const IncidenceMatrices inc = incidence(n);
              return py::make_tuple(inc.G, inc.G_r, inc.G_t);
          },
          py::arg("network"), "Return (G, G_r, G_t), each lines x nodes.");

    py::class_<Scenario>(m, "Scenario")
        .def(py::init([](std::string label, Vector gen, Vector load) {
                 return Scenario{std::move(label), std::move(gen), std::move(load)};
             }),
             py::arg("label"), py::arg("gen"), py::arg("load"))
        .def_readonly("label", &Scenario::label)
        .def_readonly("gen", &Scenario::gen)
        .def_readonly("load", &Scenario::load);

    m.def("load_scenarios", [](const std::filesystem::path& p, const Network& n) { return io::read_scenarios(p, n); },
          py::arg("path"), py::arg("network"));

    py::class_<FlowSolution>(m, "FlowSolution")
        .def_readonly("flows", &FlowSolution::flows)
        .def_readonly("angles", &FlowSolution::angles)
        .def_readonly("slack", &FlowSolution::slack);

    m.def("solve_dc", &solve_dc, py::arg("network"), py::arg("scenario"), py::arg("slack") = py::none());

    m.def("trace",
          [](const Network& network, const Scenario& scenario, std::optional<Vector> flows, double epsilon) {
              const ScenarioResult r = evaluate(network, scenario, flows, epsilon);
              py::dict d;
              d["F"] = r.trace.F;
              d["p"] = r.trace.p;
              d["C_u"] = r.trace.dist.C_u;
              d["C_d"] = r.trace.dist.C_d;
              d["A_u_inv"] = r.trace.dist.A_u_inv;
              d["A_d_inv"] = r.trace.dist.A_d_inv;
              d["GDF"] = r.trace.factors.gdf;
              d["LDF"] = r.trace.factors.ldf;
              d["G2T"] = r.trace.attribution.g2t;
              d["L2T"] = r.trace.attribution.l2t;
              d["flows"] = r.oriented.flows;
              d["orientation"] = r.oriented.orientation;
              return d;
          },
          py::arg("network"), py::arg("scenario"), py::arg("flows") = py::none(),
          py::arg("epsilon") = kDefaultEpsilon);

    m.def("exchange_matrices",
          [](const Network& network, const Scenario& scenario, std::optional<Vector> flows, double epsilon) {
              const ScenarioResult r = evaluate(network, scenario, flows, epsilon);
              std::vector<Matrix> xs;
              for (Index k = 0; k < network.line_count(); ++k)
                  xs.push_back(exchange_matrix(k, r.trace.attribution, r.oriented.flows, epsilon).X);
              return xs;
          },
          py::arg("network"), py::arg("scenario"), py::arg("flows") = py::none(),
          py::arg("epsilon") = kDefaultEpsilon,
          "Per-line exchange matrices X[i, j] = MW load i receives from generator j.");

    m.def("decompose",
          [](const Network& network, const Scenario& scenario, std::optional<Vector> flows,
             std::optional<std::map<std::string, std::string>> zones, double epsilon) {
              const ScenarioResult r = evaluate(network_with(network, zones), scenario, flows, epsilon);
              py::dict d;
              d["rows"] = table_to_list(r.table);
              d["p_lf"] = r.p_lf;
              d["total_lf"] = r.table.total_loop_flow();
              return d;
          },
          py::arg("network"), py::arg("scenario"), py::arg("flows") = py::none(), py::arg("zones") = py::none(),
          py::arg("epsilon") = kDefaultEpsilon);

    m.def("classify",
          [](const std::string& load, const std::string& gen, const std::string& from, const std::string& to) {
              return std::string(to_string(classify(ComponentZones{load, gen, from, to})));
          },
          py::arg("load_zone"), py::arg("gen_zone"), py::arg("from_zone"), py::arg("to_zone"));

    m.def("rank_zones",
          [](const Network& network, const Scenario& scenario, std::optional<Vector> flows, const std::string& mode) {
              const ScenarioResult r = evaluate(network, scenario, flows, kDefaultEpsilon);
              const auto ranking = rank_zones(r.table, network.zone_map(), network,
                                              mode == "rel" ? RankingMode::Relative : RankingMode::Absolute);
              std::vector<std::pair<std::string, double>> out;
              for (const auto& s : ranking) out.emplace_back(s.zone, s.lf_total_mw);
              return out;
          },
          py::arg("network"), py::arg("scenario"), py::arg("flows") = py::none(), py::arg("mode") = "abs");

    m.def("select_target_zone",
          [](const std::vector<std::pair<std::string, double>>& ranking, double epsilon) {
              std::vector<ZoneScore> scores;
              for (const auto& [zone, mw] : ranking) scores.push_back({zone, mw});
              return select_target_zone(scores, epsilon);
          },
          py::arg("ranking"), py::arg("epsilon") = kDefaultEpsilon);

    m.def("split_zone",
          [](const Network& network, const std::string& target, const Vector& p_lf) {
              const SplitResult s = split_zone(network, network.zone_map(), target, p_lf);
              py::dict d;
              std::map<std::string, std::string> zones;
              for (Index i = 0; i < s.new_zone_map.size(); ++i)
                  zones[s.new_zone_map.node_ids()[static_cast<std::size_t>(i)]] = s.new_zone_map.zone(i);
              d["zones"] = zones;
              d["source_zone"] = s.source_zone;
              d["sink_zone"] = s.sink_zone;
              d["degenerate"] = s.degenerate;
              py::list merges;
              for (const auto& mg : s.merge_trace) merges.append(py::make_tuple(mg.left, mg.right, mg.distance));
              d["merges"] = merges;
              return d;
          },
          py::arg("network"), py::arg("target"), py::arg("p_lf"));

    m.def("run_pipeline",
          [](const std::filesystem::path& network, const std::filesystem::path& scenarios,
             const std::filesystem::path& out, std::optional<std::filesystem::path> flows, const std::string& mode,
             double epsilon) {
              PipelineConfig cfg;
              cfg.output_dir = out;
              cfg.epsilon = epsilon;
              cfg.mode = mode == "rel" ? RankingMode::Relative : RankingMode::Absolute;
              return run_pipeline(network, scenarios, flows, cfg);
          },
          py::arg("network"), py::arg("scenarios"), py::arg("out"), py::arg("flows") = py::none(),
          py::arg("mode") = "abs", py::arg("epsilon") = kDefaultEpsilon,
          "Run the full workflow, writing reports to `out`. Returns 0, or 3 when no loop flows remain.");

#ifdef VERSION_INFO
    m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}
