#include "zonetrace/pipeline.hpp"

#include "zonetrace/error.hpp"

#include <future>
#include <sstream>

namespace zonetrace {

void validate(const PipelineConfig& config) {
    if (!(config.epsilon > 0.0)) throw InputError("epsilon must be positive");
}

ScenarioResult evaluate_scenario(const Network& network, const ZoneMap& zones, const Scenario& scenario,
                                 const Vector& flows, double epsilon) {
    validate_scenario(network, scenario);
    ScenarioResult r{scenario.label, {}, flows, orient_by_flow(network, flows, epsilon), {}, {}, {}};
    for (const Line& line : network.lines()) r.line_ids.push_back(line.id);
    r.trace = trace(r.oriented, scenario, epsilon);
    r.table = decompose(r.oriented, r.trace, zones, epsilon);
    r.p_lf = loop_injections(incidence(network), r.table.loop_flow_vector());
    return r;
}

ScenarioResult rezone(const ScenarioResult& result, const ZoneMap& zones, double epsilon) {
    ScenarioResult r = result;
    r.table = decompose(r.oriented, r.trace, zones, epsilon);
    // signed LF along the declared direction against the declared incidence
    Matrix g = r.trace.incidence.G;
    for (Index k = 0; k < g.rows(); ++k) g.row(k) *= r.oriented.orientation[static_cast<std::size_t>(k)];
    r.p_lf = g.transpose() * r.table.loop_flow_vector();
    return r;
}

std::vector<ScenarioResult> evaluate_scenarios(const Network& network, const ZoneMap& zones,
                                               const std::vector<Scenario>& scenarios, const io::FlowSet* flows,
                                               const PipelineConfig& config) {
    validate(config);
    std::vector<std::future<ScenarioResult>> pending;
    pending.reserve(scenarios.size());
    for (const Scenario& sc : scenarios) {
        pending.push_back(std::async(std::launch::async, [&network, &zones, &sc, flows, &config] {
            const Vector f = flows ? flows->for_scenario(sc.label) : solve_dc(network, sc, config.slack).flows;
            return evaluate_scenario(network, zones, sc, f, config.epsilon);
        }));
    }
    std::vector<ScenarioResult> results;
    results.reserve(pending.size());
    for (auto& p : pending) results.push_back(p.get());
    return results;
}

AveragedResult average_decomposition(std::span<const ScenarioResult> results) {
    if (results.empty()) throw InputError("no scenario results to average");
    const auto& first = results.front();
    const std::size_t m = first.line_ids.size();
    for (const auto& r : results) {
        if (r.line_ids != first.line_ids || r.p_lf.size() != first.p_lf.size() || r.table.rows.size() != m)
            throw InputError("scenario '" + r.label + "' was evaluated on a different network");
    }

    const double count = static_cast<double>(results.size());
    AveragedResult avg;
    avg.mean_flows = Vector::Zero(static_cast<Index>(m));
    avg.mean_p_lf = Vector::Zero(first.p_lf.size());
    avg.mean_table.rows.resize(m);
    for (std::size_t k = 0; k < m; ++k) avg.mean_table.rows[k].line_id = first.line_ids[k];

    for (const auto& r : results) {
        avg.labels.push_back(r.label);
        avg.per_scenario.push_back(r.table);
        avg.mean_flows += r.flows;
        avg.mean_p_lf += r.p_lf;
        for (std::size_t k = 0; k < m; ++k) {
            auto& acc = avg.mean_table.rows[k];
            const auto& row = r.table.rows[k];
            acc.in_mw += row.in_mw;
            acc.ie_mw += row.ie_mw;
            acc.tr_mw += row.tr_mw;
            acc.lf_mw += row.lf_mw;
            for (const auto& [zone, mw] : row.lf_by_zone) acc.lf_by_zone[zone] += mw;
        }
    }
    avg.mean_flows /= count;
    avg.mean_p_lf /= count;
    for (auto& row : avg.mean_table.rows) {
        row.in_mw /= count;
        row.ie_mw /= count;
        row.tr_mw /= count;
        row.lf_mw /= count;
        for (auto& [zone, mw] : row.lf_by_zone) mw /= count;
    }
    return avg;
}

PipelineReport run_pipeline(const Network& network, const std::vector<Scenario>& scenarios,
                            const io::FlowSet* flows, const PipelineConfig& config) {
    validate(config);
    const ZoneMap& zones = network.zone_map();

    PipelineReport report;
    report.scenarios = evaluate_scenarios(network, zones, scenarios, flows, config);
    report.pre = average_decomposition(report.scenarios);
    report.ranking = rank_zones(report.pre.mean_table, zones, network, config.mode);
    for (const auto& r : report.scenarios)
        report.per_scenario_rankings.push_back(rank_zones(r.table, zones, network, config.mode));
    report.total_lf_pre = report.pre.mean_table.total_loop_flow();

    std::string target;
    try {
        target = select_target_zone(report.ranking, config.epsilon);
    } catch (const NoLoopFlowsError& e) {
        report.converged = true;
        report.message = e.what();
        report.total_lf_post = report.total_lf_pre;
        return report;
    }

    report.split = split_zone(network, zones, target, report.pre.mean_p_lf);
    std::vector<ScenarioResult> post;
    post.reserve(report.scenarios.size());
    for (const auto& r : report.scenarios) post.push_back(rezone(r, report.split->new_zone_map, config.epsilon));
    report.post = average_decomposition(post);
    report.total_lf_post = report.post->mean_table.total_loop_flow();

    report.flows_unchanged = true;
    for (std::size_t s = 0; s < post.size(); ++s)
        report.flows_unchanged = report.flows_unchanged && post[s].flows == report.scenarios[s].flows;
    report.message = "split zone " + target + " into " + report.split->source_zone + " and " + report.split->sink_zone;
    return report;
}

namespace {

std::string dump(const io::json& doc) { return doc.dump(2) + "\n"; }

template <class Writer>
std::string render(Writer&& writer) {
    std::ostringstream out;
    writer(out);
    return out.str();
}

io::json table_bundle(const AveragedResult& avg) {
    io::json per = io::json::array();
    for (std::size_t s = 0; s < avg.per_scenario.size(); ++s)
        per.push_back({{"label", avg.labels[s]}, {"table", io::decomposition_to_json(avg.per_scenario[s])}});
    return io::json{{"mean", io::decomposition_to_json(avg.mean_table)}, {"scenarios", per}};
}

}  // namespace

void write_trace_matrices(const ScenarioResult& r, const Network& network, const std::filesystem::path& dir,
                          bool exchange) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> nodes, lines;
    for (const Node& n : network.nodes()) nodes.push_back(n.id);
    for (const Line& l : network.lines()) lines.push_back(l.id);
    const std::string stem = r.label + "_";
    io::write_text(dir / (stem + "F.csv"),
                   render([&](std::ostream& o) { io::write_matrix_csv(o, r.trace.F, nodes, nodes); }));
    io::write_text(dir / (stem + "G2T.csv"),
                   render([&](std::ostream& o) { io::write_matrix_csv(o, r.trace.attribution.g2t, lines, nodes); }));
    io::write_text(dir / (stem + "L2T.csv"),
                   render([&](std::ostream& o) { io::write_matrix_csv(o, r.trace.attribution.l2t, lines, nodes); }));
    if (!exchange) return;
    for (Index k = 0; k < network.line_count(); ++k) {
        const ExchangeMatrix x = exchange_matrix(k, r.trace.attribution, r.oriented.flows);
        io::write_text(dir / (stem + "X_" + lines[static_cast<std::size_t>(k)] + ".csv"),
                       render([&](std::ostream& o) { io::write_matrix_csv(o, x.X, nodes, nodes); }));
    }
}

void write_report(const PipelineReport& report, const Network& network, const PipelineConfig& config) {
    const auto& dir = config.output_dir;
    std::filesystem::create_directories(dir);

    io::write_text(dir / "decomposition_pre.csv",
                   render([&](std::ostream& o) { io::write_decomposition_csv(o, report.pre.mean_table); }));
    io::write_text(dir / "decomposition_pre.json", dump(table_bundle(report.pre)));
    io::write_text(dir / "zone_ranking.json", dump(io::ranking_to_json(report.ranking, config.mode)));
    io::json per = io::json::array();
    for (std::size_t s = 0; s < report.per_scenario_rankings.size(); ++s)
        per.push_back({{"label", report.pre.labels[s]},
                       {"ranking", io::ranking_to_json(report.per_scenario_rankings[s], config.mode)}});
    io::write_text(dir / "zone_ranking_scenarios.json", dump(per));
    io::write_text(dir / "p_lf.csv", render([&](std::ostream& o) { io::write_p_lf_csv(o, network, report.pre.mean_p_lf); }));

    if (report.split) {
        io::write_text(dir / "zone_map_new.json", dump(io::zone_map_to_json(report.split->new_zone_map)));
        io::write_text(dir / "merge_trace.json", dump(io::split_to_json(*report.split)));
    }
    if (report.post) {
        io::write_text(dir / "decomposition_post.csv",
                       render([&](std::ostream& o) { io::write_decomposition_csv(o, report.post->mean_table); }));
        io::write_text(dir / "decomposition_post.json", dump(table_bundle(*report.post)));
    }

    io::json summary{{"converged", report.converged},
                     {"message", report.message},
                     {"total_lf_pre_mw", report.total_lf_pre},
                     {"total_lf_post_mw", report.total_lf_post},
                     {"flows_unchanged", report.flows_unchanged},
                     {"scenarios", report.pre.labels}};
    if (report.split) summary["target_zone"] = report.split->target_zone;
    io::write_text(dir / "summary.json", dump(summary));

    if (config.emit_debug_matrices) {
        for (const auto& r : report.scenarios) write_trace_matrices(r, network, dir / "debug", true);
    }
}

int run_pipeline(const std::filesystem::path& network_file, const std::filesystem::path& scenario_file,
                 const std::optional<std::filesystem::path>& flows_file, const PipelineConfig& config) {
    Network network = io::read_network(network_file);
    if (config.zone_file) network = network.with_zone_map(io::read_zone_map(*config.zone_file, network));
    const auto scenarios = io::read_scenarios(scenario_file, network);
    std::optional<io::FlowSet> flows;
    if (flows_file) flows = io::read_flows(*flows_file, network);

    const PipelineReport report = run_pipeline(network, scenarios, flows ? &*flows : nullptr, config);
    write_report(report, network, config);
    return report.converged ? exit_code(ErrorKind::NoLoopFlows) : 0;
}

}  // namespace zonetrace
