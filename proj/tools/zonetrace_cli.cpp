// zonetrace: trace DC line flows to generator/load pairs, classify them per
// bidding zone and split the zone causing the most loop flow.

#include "zonetrace/error.hpp"
#include "zonetrace/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace {

using namespace zonetrace;

struct Options {
    std::string network;
    std::string scenarios;
    std::string flows;
    std::string zones;
    std::string mode = "abs";
    std::string slack;
    std::string out;
    double epsilon = kDefaultEpsilon;
    bool debug_matrices = false;
};

void add_common(CLI::App* cmd, Options& opt, bool needs_scenarios) {
    cmd->add_option("--network", opt.network, "Network JSON file")->required()->check(CLI::ExistingFile);
    auto* sc = cmd->add_option("--scenarios", opt.scenarios, "Scenario JSON or CSV file")->check(CLI::ExistingFile);
    if (needs_scenarios) sc->required();
    cmd->add_option("--flows", opt.flows, "Pre-solved line flows CSV (bypasses the DC solver)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--zones", opt.zones, "Zone map JSON overriding the network's zones")->check(CLI::ExistingFile);
    cmd->add_option("--mode", opt.mode, "Zone ranking mode")->check(CLI::IsMember({"abs", "rel"}));
    cmd->add_option("--slack", opt.slack, "Slack node id (default: first node)");
    cmd->add_option("--epsilon", opt.epsilon, "Zero-flow tolerance in MW")->check(CLI::PositiveNumber);
    cmd->add_option("--out", opt.out, "Output directory");
    cmd->add_flag("--debug-matrices", opt.debug_matrices, "Dump F, G2T, L2T and X^k matrices as CSV");
}

PipelineConfig config_from(const Options& opt) {
    PipelineConfig c;
    c.epsilon = opt.epsilon;
    c.mode = opt.mode == "rel" ? RankingMode::Relative : RankingMode::Absolute;
    if (!opt.slack.empty()) c.slack = opt.slack;
    c.output_dir = opt.out.empty() ? std::filesystem::path(".") : std::filesystem::path(opt.out);
    c.emit_debug_matrices = opt.debug_matrices;
    if (!opt.zones.empty()) c.zone_file = opt.zones;
    return c;
}

struct Inputs {
    Network network;
    std::vector<Scenario> scenarios;
    std::optional<io::FlowSet> flows;
};

Inputs load(const Options& opt) {
    Inputs in;
    in.network = io::read_network(opt.network);
    if (!opt.zones.empty()) in.network = in.network.with_zone_map(io::read_zone_map(opt.zones, in.network));
    in.scenarios = io::read_scenarios(opt.scenarios, in.network);
    if (!opt.flows.empty()) in.flows = io::read_flows(opt.flows, in.network);
    return in;
}

// Writes to <out>/<name> when --out is set, otherwise to stdout.
void emit(const Options& opt, const std::string& name, const std::string& text) {
    if (opt.out.empty()) {
        std::cout << text;
        return;
    }
    std::filesystem::create_directories(opt.out);
    io::write_text(std::filesystem::path(opt.out) / name, text);
}

template <class Writer>
std::string render(Writer&& writer) {
    std::ostringstream out;
    writer(out);
    return out.str();
}

int cmd_solve(const Options& opt) {
    const Inputs in = load(opt);
    const PipelineConfig cfg = config_from(opt);
    std::vector<std::pair<std::string, Vector>> flows;
    for (const Scenario& sc : in.scenarios) flows.emplace_back(sc.label, solve_dc(in.network, sc, cfg.slack).flows);
    emit(opt, "flows.csv", render([&](std::ostream& o) { io::write_flows_csv(o, in.network, flows); }));
    return 0;
}

int cmd_trace(const Options& opt) {
    const Inputs in = load(opt);
    const PipelineConfig cfg = config_from(opt);
    const auto results =
        evaluate_scenarios(in.network, in.network.zone_map(), in.scenarios, in.flows ? &*in.flows : nullptr, cfg);
    for (const auto& r : results) write_trace_matrices(r, in.network, cfg.output_dir, opt.debug_matrices);
    std::cout << "scenario,node_id,throughflow_mw\n";
    for (const auto& r : results)
        for (Index i = 0; i < in.network.node_count(); ++i)
            std::cout << r.label << ',' << in.network.nodes()[static_cast<std::size_t>(i)].id << ','
                      << io::format_mw(r.trace.p(i)) << '\n';
    return 0;
}

AveragedResult decompose_all(const Inputs& in, const PipelineConfig& cfg, std::vector<ScenarioResult>& results) {
    results = evaluate_scenarios(in.network, in.network.zone_map(), in.scenarios, in.flows ? &*in.flows : nullptr, cfg);
    if (cfg.emit_debug_matrices)
        for (const auto& r : results) write_trace_matrices(r, in.network, cfg.output_dir / "debug", true);
    return average_decomposition(results);
}

int cmd_decompose(const Options& opt) {
    const Inputs in = load(opt);
    const PipelineConfig cfg = config_from(opt);
    std::vector<ScenarioResult> results;
    const AveragedResult avg = decompose_all(in, cfg, results);
    emit(opt, "decomposition_pre.csv", render([&](std::ostream& o) { io::write_decomposition_csv(o, avg.mean_table); }));
    if (!opt.out.empty()) {
        io::write_text(cfg.output_dir / "decomposition_pre.json", io::decomposition_to_json(avg.mean_table).dump(2) + "\n");
        io::write_text(cfg.output_dir / "p_lf.csv",
                       render([&](std::ostream& o) { io::write_p_lf_csv(o, in.network, avg.mean_p_lf); }));
    }
    return 0;
}

int cmd_rank(const Options& opt) {
    const Inputs in = load(opt);
    const PipelineConfig cfg = config_from(opt);
    std::vector<ScenarioResult> results;
    const AveragedResult avg = decompose_all(in, cfg, results);
    const auto ranking = rank_zones(avg.mean_table, in.network.zone_map(), in.network, cfg.mode);
    emit(opt, "zone_ranking.json", io::ranking_to_json(ranking, cfg.mode).dump(2) + "\n");
    return 0;
}

int cmd_split(const Options& opt) {
    const Inputs in = load(opt);
    const PipelineConfig cfg = config_from(opt);
    std::vector<ScenarioResult> results;
    const AveragedResult avg = decompose_all(in, cfg, results);
    const auto ranking = rank_zones(avg.mean_table, in.network.zone_map(), in.network, cfg.mode);
    const std::string target = select_target_zone(ranking, cfg.epsilon);
    const SplitResult split = split_zone(in.network, in.network.zone_map(), target, avg.mean_p_lf);
    emit(opt, "zone_map_new.json", io::zone_map_to_json(split.new_zone_map).dump(2) + "\n");
    if (!opt.out.empty()) io::write_text(cfg.output_dir / "merge_trace.json", io::split_to_json(split).dump(2) + "\n");
    return 0;
}

int cmd_pipeline(const Options& opt) {
    const PipelineConfig cfg = config_from(opt);
    std::optional<std::filesystem::path> flows;
    if (!opt.flows.empty()) flows = opt.flows;
    const int status = run_pipeline(opt.network, opt.scenarios, flows, cfg);
    std::ifstream summary(cfg.output_dir / "summary.json");
    std::cout << summary.rdbuf();
    return status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Loop-flow decomposition and bidding-zone splitting"};
    app.require_subcommand(1);

    Options opt;
    std::map<CLI::App*, int (*)(const Options&)> handlers;
    auto add = [&](const char* name, const char* help, int (*fn)(const Options&)) {
        CLI::App* cmd = app.add_subcommand(name, help);
        add_common(cmd, opt, true);
        handlers[cmd] = fn;
    };
    add("solve", "Solve the DC load flow of every scenario", cmd_solve);
    add("trace", "Trace line flows to generators and loads", cmd_trace);
    add("decompose", "Decompose line flows into IN/IE/TR/LF", cmd_decompose);
    add("rank", "Rank zones by loop-flow burden", cmd_rank);
    add("split", "Split the top-ranked zone in two", cmd_split);
    add("pipeline", "Decompose, rank, split and re-decompose", cmd_pipeline);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_code(ErrorKind::Input);
    }

    try {
        for (const auto& [cmd, fn] : handlers)
            if (cmd->parsed()) return fn(opt);
    } catch (const Error& e) {
        std::cerr << "zonetrace: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "zonetrace: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
