#include "zonetrace/io.hpp"

#include "zonetrace/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

namespace zonetrace::io {

namespace {

std::string id_string(const json& value, const std::string& what) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_number_integer()) return std::to_string(value.get<long long>());
    throw InputError(what + " must be a string or an integer");
}

double number(const json& obj, const char* key, const std::string& what) {
    if (!obj.contains(key) || !obj.at(key).is_number()) throw InputError(what + ": missing numeric '" + key + "'");
    return obj.at(key).get<double>();
}

const json& array_field(const json& doc, const char* key, const std::string& what) {
    if (!doc.is_object() || !doc.contains(key) || !doc.at(key).is_array())
        throw InputError(what + ": expected an array '" + key + "'");
    return doc.at(key);
}

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InputError("'" + path.string() + "': " + e.what());
    }
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw InputError(what + ": '" + text + "' is not a number");
    }
}

// Reads the non-blank rows of a CSV stream; the first row is the header.
std::vector<std::vector<std::string>> read_csv(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        rows.push_back(split_csv(line));
    }
    return rows;
}

}  // namespace

Network parse_network(const json& doc) {
    try {
        std::vector<Node> nodes;
        for (const json& n : array_field(doc, "nodes", "network")) {
            if (!n.is_object() || !n.contains("id") || !n.contains("zone"))
                throw InputError("network: every node needs 'id' and 'zone'");
            nodes.push_back(Node{id_string(n.at("id"), "node id"), id_string(n.at("zone"), "zone id")});
        }
        std::vector<Line> lines;
        for (const json& l : array_field(doc, "lines", "network")) {
            if (!l.is_object() || !l.contains("id") || !l.contains("from") || !l.contains("to"))
                throw InputError("network: every line needs 'id', 'from' and 'to'");
            Line line;
            line.id = id_string(l.at("id"), "line id");
            line.from = id_string(l.at("from"), "line endpoint");
            line.to = id_string(l.at("to"), "line endpoint");
            line.reactance = number(l, "reactance", "line '" + line.id + "'");
            if (l.contains("capacity") && !l.at("capacity").is_null())
                line.capacity = number(l, "capacity", "line '" + line.id + "'");
            lines.push_back(std::move(line));
        }
        return build_network(std::move(nodes), std::move(lines));
    } catch (const json::exception& e) {
        throw InputError(std::string("network: ") + e.what());
    }
}

Network read_network(const std::filesystem::path& path) { return parse_network(load_json(path)); }

ZoneMap parse_zone_map(const json& doc, const Network& network) {
    std::vector<std::string> zones(static_cast<std::size_t>(network.node_count()));
    for (const json& n : array_field(doc, "nodes", "zone map")) {
        if (!n.is_object() || !n.contains("id") || !n.contains("zone"))
            throw InputError("zone map: every entry needs 'id' and 'zone'");
        const Index i = network.node_index(id_string(n.at("id"), "node id"));
        if (!zones[static_cast<std::size_t>(i)].empty())
            throw InputError("zone map: node listed twice");
        zones[static_cast<std::size_t>(i)] = id_string(n.at("zone"), "zone id");
    }
    std::vector<std::string> ids;
    for (const Node& n : network.nodes()) ids.push_back(n.id);
    return ZoneMap(std::move(ids), std::move(zones));
}

ZoneMap read_zone_map(const std::filesystem::path& path, const Network& network) {
    return parse_zone_map(load_json(path), network);
}

json zone_map_to_json(const ZoneMap& zones) {
    json nodes = json::array();
    for (Index i = 0; i < zones.size(); ++i)
        nodes.push_back({{"id", zones.node_ids()[static_cast<std::size_t>(i)]}, {"zone", zones.zone(i)}});
    return json{{"nodes", nodes}};
}

std::vector<Scenario> parse_scenarios_json(const json& doc, const Network& network) {
    std::vector<Scenario> out;
    try {
        for (const json& s : array_field(doc, "scenarios", "scenario file")) {
            Scenario sc;
            sc.label = s.contains("label") ? id_string(s.at("label"), "scenario label")
                                           : "s" + std::to_string(out.size() + 1);
            sc.gen = Vector::Zero(network.node_count());
            sc.load = Vector::Zero(network.node_count());
            for (const json& inj : array_field(s, "injections", "scenario '" + sc.label + "'")) {
                if (!inj.contains("node")) throw InputError("scenario '" + sc.label + "': injection without 'node'");
                const Index i = network.node_index(id_string(inj.at("node"), "node id"));
                if (inj.contains("gen")) sc.gen(i) += number(inj, "gen", "scenario '" + sc.label + "'");
                if (inj.contains("load")) sc.load(i) += number(inj, "load", "scenario '" + sc.label + "'");
            }
            out.push_back(std::move(sc));
        }
    } catch (const json::exception& e) {
        throw InputError(std::string("scenario file: ") + e.what());
    }
    if (out.empty()) throw InputError("scenario file lists no scenarios");
    return out;
}

std::vector<Scenario> parse_scenarios_csv(std::istream& in, const Network& network) {
    const auto rows = read_csv(in);
    if (rows.empty() || rows[0].size() != 4) throw InputError("scenario CSV: expected header scenario,node_id,gen_mw,load_mw");
    std::vector<Scenario> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != 4) throw InputError("scenario CSV: row " + std::to_string(r + 1) + " needs 4 fields");
        auto it = std::find_if(out.begin(), out.end(), [&](const Scenario& s) { return s.label == row[0]; });
        if (it == out.end()) {
            out.push_back(Scenario{row[0], Vector::Zero(network.node_count()), Vector::Zero(network.node_count())});
            it = std::prev(out.end());
        }
        const Index i = network.node_index(row[1]);
        it->gen(i) += parse_double(row[2], "scenario CSV gen_mw");
        it->load(i) += parse_double(row[3], "scenario CSV load_mw");
    }
    if (out.empty()) throw InputError("scenario file lists no scenarios");
    return out;
}

std::vector<Scenario> read_scenarios(const std::filesystem::path& path, const Network& network) {
    if (path.extension() == ".csv") {
        std::ifstream in(path);
        if (!in) throw InputError("cannot open '" + path.string() + "'");
        return parse_scenarios_csv(in, network);
    }
    return parse_scenarios_json(load_json(path), network);
}

FlowSet FlowSet::parse_csv(std::istream& in, const Network& network) {
    const auto rows = read_csv(in);
    if (rows.empty() || (rows[0].size() != 2 && rows[0].size() != 3))
        throw InputError("flows CSV: expected header line_id,mw or scenario,line_id,mw");
    const bool keyed = rows[0].size() == 3;
    FlowSet set;
    std::map<std::string, std::vector<bool>> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != rows[0].size())
            throw InputError("flows CSV: row " + std::to_string(r + 1) + " has the wrong field count");
        const std::string label = keyed ? row[0] : std::string();
        const Index k = network.line_index(row[keyed ? 1 : 0]);
        Vector& flows = keyed ? set.by_scenario[label] : (set.shared ? *set.shared : set.shared.emplace());
        auto& mark = seen[label];
        if (flows.size() == 0) {
            flows = Vector::Zero(network.line_count());
            mark.assign(static_cast<std::size_t>(network.line_count()), false);
        }
        if (mark[static_cast<std::size_t>(k)]) throw InputError("flows CSV: line '" + row[keyed ? 1 : 0] + "' given twice");
        mark[static_cast<std::size_t>(k)] = true;
        flows(k) = parse_double(row[keyed ? 2 : 1], "flows CSV mw");
    }
    for (const auto& [label, mark] : seen)
        if (std::find(mark.begin(), mark.end(), false) != mark.end())
            throw InputError("flows CSV: missing lines" + (label.empty() ? std::string() : " for scenario '" + label + "'"));
    if (!set.shared && set.by_scenario.empty()) throw InputError("flows CSV has no rows");
    return set;
}

const Vector& FlowSet::for_scenario(const std::string& label) const {
    auto it = by_scenario.find(label);
    if (it != by_scenario.end()) return it->second;
    if (shared) return *shared;
    throw InputError("no flows recorded for scenario '" + label + "'");
}

FlowSet read_flows(const std::filesystem::path& path, const Network& network) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    return FlowSet::parse_csv(in, network);
}

void write_flows_csv(std::ostream& out, const Network& network,
                     const std::vector<std::pair<std::string, Vector>>& flows) {
    out << "scenario,line_id,mw\n";
    char buf[64];
    for (const auto& [label, f] : flows) {
        for (Index k = 0; k < network.line_count(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", f(k));
            out << label << ',' << network.lines()[static_cast<std::size_t>(k)].id << ',' << buf << '\n';
        }
    }
}

std::string format_mw(double mw) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", mw);
    std::string s(buf);
    if (s == "-0.00") s = "0.00";
    return s;
}

void write_decomposition_csv(std::ostream& out, const DecompositionTable& table) {
    out << "line_id,IN,IE,TR,LF\n";
    for (const auto& row : table.rows) {
        out << row.line_id << ',' << format_mw(row.in_mw) << ',' << format_mw(row.ie_mw) << ','
            << format_mw(row.tr_mw) << ',' << format_mw(row.lf_mw) << '\n';
    }
}

json decomposition_to_json(const DecompositionTable& table) {
    json rows = json::array();
    for (const auto& row : table.rows) {
        json by_zone = json::object();
        for (const auto& [zone, mw] : row.lf_by_zone) by_zone[zone] = mw;
        rows.push_back({{"line_id", row.line_id},
                        {"IN", row.in_mw},
                        {"IE", row.ie_mw},
                        {"TR", row.tr_mw},
                        {"LF", row.lf_mw},
                        {"lf_by_zone", by_zone}});
    }
    return json{{"rows", rows}, {"total_lf_mw", table.total_loop_flow()}};
}

void write_p_lf_csv(std::ostream& out, const Network& network, const Vector& p_lf) {
    out << "node_id,p_lf_mw\n";
    char buf[64];
    for (Index i = 0; i < network.node_count(); ++i) {
        std::snprintf(buf, sizeof buf, "%.6f", p_lf(i));
        std::string s(buf);
        if (s == "-0.000000") s = "0.000000";
        out << network.nodes()[static_cast<std::size_t>(i)].id << ',' << s << '\n';
    }
}

json ranking_to_json(const std::vector<ZoneScore>& ranking, RankingMode mode) {
    json out = json::array();
    for (const auto& score : ranking)
        out.push_back({{"zone", score.zone}, {"lf_total_mw", score.lf_total_mw}, {"mode", std::string(to_string(mode))}});
    return out;
}

json split_to_json(const SplitResult& split) {
    json merges = json::array();
    for (const auto& m : split.merge_trace) merges.push_back({{"left", m.left}, {"right", m.right}, {"distance", m.distance}});
    json features = json::array();
    for (const auto& [id, value] : split.cluster_features) features.push_back({{"node", id}, {"p_lf", value}});
    return json{{"target_zone", split.target_zone},
                {"source_zone", split.source_zone},
                {"sink_zone", split.sink_zone},
                {"degenerate", split.degenerate},
                {"features", features},
                {"merges", merges}};
}

void write_matrix_csv(std::ostream& out, const Matrix& m, const std::vector<std::string>& row_ids,
                      const std::vector<std::string>& col_ids) {
    char buf[64];
    out << "id";
    for (const auto& c : col_ids) out << ',' << c;
    out << '\n';
    for (Index r = 0; r < m.rows(); ++r) {
        out << row_ids[static_cast<std::size_t>(r)];
        for (Index c = 0; c < m.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.10g", m(r, c));
            out << ',' << buf;
        }
        out << '\n';
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out << text;
}

}  // namespace zonetrace::io
