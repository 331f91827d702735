// SPDX-License-Identifier: Apache-2.0
#include "codegraph/graph_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "codegraph/errors.hpp"

namespace codegraph {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json node_record(const Node& n) {
    ordered_json j;
    j["t"] = "n";
    j["id"] = n.id;
    j["kind"] = to_string(n.kind);
    j["name"] = n.name;
    j["qn"] = n.qualified_name;
    j["path"] = n.path;
    if (n.span) {
        j["span"] = {n.span->start_line, n.span->start_col, n.span->end_line, n.span->end_col};
    } else {
        j["span"] = nullptr;
    }
    j["text"] = n.text;
    return j;
}

} // namespace

std::string graph_to_jsonl(const PropertyGraph& graph) {
    std::ostringstream out;
    out << "{\"format\":\"codegraph\",\"version\":1}\n";

    std::vector<const Node*> nodes;
    nodes.reserve(graph.nodes().size());
    for (const Node& n : graph.nodes()) nodes.push_back(&n);
    std::sort(nodes.begin(), nodes.end(),
              [](const Node* a, const Node* b) { return a->id < b->id; });
    for (const Node* n : nodes) {
        out << node_record(*n).dump() << "\n";
    }
    for (const Edge& e : graph.edges()) { // multiset iterates in sorted order
        ordered_json j;
        j["t"] = "e";
        j["src"] = e.src;
        j["rel"] = to_string(e.rel);
        j["dst"] = e.dst;
        out << j.dump() << "\n";
    }
    return out.str();
}

void persist_graph(const PropertyGraph& graph, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot open for writing: " + path);
    out << graph_to_jsonl(graph);
    out.flush();
    if (!out) throw InputError("write failed: " + path);
}

PropertyGraph graph_from_jsonl(const std::string& text) {
    PropertyGraph g;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    std::vector<Edge> pending_edges;
    std::vector<int> pending_lines;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ordered_json j;
        try {
            j = ordered_json::parse(line);
        } catch (const std::exception& ex) {
            throw GraphError("line " + std::to_string(line_no) + ": bad JSON: " + ex.what());
        }
        try {
            if (!header_seen) {
                if (j.value("format", "") != "codegraph" || j.value("version", 0) != 1) {
                    throw GraphError("unsupported header");
                }
                header_seen = true;
                continue;
            }
            std::string t = j.at("t").get<std::string>();
            if (t == "n") {
                Node n;
                n.id = j.at("id").get<std::string>();
                n.kind = parse_node_kind(j.at("kind").get<std::string>());
                n.name = j.at("name").get<std::string>();
                n.qualified_name = j.at("qn").get<std::string>();
                n.path = j.at("path").get<std::string>();
                if (!j.at("span").is_null()) {
                    const auto& s = j.at("span");
                    if (!s.is_array() || s.size() != 4) throw GraphError("span must be a 4-array");
                    SourceSpan span;
                    span.file_path = n.path;
                    span.start_line = s[0].get<int>();
                    span.start_col = s[1].get<int>();
                    span.end_line = s[2].get<int>();
                    span.end_col = s[3].get<int>();
                    n.span = span;
                }
                n.text = j.at("text").get<std::string>();
                g.add_node(std::move(n));
            } else if (t == "e") {
                Edge e;
                e.src = j.at("src").get<std::string>();
                e.rel = parse_edge_rel(j.at("rel").get<std::string>());
                e.dst = j.at("dst").get<std::string>();
                pending_edges.push_back(std::move(e));
                pending_lines.push_back(line_no);
            } else {
                throw GraphError("unknown record type '" + t + "'");
            }
        } catch (const GraphError& ex) {
            throw GraphError("line " + std::to_string(line_no) + ": " + ex.what());
        } catch (const std::exception& ex) {
            throw GraphError("line " + std::to_string(line_no) + ": malformed record: " + ex.what());
        }
    }
    if (!header_seen) throw GraphError("line 1: missing codegraph header");
    for (std::size_t i = 0; i < pending_edges.size(); ++i) {
        try {
            g.add_edge(pending_edges[i]);
        } catch (const GraphError& ex) {
            throw GraphError("line " + std::to_string(pending_lines[i]) + ": " + ex.what());
        }
    }
    return g;
}

PropertyGraph load_graph(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("graph file not found: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return graph_from_jsonl(buf.str());
}

} // namespace codegraph
