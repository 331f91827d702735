// SPDX-License-Identifier: Apache-2.0
#include "codegraph/graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "codegraph/errors.hpp"
#include "codegraph/repo_parser.hpp"

namespace codegraph {

const std::vector<const Edge*> PropertyGraph::no_edges_{};

const char* to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::File: return "File";
        case NodeKind::Class: return "Class";
        case NodeKind::Method: return "Method";
        case NodeKind::Function: return "Function";
        case NodeKind::Attribute: return "Attribute";
        case NodeKind::Documentation: return "Documentation";
        case NodeKind::GeneratedDescription: return "GeneratedDescription";
    }
    return "?";
}

const char* to_string(EdgeRel rel) {
    switch (rel) {
        case EdgeRel::DefinesClass: return "DEFINES_CLASS";
        case EdgeRel::DefinesFunction: return "DEFINES_FUNCTION";
        case EdgeRel::HasMethod: return "HAS_METHOD";
        case EdgeRel::HasAttribute: return "HAS_ATTRIBUTE";
        case EdgeRel::UsedIn: return "USED_IN";
        case EdgeRel::HasDescription: return "HAS_DESCRIPTION";
        case EdgeRel::HasDocumentation: return "HAS_DOCUMENTATION";
    }
    return "?";
}

const char* to_string(EntityKind kind) {
    switch (kind) {
        case EntityKind::File: return "File";
        case EntityKind::Class: return "Class";
        case EntityKind::Method: return "Method";
        case EntityKind::Function: return "Function";
        case EntityKind::Attribute: return "Attribute";
    }
    return "?";
}

NodeKind parse_node_kind(const std::string& s) {
    static const std::pair<const char*, NodeKind> table[] = {
        {"File", NodeKind::File},
        {"Class", NodeKind::Class},
        {"Method", NodeKind::Method},
        {"Function", NodeKind::Function},
        {"Attribute", NodeKind::Attribute},
        {"Documentation", NodeKind::Documentation},
        {"GeneratedDescription", NodeKind::GeneratedDescription},
    };
    for (const auto& [name, kind] : table) {
        if (s == name) return kind;
    }
    throw GraphError("unknown node kind: " + s);
}

EdgeRel parse_edge_rel(const std::string& s) {
    static const std::pair<const char*, EdgeRel> table[] = {
        {"DEFINES_CLASS", EdgeRel::DefinesClass},
        {"DEFINES_FUNCTION", EdgeRel::DefinesFunction},
        {"HAS_METHOD", EdgeRel::HasMethod},
        {"HAS_ATTRIBUTE", EdgeRel::HasAttribute},
        {"USED_IN", EdgeRel::UsedIn},
        {"HAS_DESCRIPTION", EdgeRel::HasDescription},
        {"HAS_DOCUMENTATION", EdgeRel::HasDocumentation},
    };
    for (const auto& [name, rel] : table) {
        if (s == name) return rel;
    }
    throw GraphError("unknown edge rel: " + s);
}

bool is_code_kind(NodeKind kind) {
    return kind == NodeKind::File || kind == NodeKind::Class || kind == NodeKind::Method ||
           kind == NodeKind::Function || kind == NodeKind::Attribute;
}

void PropertyGraph::add_node(Node node) {
    if (node.id.empty()) throw GraphError("node with empty id");
    if (by_id_.count(node.id)) throw GraphError("duplicate node id: " + node.id);
    by_id_[node.id] = nodes_.size();
    nodes_.push_back(std::move(node));
}

bool PropertyGraph::add_edge(Edge edge) {
    if (!contains(edge.src)) throw GraphError("edge source missing: " + edge.src);
    if (!contains(edge.dst)) throw GraphError("edge target missing: " + edge.dst);
    if (edges_.count(edge)) return false;
    add_edge_unchecked(std::move(edge));
    return true;
}

void PropertyGraph::add_edge_unchecked(Edge edge) {
    if (!contains(edge.src)) throw GraphError("edge source missing: " + edge.src);
    if (!contains(edge.dst)) throw GraphError("edge target missing: " + edge.dst);
    auto it = edges_.insert(std::move(edge));
    out_[it->src].push_back(&*it);
    in_[it->dst].push_back(&*it);
}

const Node* PropertyGraph::find(const std::string& id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &nodes_[it->second];
}

std::size_t PropertyGraph::count_kind(NodeKind kind) const {
    std::size_t n = 0;
    for (const Node& node : nodes_) {
        if (node.kind == kind) ++n;
    }
    return n;
}

const std::vector<const Edge*>& PropertyGraph::out_edges(const std::string& id) const {
    auto it = out_.find(id);
    return it == out_.end() ? no_edges_ : it->second;
}

const std::vector<const Edge*>& PropertyGraph::in_edges(const std::string& id) const {
    auto it = in_.find(id);
    return it == in_.end() ? no_edges_ : it->second;
}

std::vector<std::string> PropertyGraph::neighbors(const std::string& id) const {
    std::set<std::string> ids;
    for (const Edge* e : out_edges(id)) ids.insert(e->dst);
    for (const Edge* e : in_edges(id)) ids.insert(e->src);
    ids.erase(id);
    return {ids.begin(), ids.end()};
}

namespace {

NodeKind node_kind_of(EntityKind kind) {
    switch (kind) {
        case EntityKind::File: return NodeKind::File;
        case EntityKind::Class: return NodeKind::Class;
        case EntityKind::Method: return NodeKind::Method;
        case EntityKind::Function: return NodeKind::Function;
        case EntityKind::Attribute: return NodeKind::Attribute;
    }
    return NodeKind::File;
}

std::string span_text(const SourceSpan& s) {
    std::ostringstream os;
    os << s.file_path << ":" << s.start_line << "-" << s.end_line;
    return os.str();
}

Node entity_node(const CodeEntity& e, const std::string& path) {
    Node n;
    n.id = e.qualified_name;
    n.kind = node_kind_of(e.kind);
    n.name = e.name;
    n.qualified_name = e.qualified_name;
    n.path = path;
    n.span = e.span;
    n.text = e.source_text;
    return n;
}

Node doc_node(const CodeEntity& owner, const std::string& path) {
    Node n;
    n.id = owner.qualified_name + "#doc";
    n.kind = NodeKind::Documentation;
    n.name = owner.name;
    n.qualified_name = n.id;
    n.path = path;
    n.text = owner.docstring;
    return n;
}

} // namespace

PropertyGraph build_graph(const std::vector<FileParse>& files, const std::vector<UsageRef>& usages,
                          std::vector<std::string>* diagnostics) {
    PropertyGraph g;
    std::map<std::string, SourceSpan> seen; // qualified name -> first span

    auto add_checked = [&](Node node, const SourceSpan& span) {
        auto it = seen.find(node.id);
        if (it != seen.end()) {
            throw GraphError("duplicate qualified name '" + node.id + "' at " + span_text(it->second) +
                             " and " + span_text(span));
        }
        seen[node.id] = span;
        g.add_node(std::move(node));
    };

    // Nodes first, then structural edges, so cross-file parents resolve.
    for (const FileParse& fp : files) {
        if (fp.file.qualified_name.empty() && fp.entities.empty()) continue; // unreadable stub
        const std::string& path = fp.file.span.file_path;
        add_checked(entity_node(fp.file, path), fp.file.span);
        if (!fp.file.docstring.empty()) {
            g.add_node(doc_node(fp.file, path));
        }
        for (const CodeEntity& e : fp.entities) {
            add_checked(entity_node(e, path), e.span);
            if (!e.docstring.empty()) {
                g.add_node(doc_node(e, path));
            }
        }
    }

    for (const FileParse& fp : files) {
        if (fp.file.qualified_name.empty() && fp.entities.empty()) continue;
        const std::string& file_qn = fp.file.qualified_name;
        if (!fp.file.docstring.empty()) {
            g.add_edge({file_qn, EdgeRel::HasDocumentation, file_qn + "#doc"});
        }
        for (const CodeEntity& e : fp.entities) {
            if (!e.docstring.empty()) {
                g.add_edge({e.qualified_name, EdgeRel::HasDocumentation, e.qualified_name + "#doc"});
            }
            switch (e.kind) {
                case EntityKind::Class:
                    // Classes hang off their file even when lexically nested.
                    g.add_edge({file_qn, EdgeRel::DefinesClass, e.qualified_name});
                    break;
                case EntityKind::Method:
                    g.add_edge({e.parent_qualified_name, EdgeRel::HasMethod, e.qualified_name});
                    break;
                case EntityKind::Function:
                    g.add_edge({e.parent_qualified_name, EdgeRel::DefinesFunction, e.qualified_name});
                    break;
                case EntityKind::Attribute:
                    g.add_edge({e.parent_qualified_name, EdgeRel::HasAttribute, e.qualified_name});
                    break;
                case EntityKind::File:
                    break;
            }
        }
    }

    for (const UsageRef& u : usages) {
        if (!g.contains(u.used_qualified_name) || !g.contains(u.user_qualified_name)) {
            if (diagnostics) {
                diagnostics->push_back("usage endpoint missing: " + u.used_qualified_name + " -> " +
                                       u.user_qualified_name);
            }
            continue;
        }
        g.add_edge({u.used_qualified_name, EdgeRel::UsedIn, u.user_qualified_name});
    }
    return g;
}

PropertyGraph build_graph(const RepoParse& parse, std::vector<std::string>* diagnostics) {
    return build_graph(parse.files, parse.usages, diagnostics);
}

std::vector<std::string> validate_schema(const PropertyGraph& graph) {
    std::vector<std::string> violations;

    for (const Edge& e : graph.edges()) {
        const Node* src = graph.find(e.src);
        const Node* dst = graph.find(e.dst);
        std::ostringstream os;
        os << e.src << " -[" << to_string(e.rel) << "]-> " << e.dst;
        const std::string edge_text = os.str();
        if (!src || !dst) {
            violations.push_back(edge_text + ": dangling endpoint");
            continue;
        }
        bool ok = true;
        switch (e.rel) {
            case EdgeRel::DefinesClass:
                ok = src->kind == NodeKind::File && dst->kind == NodeKind::Class;
                break;
            case EdgeRel::DefinesFunction:
                ok = (src->kind == NodeKind::File || src->kind == NodeKind::Class ||
                      src->kind == NodeKind::Function || src->kind == NodeKind::Method) &&
                     dst->kind == NodeKind::Function;
                break;
            case EdgeRel::HasMethod:
                ok = src->kind == NodeKind::Class && dst->kind == NodeKind::Method;
                break;
            case EdgeRel::HasAttribute:
                ok = src->kind == NodeKind::Class && dst->kind == NodeKind::Attribute;
                break;
            case EdgeRel::UsedIn:
                ok = is_code_kind(src->kind) && is_code_kind(dst->kind);
                break;
            case EdgeRel::HasDescription:
                ok = is_code_kind(src->kind) && dst->kind == NodeKind::GeneratedDescription;
                break;
            case EdgeRel::HasDocumentation:
                ok = is_code_kind(src->kind) && dst->kind == NodeKind::Documentation;
                break;
        }
        if (!ok) {
            violations.push_back(edge_text + ": endpoint kinds " + to_string(src->kind) + " -> " +
                                 to_string(dst->kind) + " violate the relation");
        }
    }

    // Duplicate triples (only reachable through unchecked insertion).
    const Edge* prev = nullptr;
    for (const Edge& e : graph.edges()) {
        if (prev && *prev == e) {
            std::ostringstream os;
            os << "duplicate edge " << e.src << " -[" << to_string(e.rel) << "]-> " << e.dst;
            violations.push_back(os.str());
        }
        prev = &e;
    }

    // Doc/description nodes: exactly one incoming ownership edge, none out.
    for (const Node& n : graph.nodes()) {
        if (n.kind != NodeKind::Documentation && n.kind != NodeKind::GeneratedDescription) continue;
        EdgeRel want = n.kind == NodeKind::Documentation ? EdgeRel::HasDocumentation
                                                         : EdgeRel::HasDescription;
        std::size_t owners = 0;
        for (const Edge* e : graph.in_edges(n.id)) {
            if (e->rel == want) ++owners;
        }
        if (owners != 1) {
            violations.push_back(n.id + ": expected exactly 1 ownership edge, found " +
                                 std::to_string(owners));
        }
        if (!graph.out_edges(n.id).empty()) {
            violations.push_back(n.id + ": " + to_string(n.kind) + " node has outgoing edges");
        }
    }

    // Spans must nest inside the owning file's span.
    std::map<std::string, const Node*> file_by_path;
    for (const Node& n : graph.nodes()) {
        if (n.kind == NodeKind::File) file_by_path[n.path] = &n;
    }
    for (const Node& n : graph.nodes()) {
        if (!n.span || n.kind == NodeKind::File) continue;
        const SourceSpan& s = *n.span;
        if (s.start_line > s.end_line ||
            (s.start_line == s.end_line && s.start_col > s.end_col)) {
            violations.push_back(n.id + ": inverted span");
        }
        auto it = file_by_path.find(n.path);
        if (it != file_by_path.end() && it->second->span &&
            !strictly_contains(*it->second->span, s)) {
            violations.push_back(n.id + ": span escapes file bounds");
        }
    }
    return violations;
}

Subgraph n_hop_subgraph(const PropertyGraph& graph, const std::set<std::string>& seeds, int n) {
    for (const std::string& s : seeds) {
        if (!graph.contains(s)) throw GraphError("unknown seed id: " + s);
    }
    std::set<std::string> visited(seeds.begin(), seeds.end());
    std::deque<std::pair<std::string, int>> frontier;
    for (const std::string& s : seeds) frontier.emplace_back(s, 0);
    while (!frontier.empty()) {
        auto [id, dist] = frontier.front();
        frontier.pop_front();
        if (dist >= n) continue;
        for (const std::string& nb : graph.neighbors(id)) {
            if (visited.insert(nb).second) frontier.emplace_back(nb, dist + 1);
        }
    }
    Subgraph sub;
    sub.node_ids.assign(visited.begin(), visited.end());
    sub.edges = induced_edges(graph, visited);
    sub.seed_ids.assign(seeds.begin(), seeds.end());
    return sub;
}

std::vector<Edge> induced_edges(const PropertyGraph& graph, const std::set<std::string>& node_ids) {
    std::vector<Edge> edges;
    for (const Edge& e : graph.edges()) {
        if (node_ids.count(e.src) && node_ids.count(e.dst)) edges.push_back(e);
    }
    return edges;
}

} // namespace codegraph
