// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "codegraph/entities.hpp"
#include "codegraph/span.hpp"

namespace codegraph {

enum class NodeKind {
    File,
    Class,
    Method,
    Function,
    Attribute,
    Documentation,
    GeneratedDescription,
};

enum class EdgeRel {
    DefinesClass,
    DefinesFunction,
    HasMethod,
    HasAttribute,
    UsedIn,
    HasDescription,
    HasDocumentation,
};

const char* to_string(NodeKind kind);
const char* to_string(EdgeRel rel);
/// Parse the serialized forms ("Function", "USED_IN"). Throws GraphError
/// on unknown strings.
NodeKind parse_node_kind(const std::string& s);
EdgeRel parse_edge_rel(const std::string& s);

bool is_code_kind(NodeKind kind);

struct Node {
    std::string id;
    NodeKind kind = NodeKind::File;
    std::string name;
    std::string qualified_name;
    std::string path;
    std::optional<SourceSpan> span;
    /// Source slice for code nodes; docstring or description text otherwise.
    std::string text;
};

struct Edge {
    std::string src;
    EdgeRel rel;
    std::string dst;

    friend bool operator==(const Edge& a, const Edge& b) {
        return std::tie(a.src, a.rel, a.dst) == std::tie(b.src, b.rel, b.dst);
    }
    friend bool operator<(const Edge& a, const Edge& b) {
        return std::tie(a.src, a.rel, a.dst) < std::tie(b.src, b.rel, b.dst);
    }
};

/// Immutable-after-build property graph with id lookup and adjacency.
class PropertyGraph {
  public:
    /// Throws GraphError when the id already exists.
    void add_node(Node node);
    /// Endpoints must exist. Returns false for an exact duplicate triple
    /// without inserting it.
    bool add_edge(Edge edge);
    /// Inserts without the duplicate check, so schema validation can be
    /// exercised on deliberately malformed graphs.
    void add_edge_unchecked(Edge edge);

    const Node* find(const std::string& id) const;
    bool contains(const std::string& id) const { return find(id) != nullptr; }

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::multiset<Edge>& edges() const { return edges_; }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    std::size_t count_kind(NodeKind kind) const;

    const std::vector<const Edge*>& out_edges(const std::string& id) const;
    const std::vector<const Edge*>& in_edges(const std::string& id) const;
    /// Undirected neighbor ids, deduplicated, ascending.
    std::vector<std::string> neighbors(const std::string& id) const;

  private:
    std::vector<Node> nodes_;
    std::map<std::string, std::size_t> by_id_;
    std::multiset<Edge> edges_;
    std::map<std::string, std::vector<const Edge*>> out_;
    std::map<std::string, std::vector<const Edge*>> in_;
    static const std::vector<const Edge*> no_edges_;
};

/// A node subset plus its induced edges; `seed_ids` marks retrieval seeds.
struct Subgraph {
    std::vector<std::string> node_ids;
    std::vector<Edge> edges;
    std::vector<std::string> seed_ids;
};

struct RepoParse;

/// Materializes nodes and edges from parsed files and resolved usages.
/// Duplicate qualified names are a hard error naming both spans. Parse
/// problems that degrade (rather than abort) go to `diagnostics` when given.
PropertyGraph build_graph(const std::vector<FileParse>& files, const std::vector<UsageRef>& usages,
                          std::vector<std::string>* diagnostics = nullptr);
PropertyGraph build_graph(const RepoParse& parse, std::vector<std::string>* diagnostics = nullptr);

/// Schema conformance report; empty means valid.
std::vector<std::string> validate_schema(const PropertyGraph& graph);

/// Nodes within undirected distance `n` of any seed, with induced edges.
/// node_ids ascending. Throws GraphError for unknown seed ids.
Subgraph n_hop_subgraph(const PropertyGraph& graph, const std::set<std::string>& seeds, int n);

/// Induced edge set for an arbitrary node subset, sorted.
std::vector<Edge> induced_edges(const PropertyGraph& graph, const std::set<std::string>& node_ids);

} // namespace codegraph
