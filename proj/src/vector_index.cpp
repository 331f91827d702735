// SPDX-License-Identifier: Apache-2.0
#include "codegraph/vector_index.hpp"

#include <algorithm>
#include <map>

#include "codegraph/errors.hpp"

namespace codegraph {

VectorIndex build_vector_index(const PropertyGraph& graph, Embedder& embedder) {
    VectorIndex index;
    index.dimension = embedder.dimension();
    for (const Node& n : graph.nodes()) {
        bool is_doc = n.kind == NodeKind::Documentation;
        bool is_desc = n.kind == NodeKind::GeneratedDescription;
        if (!is_doc && !is_desc) continue;
        EdgeRel want = is_doc ? EdgeRel::HasDocumentation : EdgeRel::HasDescription;
        std::string owner;
        for (const Edge* e : graph.in_edges(n.id)) {
            if (e->rel == want) {
                owner = e->src;
                break;
            }
        }
        if (owner.empty()) {
            throw GraphError(n.id + ": no ownership edge, cannot build vector index");
        }
        index.entries.push_back({n.id, owner, embedder.embed(n.text)});
    }
    std::sort(index.entries.begin(), index.entries.end(),
              [](const VectorEntry& a, const VectorEntry& b) { return a.node_id < b.node_id; });
    return index;
}

std::vector<ScoredHit> search_vector(const VectorIndex& index, const std::vector<double>& query_vec,
                                     std::size_t k, double threshold) {
    if (query_vec.size() != index.dimension) {
        throw InputError("query vector dimension " + std::to_string(query_vec.size()) +
                         " does not match index dimension " + std::to_string(index.dimension));
    }
    if (k == 0) return {};

    std::map<std::string, double> best; // owner id -> max cosine
    for (const VectorEntry& e : index.entries) {
        double score = cosine_similarity(query_vec, e.vector);
        auto it = best.find(e.owner_id);
        if (it == best.end() || score > it->second) best[e.owner_id] = score;
    }
    std::vector<ScoredHit> hits;
    for (const auto& [owner, score] : best) {
        if (score >= threshold) hits.push_back({owner, score, HitSource::Vector});
    }
    std::sort(hits.begin(), hits.end(), [](const ScoredHit& a, const ScoredHit& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.node_id < b.node_id;
    });
    if (hits.size() > k) hits.resize(k);
    return hits;
}

} // namespace codegraph
