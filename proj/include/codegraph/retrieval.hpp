// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "codegraph/embedding.hpp"
#include "codegraph/fulltext.hpp"
#include "codegraph/graph.hpp"
#include "codegraph/llm.hpp"
#include "codegraph/prompts.hpp"
#include "codegraph/scored_hit.hpp"
#include "codegraph/vector_index.hpp"

namespace codegraph {

/// Identifier-shaped entities pulled out of a user query, grouped by the
/// schema element they align with.
struct QueryEntities {
    std::vector<std::string> classes;
    std::vector<std::string> functions;
    std::vector<std::string> methods;
    std::vector<std::string> modules;

    bool empty() const {
        return classes.empty() && functions.empty() && methods.empty() && modules.empty();
    }
};

struct RetrievalConfig {
    std::size_t seed_k = 10;   // per-channel seed cap
    int hops = 2;              // expansion depth
    std::size_t filter_k = 25; // node cap after pruning
    double fulltext_threshold = 0.0;
    double vector_threshold = 0.25;
};

/// Stage-by-stage record of one pipeline run, serialized with the result.
struct RetrievalDiagnostics {
    QueryEntities entities;
    std::string entity_source; // "llm" or "heuristic"
    std::vector<std::string> seed_ids;
    std::size_t seed_count = 0;
    std::size_t expanded_count = 0;
    std::size_t filtered_count = 0;
    int hops = 0;
    std::vector<std::string> notes;
};

struct RetrievalResult {
    Subgraph subgraph;
    std::vector<ScoredHit> seed_hits;
    /// Filtering score for every kept node.
    std::map<std::string, double> node_scores;
    RetrievalDiagnostics diagnostics;
};

/// The two search indexes the pipeline reads, built from one graph.
struct GraphIndexes {
    FullTextIndex fulltext;
    VectorIndex vectors;
};

GraphIndexes build_indexes(const PropertyGraph& graph, Embedder& embedder);

/// Entity extraction. With an LLM the "extract_entities" template is sent
/// and the reply parsed as a JSON object carrying the four lists; any
/// failure falls back to the offline heuristic (CamelCase words become
/// classes, identifiers next to "function"/"method" or ending in "()"
/// become functions/methods, dotted lowercase paths become modules).
/// Never fatal. `source` reports which path produced the result.
QueryEntities extract_query_entities(const std::string& query, LlmClient* llm = nullptr,
                                     const PromptCatalog* catalog = nullptr,
                                     std::string* source = nullptr);

/// Seed selection: BM25 over the concatenated entity identifiers, unioned
/// with a cosine search over embed(query). Per-channel caps and thresholds
/// apply before the union; duplicates keep the higher score; sorted
/// (score desc, id asc).
std::vector<ScoredHit> initial_retrieval(const GraphIndexes& indexes, Embedder& embedder,
                                         const std::string& query, const QueryEntities& entities,
                                         const RetrievalConfig& config);

/// Undirected n-hop expansion around the seeds.
Subgraph expand_seeds(const PropertyGraph& graph, const std::set<std::string>& seeds, int hops);

/// Scores every node by cosine(embed(query), embed(scoring text)), keeping
/// all seeds plus the best other nodes until filter_k remain, then
/// recomputes induced edges. Scoring text is the stored text for
/// Documentation/GeneratedDescription nodes and name + signature +
/// docstring for code nodes. Kept node ids are ordered (score desc,
/// id asc).
std::pair<Subgraph, std::map<std::string, double>> filter_subgraph(const PropertyGraph& graph,
                                                                   const Subgraph& sub,
                                                                   const std::string& query,
                                                                   const RetrievalConfig& config,
                                                                   Embedder& embedder);

/// Full pipeline: entities -> seeds -> expansion -> filtering. An empty
/// seed set yields an empty result plus a diagnostic note, not an error.
RetrievalResult retrieve(const PropertyGraph& graph, const GraphIndexes& indexes,
                         Embedder& embedder, const std::string& query,
                         const RetrievalConfig& config, LlmClient* llm = nullptr,
                         const PromptCatalog* catalog = nullptr);

/// Deterministic JSON rendering used by `query --json` and eval reports.
std::string retrieval_result_to_json(const RetrievalResult& result);

} // namespace codegraph
