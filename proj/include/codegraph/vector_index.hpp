// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "codegraph/embedding.hpp"
#include "codegraph/graph.hpp"
#include "codegraph/scored_hit.hpp"

namespace codegraph {

/// One embedded Documentation/GeneratedDescription node plus the code node
/// it describes.
struct VectorEntry {
    std::string node_id;  // the doc/description node
    std::string owner_id; // the described code node
    std::vector<double> vector;
};

struct VectorIndex {
    std::vector<VectorEntry> entries; // sorted by node_id
    std::size_t dimension = 0;
};

/// Embeds the text of every Documentation and GeneratedDescription node.
/// A doc/description node without its ownership edge is a GraphError.
VectorIndex build_vector_index(const PropertyGraph& graph, Embedder& embedder);

/// Exact cosine scan. Hits carry owner ids with per-owner max score,
/// filtered to >= threshold, sorted (score desc, owner id asc), first k.
/// Dimension mismatch is an InputError.
std::vector<ScoredHit> search_vector(const VectorIndex& index, const std::vector<double>& query_vec,
                                     std::size_t k, double threshold);

} // namespace codegraph
