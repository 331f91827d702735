// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "codegraph/graph.hpp"
#include "codegraph/scored_hit.hpp"

namespace codegraph {

/// Splits identifiers into lowercase tokens: separators are any
/// non-alphanumeric character plus camelCase boundaries. Digit runs glued
/// to letters stay attached ("v2" is one token).
std::vector<std::string> tokenize_identifier(const std::string& text);

/// BM25 posting lists over the name fields of code nodes.
struct FullTextIndex {
    /// token -> (node id, term frequency), sorted by node id.
    std::map<std::string, std::vector<std::pair<std::string, int>>> postings;
    std::map<std::string, int> doc_lengths;
    std::size_t doc_count = 0;
    double avg_doc_length = 0.0;
};

/// One document per Function/Method/Class/File node; document tokens are
/// tokenize_identifier(name) followed by tokenize_identifier(qualified_name).
FullTextIndex build_fulltext_index(const PropertyGraph& graph);

/// BM25 (k1=1.2, b=0.75, IDF floored at 0) over unique query tokens.
/// Hits with score >= threshold, sorted (score desc, node id asc), first k.
std::vector<ScoredHit> search_fulltext(const FullTextIndex& index, const std::string& query,
                                       std::size_t k, double threshold);

} // namespace codegraph
