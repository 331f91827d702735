// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "codegraph/graph.hpp"

namespace codegraph {

/// Writes the graph as UTF-8 JSONL: a header line, then node records
/// sorted by id, then edge records sorted by (src, rel, dst). Bytes are
/// deterministic for a given graph. Throws InputError on write failure.
void persist_graph(const PropertyGraph& graph, const std::string& path);

/// Serializes to the same JSONL layout in memory.
std::string graph_to_jsonl(const PropertyGraph& graph);

/// Loads a file written by persist_graph. Malformed records and unknown
/// kind/rel strings raise GraphError naming the offending line.
PropertyGraph load_graph(const std::string& path);
PropertyGraph graph_from_jsonl(const std::string& text);

} // namespace codegraph
