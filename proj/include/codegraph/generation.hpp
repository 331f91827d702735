// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "codegraph/graph.hpp"
#include "codegraph/llm.hpp"
#include "codegraph/prompts.hpp"

namespace codegraph {

/// Textual rendering of a subgraph, ready to drop into a prompt.
struct PromptContext {
    std::string context_text;
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    /// Set when the character budget forced nodes out of the rendering.
    bool truncated = false;
};

/// Renders one block per node in (kind, id) order: a `###` header with the
/// node's location, then the source in a python fence for code nodes or
/// the stored text for documentation/description nodes, followed by a
/// RELATIONS section listing `src -[REL]-> dst` per edge in sorted order.
/// When the rendering exceeds `budget` characters the lowest-scoring
/// non-seed nodes are dropped (score ascending, id descending) and the
/// text re-rendered until it fits; seeds are never dropped, so a rendering
/// of seeds alone that still exceeds the budget is cut hard at `budget`.
/// An empty subgraph renders the fixed no-context sentinel.
PromptContext serialize_subgraph(const PropertyGraph& graph, const Subgraph& sub,
                                 const std::map<std::string, double>& node_scores = {},
                                 std::size_t budget = 24000);

/// Two messages: the catalog's "generate_system" instructions and a
/// "generate_user" body that starts with the context text verbatim and
/// carries the task statement. Missing templates are a ConfigError.
std::vector<ChatMessage> build_generation_prompt(const std::string& query,
                                                 const PromptContext& ctx,
                                                 const PromptCatalog& catalog);

struct GeneratedCode {
    std::string code_text;
    std::string raw_response;
    std::string extraction; // "fenced" or "whole"
};

/// Sends the request and pulls code out of the reply: the first fenced
/// block when present, otherwise the whole trimmed response provided it
/// reads as code rather than prose. Empty replies and prose replies raise
/// ExtractionError; transport failures propagate.
GeneratedCode generate_code(const ChatRequest& request, LlmClient& llm);

} // namespace codegraph
