// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "codegraph/graph.hpp"
#include "codegraph/llm.hpp"
#include "codegraph/prompts.hpp"

namespace codegraph {

struct DescriptionRecord {
    std::string owner_id;
    std::string text;
    std::string origin; // "llm" or "fallback"
};

/// Describes one Class/Method/Function node. With a client, asks it using
/// the "describe" template; on failure, or with no client, falls back to a
/// deterministic template built from the node's signature, docstring and
/// call sites. Other node kinds are a precondition error.
DescriptionRecord generate_description(const Node& node, LlmClient* llm, const PromptCatalog* catalog);

/// Adds one GeneratedDescription node and HAS_DESCRIPTION edge per eligible
/// code node, in ascending NodeId order. Nodes already described are left
/// alone, so the operation is idempotent. Returns the number added.
std::size_t attach_descriptions(PropertyGraph& graph, LlmClient* llm, const PromptCatalog* catalog);

} // namespace codegraph
