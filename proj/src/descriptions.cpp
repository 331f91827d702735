// SPDX-License-Identifier: Apache-2.0
#include "codegraph/descriptions.hpp"

#include <algorithm>

#include "codegraph/errors.hpp"
#include "codegraph/pysource.hpp"

namespace codegraph {

namespace {

std::string first_line_of(const std::string& text) {
    std::size_t nl = text.find('\n');
    return nl == std::string::npos ? text : text.substr(0, nl);
}

std::string join(const std::vector<std::string>& items, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

std::string fallback_description(const Node& node) {
    const std::string header = entity_header_line(node.text);
    DefHeader def = parse_def_header(header);
    const std::string params = def.valid ? join(def.params, ", ") : "";

    std::string doc = entity_docstring(node.text);
    std::string doc_line = doc.empty() ? "no documentation" : first_line_of(doc);

    std::vector<std::string> callees = callee_names(node.text);
    std::string calls = callees.empty() ? "none" : join(callees, ", ");

    std::string out;
    out += to_string(node.kind);
    out += " `" + node.qualified_name + "`(" + params + "): ";
    out += doc_line;
    out += ". Calls: " + calls + ".";
    return out;
}

} // namespace

DescriptionRecord generate_description(const Node& node, LlmClient* llm, const PromptCatalog* catalog) {
    if (node.kind != NodeKind::Class && node.kind != NodeKind::Method &&
        node.kind != NodeKind::Function) {
        throw InputError("descriptions cover Class/Method/Function nodes, got " +
                         std::string(to_string(node.kind)) + " for " + node.id);
    }
    if (llm && catalog) {
        try {
            ChatRequest req;
            req.messages.push_back(
                {"system", "You summarize source code precisely and briefly."});
            req.messages.push_back({"user", catalog->render("describe", {
                                                {"kind", to_string(node.kind)},
                                                {"qualified_name", node.qualified_name},
                                                {"signature", entity_header_line(node.text)},
                                                {"docstring", entity_docstring(node.text)},
                                                {"source", node.text},
                                            })});
            LlmExchange ex = llm->chat(req);
            if (!ex.response_text.empty()) {
                return {node.id, ex.response_text, "llm"};
            }
        } catch (const Error&) {
            // fall through to the deterministic template
        }
    }
    return {node.id, fallback_description(node), "fallback"};
}

std::size_t attach_descriptions(PropertyGraph& graph, LlmClient* llm, const PromptCatalog* catalog) {
    std::vector<std::string> eligible;
    for (const Node& n : graph.nodes()) {
        if (n.kind == NodeKind::Class || n.kind == NodeKind::Method ||
            n.kind == NodeKind::Function) {
            if (!graph.contains(n.id + "#desc")) eligible.push_back(n.id);
        }
    }
    std::sort(eligible.begin(), eligible.end());

    for (const std::string& id : eligible) {
        // add_node may reallocate node storage, so look the owner up fresh
        // each round and copy what the description node needs before adding.
        const Node& owner = *graph.find(id);
        DescriptionRecord rec = generate_description(owner, llm, catalog);
        Node d;
        d.id = id + "#desc";
        d.kind = NodeKind::GeneratedDescription;
        d.name = owner.name;
        d.qualified_name = d.id;
        d.path = owner.path;
        d.text = rec.text;
        graph.add_node(std::move(d));
        graph.add_edge({id, EdgeRel::HasDescription, id + "#desc"});
    }
    return eligible.size();
}

} // namespace codegraph
