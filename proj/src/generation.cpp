// SPDX-License-Identifier: Apache-2.0
#include "codegraph/generation.hpp"

#include <algorithm>
#include <set>

#include "codegraph/errors.hpp"
#include "codegraph/pysource.hpp"

namespace codegraph {

namespace {

constexpr const char* kEmptyContext = "### CONTEXT\n(no repository context retrieved)\n";

std::string strip_trailing_newlines(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
}

/// Node blocks in (kind, id) order plus the RELATIONS section for the
/// edges whose endpoints are both in `ids`.
std::string render_context(const PropertyGraph& graph, const std::vector<std::string>& ids,
                           const std::vector<Edge>& edges, std::size_t* edge_count) {
    if (ids.empty()) {
        if (edge_count) *edge_count = 0;
        return kEmptyContext;
    }

    std::vector<const Node*> ordered;
    ordered.reserve(ids.size());
    for (const std::string& id : ids) {
        const Node* node = graph.find(id);
        if (!node) throw GraphError("subgraph node not in graph: " + id);
        ordered.push_back(node);
    }
    std::sort(ordered.begin(), ordered.end(), [](const Node* a, const Node* b) {
        if (a->kind != b->kind) return static_cast<int>(a->kind) < static_cast<int>(b->kind);
        return a->id < b->id;
    });

    std::set<std::string> id_set(ids.begin(), ids.end());
    std::vector<Edge> kept_edges;
    for (const Edge& e : edges) {
        if (id_set.count(e.src) && id_set.count(e.dst)) kept_edges.push_back(e);
    }
    std::sort(kept_edges.begin(), kept_edges.end());
    if (edge_count) *edge_count = kept_edges.size();

    std::string out;
    bool first = true;
    for (const Node* node : ordered) {
        if (!first) out += "\n";
        first = false;
        out += "### ";
        out += to_string(node->kind);
        out += " " + node->qualified_name + " (" + node->path;
        if (node->span) {
            out += ":" + std::to_string(node->span->start_line) + "-" +
                   std::to_string(node->span->end_line);
        }
        out += ")\n";
        if (is_code_kind(node->kind)) {
            out += "```python\n" + strip_trailing_newlines(node->text) + "\n```\n";
        } else {
            out += strip_trailing_newlines(node->text) + "\n";
        }
    }
    out += "\n### RELATIONS\n";
    for (const Edge& e : kept_edges) {
        out += e.src + " -[";
        out += to_string(e.rel);
        out += "]-> " + e.dst + "\n";
    }
    return out;
}

} // namespace

PromptContext serialize_subgraph(const PropertyGraph& graph, const Subgraph& sub,
                                 const std::map<std::string, double>& node_scores,
                                 std::size_t budget) {
    std::vector<std::string> ids = sub.node_ids;
    std::set<std::string> seed_set(sub.seed_ids.begin(), sub.seed_ids.end());
    auto score_of = [&node_scores](const std::string& id) {
        auto it = node_scores.find(id);
        return it != node_scores.end() ? it->second : 0.0;
    };

    PromptContext ctx;
    while (true) {
        std::size_t edge_count = 0;
        std::string text = render_context(graph, ids, sub.edges, &edge_count);
        if (text.size() <= budget) {
            ctx.context_text = std::move(text);
            ctx.node_count = ids.size();
            ctx.edge_count = edge_count;
            return ctx;
        }
        // Over budget: shed the worst non-seed, worst id last so ties drop
        // deterministically.
        std::size_t drop = ids.size();
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (seed_set.count(ids[i])) continue;
            if (drop == ids.size() || score_of(ids[i]) < score_of(ids[drop]) ||
                (score_of(ids[i]) == score_of(ids[drop]) && ids[i] > ids[drop])) {
                drop = i;
            }
        }
        ctx.truncated = true;
        if (drop == ids.size()) {
            // Seeds alone exceed the budget: cut the rendering itself.
            ctx.context_text = text.substr(0, budget);
            ctx.node_count = ids.size();
            ctx.edge_count = edge_count;
            return ctx;
        }
        ids.erase(ids.begin() + static_cast<std::ptrdiff_t>(drop));
    }
}

std::vector<ChatMessage> build_generation_prompt(const std::string& query,
                                                 const PromptContext& ctx,
                                                 const PromptCatalog& catalog) {
    std::vector<ChatMessage> messages;
    messages.push_back({"system", catalog.render("generate_system", {})});
    messages.push_back({"user", catalog.render("generate_user", {{"context", ctx.context_text},
                                                                 {"query", query}})});
    return messages;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

/// First fenced block: content between an opening ``` line and the next
/// ``` line. Returns false when the response has no fence at all.
bool first_fenced_block(const std::string& text, std::string& out) {
    std::size_t open = 0;
    while (true) {
        open = text.find("```", open);
        if (open == std::string::npos) return false;
        if (open == 0 || text[open - 1] == '\n') break;
        open += 3;
    }
    std::size_t nl = text.find('\n', open);
    if (nl == std::string::npos) {
        out = "";
        return true;
    }
    std::size_t close = text.find("\n```", nl);
    std::string body = close == std::string::npos ? text.substr(nl + 1)
                                                  : text.substr(nl + 1, close - nl - 1);
    out = strip_trailing_newlines(std::move(body));
    return true;
}

/// Prose detector for unfenced replies. Works on a copy with string and
/// comment interiors blanked, flagging sentence punctuation and adjacent
/// bare words that no Python grammar rule separates.
bool reads_as_prose(const std::string& text) {
    std::string blanked = blank_strings_and_comments(text);
    std::vector<std::string> lines;
    {
        std::string cur;
        for (char c : blanked) {
            if (c == '\n') {
                lines.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        lines.push_back(cur);
    }
    for (const std::string& line : lines) {
        std::string t = line;
        while (!t.empty() && (t.back() == ' ' || t.back() == '\t' || t.back() == '\r')) t.pop_back();
        if (t.size() >= 2 && t.back() == '.' &&
            std::isalpha(static_cast<unsigned char>(t[t.size() - 2]))) {
            return true;
        }
    }

    std::vector<NameChain> chains = scan_name_chains(text, 1, 0);
    for (std::size_t i = 0; i + 1 < chains.size(); ++i) {
        const NameChain& a = chains[i];
        const NameChain& b = chains[i + 1];
        if (a.line != b.line) continue;
        if (a.parts.size() != 1 || b.parts.size() != 1) continue;
        if (a.is_call || a.assigned) continue;
        if (a.parts[0] == "match" || a.parts[0] == "case" || a.parts[0] == "type") continue;
        std::size_t a_end = static_cast<std::size_t>(a.col) + a.parts[0].size();
        if (static_cast<std::size_t>(b.col) <= a_end) continue;
        if (a.line - 1 >= static_cast<int>(lines.size())) continue;
        const std::string& raw = lines[static_cast<std::size_t>(a.line - 1)];
        if (static_cast<std::size_t>(b.col) > raw.size()) continue;
        bool ws_only = true;
        for (std::size_t p = a_end; p < static_cast<std::size_t>(b.col); ++p) {
            if (raw[p] != ' ' && raw[p] != '\t') {
                ws_only = false;
                break;
            }
        }
        if (ws_only) return true;
    }
    return false;
}

} // namespace

GeneratedCode generate_code(const ChatRequest& request, LlmClient& llm) {
    LlmExchange ex = llm.chat(request);
    GeneratedCode out;
    out.raw_response = ex.response_text;

    std::string fenced;
    if (first_fenced_block(ex.response_text, fenced)) {
        if (fenced.empty() || trim(fenced).empty()) {
            throw ExtractionError("fenced block in the response is empty", ex.response_text);
        }
        out.code_text = fenced;
        out.extraction = "fenced";
        return out;
    }

    std::string whole = trim(ex.response_text);
    if (whole.empty()) throw ExtractionError("empty response", ex.response_text);
    if (reads_as_prose(whole)) {
        throw ExtractionError("response contains no code block and reads as prose",
                              ex.response_text);
    }
    out.code_text = whole;
    out.extraction = "whole";
    return out;
}

} // namespace codegraph
