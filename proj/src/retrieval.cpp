// SPDX-License-Identifier: Apache-2.0
#include "codegraph/retrieval.hpp"

#include <algorithm>
#include <cctype>

#include <nlohmann/json.hpp>

#include "codegraph/errors.hpp"
#include "codegraph/pysource.hpp"

namespace codegraph {

namespace {

using ordered_json = nlohmann::ordered_json;

struct QueryWord {
    std::string text;
    bool call = false; // word ended in "()"
};

/// Whitespace-split words with edge punctuation stripped; a "()" suffix is
/// recorded instead of stripped blindly.
std::vector<QueryWord> query_words(const std::string& query) {
    std::vector<QueryWord> out;
    std::size_t i = 0;
    const std::size_t n = query.size();
    while (i < n) {
        while (i < n && std::isspace(static_cast<unsigned char>(query[i]))) ++i;
        std::size_t j = i;
        while (j < n && !std::isspace(static_cast<unsigned char>(query[j]))) ++j;
        if (j > i) {
            std::string w = query.substr(i, j - i);
            auto word_char = [](char c) {
                return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
            };
            std::size_t a = 0;
            while (a < w.size() && !word_char(w[a])) ++a;
            std::size_t b = w.size();
            while (b > a && !word_char(w[b - 1]) && w[b - 1] != ')') --b;
            bool call = false;
            if (b >= a + 2 && w[b - 1] == ')' && w[b - 2] == '(') {
                call = true;
                b -= 2;
            }
            while (b > a && !word_char(w[b - 1]) && w[b - 1] != '.') --b;
            // inner dots stay ("util.add"), trailing sentence dots go
            while (b > a && w[b - 1] == '.') --b;
            if (b > a) out.push_back({w.substr(a, b - a), call});
        }
        i = j;
    }
    return out;
}

bool is_lower_ident(const std::string& s) {
    if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s) {
        unsigned char u = static_cast<unsigned char>(c);
        if (!(std::islower(u) || std::isdigit(u) || c == '_')) return false;
    }
    return true;
}

/// Initial capital, at least one lowercase and one interior capital, so
/// sentence-initial words do not qualify.
bool is_camel_case(const std::string& s) {
    if (s.size() < 2 || !std::isupper(static_cast<unsigned char>(s[0]))) return false;
    bool any_lower = false;
    bool interior_upper = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        unsigned char u = static_cast<unsigned char>(s[i]);
        if (!std::isalnum(u)) return false;
        if (std::islower(u)) any_lower = true;
        if (i > 0 && std::isupper(u)) interior_upper = true;
    }
    return any_lower && interior_upper;
}

bool is_dotted_lower(const std::string& s) {
    if (s.find('.') == std::string::npos) return false;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t dot = s.find('.', start);
        std::string part =
            dot == std::string::npos ? s.substr(start) : s.substr(start, dot - start);
        if (!is_lower_ident(part)) return false;
        if (dot == std::string::npos) return true;
        start = dot + 1;
    }
    return false;
}

std::string lowercase(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

void push_unique(std::vector<std::string>& v, const std::string& s) {
    if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

QueryEntities heuristic_entities(const std::string& query) {
    // Kind words plus the English glue that tends to sit next to them.
    static const std::set<std::string> stop = {
        "function", "functions", "method", "methods", "class", "classes", "module", "modules",
        "a",        "an",        "and",    "at",      "by",    "call",    "calls",  "can",
        "do",       "does",      "for",    "from",    "how",   "in",      "is",     "it",
        "its",      "make",      "new",    "not",     "of",    "on",      "or",     "should",
        "that",     "the",       "this",   "to",      "use",   "using",   "what",   "when",
        "where",    "which",     "will",   "with"};
    QueryEntities out;
    std::vector<QueryWord> words = query_words(query);
    for (std::size_t i = 0; i < words.size(); ++i) {
        const std::string& w = words[i].text;
        if (is_camel_case(w)) {
            push_unique(out.classes, w);
            continue;
        }
        if (is_dotted_lower(w)) {
            push_unique(out.modules, w);
            continue;
        }
        if (!is_lower_ident(w) || stop.count(w)) continue;
        bool fn_adjacent = false;
        bool method_adjacent = false;
        if (i > 0) {
            std::string prev = lowercase(words[i - 1].text);
            if (prev == "function") fn_adjacent = true;
            if (prev == "method") method_adjacent = true;
        }
        if (i + 1 < words.size()) {
            std::string next = lowercase(words[i + 1].text);
            if (next == "function" || next == "functions") fn_adjacent = true;
            if (next == "method" || next == "methods") method_adjacent = true;
        }
        if (method_adjacent) {
            push_unique(out.methods, w);
        } else if (fn_adjacent || words[i].call) {
            push_unique(out.functions, w);
        }
    }
    return out;
}

/// Body of the first fenced block if any, otherwise the text unchanged.
std::string strip_fences(const std::string& text) {
    std::size_t open = text.find("```");
    if (open == std::string::npos) return text;
    std::size_t nl = text.find('\n', open);
    if (nl == std::string::npos) return text;
    std::size_t close = text.find("```", nl + 1);
    if (close == std::string::npos) return text.substr(nl + 1);
    return text.substr(nl + 1, close - nl - 1);
}

bool read_string_list(const ordered_json& obj, const char* key, std::vector<std::string>& out) {
    if (!obj.contains(key)) return true;
    const ordered_json& arr = obj.at(key);
    if (!arr.is_array()) return false;
    for (const ordered_json& item : arr) {
        if (!item.is_string()) return false;
        std::string s = item.get<std::string>();
        if (!s.empty()) out.push_back(s);
    }
    return true;
}

std::string scoring_text(const Node& node) {
    switch (node.kind) {
        case NodeKind::Documentation:
        case NodeKind::GeneratedDescription:
            return node.text;
        case NodeKind::File:
            return node.name + "\n" + module_docstring(node.text);
        case NodeKind::Class:
        case NodeKind::Function:
        case NodeKind::Method:
            return node.name + "\n" + entity_header_line(node.text) + "\n" +
                   entity_docstring(node.text);
        case NodeKind::Attribute:
            return node.name;
    }
    return node.name;
}

const char* to_string(HitSource source) {
    return source == HitSource::Fulltext ? "fulltext" : "vector";
}

bool score_order(const ScoredHit& a, const ScoredHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.node_id < b.node_id;
}

} // namespace

GraphIndexes build_indexes(const PropertyGraph& graph, Embedder& embedder) {
    return {build_fulltext_index(graph), build_vector_index(graph, embedder)};
}

QueryEntities extract_query_entities(const std::string& query, LlmClient* llm,
                                     const PromptCatalog* catalog, std::string* source) {
    if (source) *source = "heuristic";
    if (llm && catalog && catalog->has("extract_entities")) {
        try {
            ChatRequest req;
            req.messages.push_back(
                {"system", "You map questions about a codebase to identifier lists."});
            req.messages.push_back({"user", catalog->render("extract_entities", {{"query", query}})});
            LlmExchange ex = llm->chat(req);
            ordered_json obj = ordered_json::parse(strip_fences(ex.response_text));
            if (obj.is_object()) {
                QueryEntities out;
                if (read_string_list(obj, "classes", out.classes) &&
                    read_string_list(obj, "functions", out.functions) &&
                    read_string_list(obj, "methods", out.methods) &&
                    read_string_list(obj, "modules", out.modules)) {
                    if (source) *source = "llm";
                    return out;
                }
            }
        } catch (const std::exception&) {
            // transport trouble or an unparseable reply: fall back
        }
    }
    return heuristic_entities(query);
}

std::vector<ScoredHit> initial_retrieval(const GraphIndexes& indexes, Embedder& embedder,
                                         const std::string& query, const QueryEntities& entities,
                                         const RetrievalConfig& config) {
    std::string terms;
    auto append_all = [&terms](const std::vector<std::string>& items) {
        for (const std::string& s : items) {
            if (!terms.empty()) terms += ' ';
            terms += s;
        }
    };
    append_all(entities.classes);
    append_all(entities.functions);
    append_all(entities.methods);
    append_all(entities.modules);

    std::vector<ScoredHit> fulltext_hits;
    if (!terms.empty()) {
        fulltext_hits =
            search_fulltext(indexes.fulltext, terms, config.seed_k, config.fulltext_threshold);
    }

    std::vector<ScoredHit> vector_hits;
    std::vector<double> query_vec = embedder.embed(query);
    if (l2_norm(query_vec) > 0.0) {
        vector_hits =
            search_vector(indexes.vectors, query_vec, config.seed_k, config.vector_threshold);
    }

    std::map<std::string, ScoredHit> merged;
    for (const ScoredHit& h : fulltext_hits) merged.emplace(h.node_id, h);
    for (const ScoredHit& h : vector_hits) {
        auto [it, inserted] = merged.emplace(h.node_id, h);
        if (!inserted && h.score > it->second.score) it->second = h;
    }

    std::vector<ScoredHit> out;
    out.reserve(merged.size());
    for (const auto& [id, hit] : merged) out.push_back(hit);
    std::sort(out.begin(), out.end(), score_order);
    return out;
}

Subgraph expand_seeds(const PropertyGraph& graph, const std::set<std::string>& seeds, int hops) {
    return n_hop_subgraph(graph, seeds, hops);
}

std::pair<Subgraph, std::map<std::string, double>> filter_subgraph(const PropertyGraph& graph,
                                                                   const Subgraph& sub,
                                                                   const std::string& query,
                                                                   const RetrievalConfig& config,
                                                                   Embedder& embedder) {
    std::vector<double> query_vec = embedder.embed(query);
    std::set<std::string> seed_set(sub.seed_ids.begin(), sub.seed_ids.end());

    struct Candidate {
        std::string id;
        double score;
        bool seed;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(sub.node_ids.size());
    for (const std::string& id : sub.node_ids) {
        const Node* node = graph.find(id);
        if (!node) throw GraphError("subgraph node not in graph: " + id);
        double score = cosine_similarity(query_vec, embedder.embed(scoring_text(*node)));
        candidates.push_back({id, score, seed_set.count(id) != 0});
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.id < b.id;
    });

    const std::size_t cap = std::max(config.filter_k, seed_set.size());
    std::vector<Candidate> kept;
    kept.reserve(std::min(cap, candidates.size()));
    for (const Candidate& c : candidates) {
        if (c.seed) kept.push_back(c);
    }
    for (const Candidate& c : candidates) {
        if (kept.size() >= cap) break;
        if (!c.seed) kept.push_back(c);
    }
    std::sort(kept.begin(), kept.end(), [](const Candidate& a, const Candidate& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.id < b.id;
    });

    Subgraph out;
    std::map<std::string, double> scores;
    std::set<std::string> kept_ids;
    for (const Candidate& c : kept) {
        out.node_ids.push_back(c.id);
        kept_ids.insert(c.id);
        scores[c.id] = c.score;
    }
    out.edges = induced_edges(graph, kept_ids);
    out.seed_ids = sub.seed_ids;
    return {std::move(out), std::move(scores)};
}

RetrievalResult retrieve(const PropertyGraph& graph, const GraphIndexes& indexes,
                         Embedder& embedder, const std::string& query,
                         const RetrievalConfig& config, LlmClient* llm,
                         const PromptCatalog* catalog) {
    RetrievalResult result;
    RetrievalDiagnostics& diag = result.diagnostics;
    diag.hops = config.hops;

    diag.entities = extract_query_entities(query, llm, catalog, &diag.entity_source);
    result.seed_hits = initial_retrieval(indexes, embedder, query, diag.entities, config);

    std::set<std::string> seeds;
    for (const ScoredHit& h : result.seed_hits) seeds.insert(h.node_id);
    diag.seed_ids.assign(seeds.begin(), seeds.end());
    diag.seed_count = seeds.size();

    if (seeds.empty()) {
        diag.notes.push_back("no seeds retrieved; returning empty context");
        return result;
    }

    Subgraph expanded = expand_seeds(graph, seeds, config.hops);
    diag.expanded_count = expanded.node_ids.size();

    auto [filtered, scores] = filter_subgraph(graph, expanded, query, config, embedder);
    diag.filtered_count = filtered.node_ids.size();
    result.subgraph = std::move(filtered);
    result.node_scores = std::move(scores);
    return result;
}

std::string retrieval_result_to_json(const RetrievalResult& result) {
    ordered_json doc;

    ordered_json nodes = ordered_json::array();
    for (const std::string& id : result.subgraph.node_ids) {
        ordered_json n;
        n["id"] = id;
        auto it = result.node_scores.find(id);
        n["score"] = it != result.node_scores.end() ? it->second : 0.0;
        nodes.push_back(std::move(n));
    }
    doc["nodes"] = std::move(nodes);

    ordered_json edges = ordered_json::array();
    for (const Edge& e : result.subgraph.edges) {
        ordered_json rec;
        rec["src"] = e.src;
        rec["rel"] = to_string(e.rel);
        rec["dst"] = e.dst;
        edges.push_back(std::move(rec));
    }
    doc["edges"] = std::move(edges);

    ordered_json seeds = ordered_json::array();
    for (const ScoredHit& h : result.seed_hits) {
        ordered_json rec;
        rec["id"] = h.node_id;
        rec["score"] = h.score;
        rec["source"] = to_string(h.source);
        seeds.push_back(std::move(rec));
    }
    doc["seeds"] = std::move(seeds);

    const RetrievalDiagnostics& diag = result.diagnostics;
    ordered_json d;
    d["entities"] = {{"classes", diag.entities.classes},
                     {"functions", diag.entities.functions},
                     {"methods", diag.entities.methods},
                     {"modules", diag.entities.modules}};
    d["entity_source"] = diag.entity_source;
    d["seed_ids"] = diag.seed_ids;
    d["seed_count"] = diag.seed_count;
    d["expanded_count"] = diag.expanded_count;
    d["filtered_count"] = diag.filtered_count;
    d["hops"] = diag.hops;
    d["notes"] = diag.notes;
    doc["diagnostics"] = std::move(d);

    return doc.dump(2) + "\n";
}

} // namespace codegraph
