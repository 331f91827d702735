// SPDX-License-Identifier: Apache-2.0
#include "codegraph/fulltext.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

namespace codegraph {

namespace {

bool is_alnum(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}
bool is_upper(char c) {
    return std::isupper(static_cast<unsigned char>(c)) != 0;
}

constexpr double kBm25K1 = 1.2;
constexpr double kBm25B = 0.75;

} // namespace

std::vector<std::string> tokenize_identifier(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    auto flush = [&]() {
        if (!cur.empty()) {
            for (char& c : cur) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            tokens.push_back(cur);
            cur.clear();
        }
    };
    const std::size_t n = text.size();
    for (std::size_t i = 0; i < n; ++i) {
        char c = text[i];
        if (!is_alnum(c)) {
            flush();
            continue;
        }
        if (!cur.empty() && is_upper(c)) {
            char prev = cur.back();
            // lower/digit followed by upper starts a new word; an upper run
            // followed by a lower keeps only its last capital ("HTTPServer"
            // becomes http + server).
            bool next_lower = i + 1 < n && std::islower(static_cast<unsigned char>(text[i + 1]));
            if (!is_upper(prev) || next_lower) flush();
        }
        cur.push_back(c);
    }
    flush();
    return tokens;
}

FullTextIndex build_fulltext_index(const PropertyGraph& graph) {
    FullTextIndex index;
    long long total_len = 0;

    std::vector<const Node*> docs;
    for (const Node& n : graph.nodes()) {
        if (n.kind == NodeKind::Function || n.kind == NodeKind::Method ||
            n.kind == NodeKind::Class || n.kind == NodeKind::File) {
            docs.push_back(&n);
        }
    }
    std::sort(docs.begin(), docs.end(), [](const Node* a, const Node* b) { return a->id < b->id; });

    for (const Node* n : docs) {
        std::vector<std::string> tokens = tokenize_identifier(n->name);
        std::vector<std::string> qn_tokens = tokenize_identifier(n->qualified_name);
        tokens.insert(tokens.end(), qn_tokens.begin(), qn_tokens.end());

        index.doc_lengths[n->id] = static_cast<int>(tokens.size());
        total_len += static_cast<long long>(tokens.size());
        std::map<std::string, int> tf;
        for (const std::string& t : tokens) ++tf[t];
        for (const auto& [token, freq] : tf) {
            index.postings[token].emplace_back(n->id, freq);
        }
    }
    index.doc_count = docs.size();
    index.avg_doc_length = docs.empty() ? 0.0 : static_cast<double>(total_len) / docs.size();
    return index;
}

std::vector<ScoredHit> search_fulltext(const FullTextIndex& index, const std::string& query,
                                       std::size_t k, double threshold) {
    if (k == 0 || index.doc_count == 0) return {};
    std::vector<std::string> raw = tokenize_identifier(query);
    std::set<std::string> terms(raw.begin(), raw.end());
    if (terms.empty()) return {};

    const double n_docs = static_cast<double>(index.doc_count);
    std::map<std::string, double> scores; // candidate docs share >= 1 term
    for (const std::string& term : terms) {
        auto it = index.postings.find(term);
        if (it == index.postings.end()) continue;
        const auto& posting = it->second;
        const double df = static_cast<double>(posting.size());
        const double idf = std::max(0.0, std::log((n_docs - df + 0.5) / (df + 0.5)));
        for (const auto& [doc_id, tf] : posting) {
            const double dl = index.doc_lengths.at(doc_id);
            const double denom = tf + kBm25K1 * (1.0 - kBm25B + kBm25B * dl / index.avg_doc_length);
            scores[doc_id] += idf * (tf * (kBm25K1 + 1.0)) / denom;
        }
    }

    std::vector<ScoredHit> hits;
    hits.reserve(scores.size());
    for (const auto& [doc_id, score] : scores) {
        if (score >= threshold) hits.push_back({doc_id, score, HitSource::Fulltext});
    }
    std::sort(hits.begin(), hits.end(), [](const ScoredHit& a, const ScoredHit& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.node_id < b.node_id;
    });
    if (hits.size() > k) hits.resize(k);
    return hits;
}

} // namespace codegraph
