// SPDX-License-Identifier: Apache-2.0
//
// Reference implementations the test suites score the real code against.
// Everything here is written straight from the definitions (textbook BM25,
// queue BFS, FNV-1a constants) and deliberately shares no code with src/.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracles {

// Undirected breadth-first reach: every node within `hops` edges of a seed.
inline std::set<std::string> bfs_reach(const std::vector<std::string>& node_ids,
                                       const std::vector<std::pair<std::string, std::string>>& edges,
                                       const std::set<std::string>& seeds, int hops) {
    std::map<std::string, std::vector<std::string>> adj;
    for (const std::string& id : node_ids) adj[id];
    for (const auto& [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::map<std::string, int> dist;
    std::queue<std::string> q;
    for (const std::string& s : seeds) {
        dist[s] = 0;
        q.push(s);
    }
    while (!q.empty()) {
        std::string cur = q.front();
        q.pop();
        if (dist[cur] >= hops) continue;
        for (const std::string& nxt : adj[cur]) {
            if (!dist.count(nxt)) {
                dist[nxt] = dist[cur] + 1;
                q.push(nxt);
            }
        }
    }
    std::set<std::string> reach;
    for (const auto& [id, d] : dist) {
        if (d <= hops) reach.insert(id);
    }
    return reach;
}

// BM25 with k1 = 1.2, b = 0.75 and the IDF floored at zero, scored over
// unique query terms. Documents are token lists; only documents containing
// at least one query term are hits.
struct Bm25Hit {
    std::string id;
    double score;
};

inline std::vector<Bm25Hit> bm25(const std::map<std::string, std::vector<std::string>>& docs,
                                 const std::vector<std::string>& query_terms) {
    const double k1 = 1.2;
    const double b = 0.75;
    const double n_docs = static_cast<double>(docs.size());
    double total_len = 0.0;
    for (const auto& [id, tokens] : docs) total_len += static_cast<double>(tokens.size());
    const double avgdl = docs.empty() ? 0.0 : total_len / n_docs;

    std::set<std::string> terms(query_terms.begin(), query_terms.end());
    std::map<std::string, double> scores;
    for (const std::string& term : terms) {
        double df = 0.0;
        for (const auto& [id, tokens] : docs) {
            if (std::count(tokens.begin(), tokens.end(), term) > 0) df += 1.0;
        }
        if (df == 0.0) continue;
        const double idf = std::max(0.0, std::log((n_docs - df + 0.5) / (df + 0.5)));
        for (const auto& [id, tokens] : docs) {
            const double tf = static_cast<double>(std::count(tokens.begin(), tokens.end(), term));
            if (tf == 0.0) continue;
            const double dl = static_cast<double>(tokens.size());
            const double denom = tf + k1 * (1.0 - b + b * dl / avgdl);
            scores[id] += idf * tf * (k1 + 1.0) / denom;
        }
    }
    std::vector<Bm25Hit> hits;
    for (const auto& [id, score] : scores) hits.push_back({id, score});
    std::sort(hits.begin(), hits.end(), [](const Bm25Hit& x, const Bm25Hit& y) {
        if (x.score != y.score) return x.score > y.score;
        return x.id < y.id;
    });
    return hits;
}

inline double l2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0;
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) dot += a[i] * b[i];
    const double na = l2(a);
    const double nb = l2(b);
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (na * nb);
}

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Signed feature hashing of already-split tokens, L2 normalized.
inline std::vector<double> hash_embed(const std::vector<std::string>& tokens, std::size_t dim) {
    std::vector<double> v(dim, 0.0);
    if (tokens.empty()) return v;
    for (const std::string& t : tokens) {
        const std::uint64_t h = fnv1a(t);
        v[h % dim] += (h >> 63) ? -1.0 : 1.0;
    }
    const double norm = l2(v);
    if (norm > 0.0) {
        for (double& x : v) x /= norm;
    }
    return v;
}

// Deterministic generators for the randomized comparisons.
inline std::mt19937& rng(std::uint32_t seed = 0) {
    static std::mt19937 gen(0xC0DEu);
    if (seed) gen.seed(seed);
    return gen;
}

inline std::string random_word(std::mt19937& gen, int min_len = 2, int max_len = 8) {
    std::uniform_int_distribution<int> len(min_len, max_len);
    std::uniform_int_distribution<int> ch(0, 25);
    std::string w;
    const int n = len(gen);
    for (int i = 0; i < n; ++i) w.push_back(static_cast<char>('a' + ch(gen)));
    return w;
}

} // namespace oracles
