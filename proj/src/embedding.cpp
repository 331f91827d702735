// SPDX-License-Identifier: Apache-2.0
#include "codegraph/embedding.hpp"

#include <cmath>
#include <cstdint>

#include "codegraph/fulltext.hpp"

namespace codegraph {

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::vector<double> HashingEmbedder::embed(const std::string& text) {
    std::vector<double> v(dim_, 0.0);
    std::vector<std::string> tokens = tokenize_identifier(text);
    if (tokens.empty()) return v;
    for (const std::string& t : tokens) {
        std::uint64_t h = fnv1a64(t);
        std::size_t bucket = static_cast<std::size_t>(h % dim_);
        double sign = (h >> 63) ? -1.0 : 1.0;
        v[bucket] += sign;
    }
    double norm = l2_norm(v);
    if (norm > 0.0) {
        for (double& x : v) x /= norm;
    }
    return v;
}

double l2_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0;
    const std::size_t n = a.size() < b.size() ? a.size() : b.size();
    for (std::size_t i = 0; i < n; ++i) dot += a[i] * b[i];
    double na = l2_norm(a);
    double nb = l2_norm(b);
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (na * nb);
}

} // namespace codegraph
