// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <codegraph/embedding.hpp>
#include <codegraph/fulltext.hpp>

#include <cmath>

#include "oracles.hpp"

using namespace codegraph;

TEST_CASE("embeddings are deterministic and unit length") {
    HashingEmbedder emb(256);
    CHECK(emb.dimension() == 256);
    auto a = emb.embed("shapes.Circle.area computes the circle area");
    auto b = emb.embed("shapes.Circle.area computes the circle area");
    CHECK(a == b);
    CHECK(oracles::l2(a) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("empty input embeds to the zero vector") {
    HashingEmbedder emb(16);
    auto v = emb.embed("");
    CHECK(v == std::vector<double>(16, 0.0));
    CHECK(emb.embed("  ...  ") == std::vector<double>(16, 0.0));
}

TEST_CASE("the hash layout matches an independent reimplementation") {
    for (std::size_t dim : {8u, 64u, 256u}) {
        HashingEmbedder emb(dim);
        for (const char* text : {"add", "HTTPServer_v2 handles requests",
                                 "loadConfig load_config LOAD", "a b c d e f g"}) {
            auto expected = oracles::hash_embed(tokenize_identifier(text), dim);
            auto got = emb.embed(text);
            REQUIRE(got.size() == expected.size());
            for (std::size_t i = 0; i < got.size(); ++i) {
                REQUIRE(got[i] == doctest::Approx(expected[i]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("token order does not matter but multiplicity does") {
    HashingEmbedder emb(64);
    CHECK(emb.embed("alpha beta") == emb.embed("beta alpha"));
    // Opposite-sign collisions aside, doubling a token moves the vector.
    CHECK(emb.embed("alpha alpha beta") != emb.embed("alpha beta"));
}

TEST_CASE("cosine similarity basics") {
    CHECK(cosine_similarity({1, 0}, {1, 0}) == doctest::Approx(1.0));
    CHECK(cosine_similarity({1, 0}, {0, 1}) == doctest::Approx(0.0));
    CHECK(cosine_similarity({1, 0}, {-1, 0}) == doctest::Approx(-1.0));
    CHECK(cosine_similarity({0, 0}, {1, 0}) == 0.0);
    CHECK(cosine_similarity({3, 4}, {6, 8}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("similar texts score above unrelated ones") {
    HashingEmbedder emb(256);
    auto target = emb.embed("compute the area of a circle from its radius");
    auto close = emb.embed("circle area radius");
    auto far = emb.embed("parse configuration files and environment variables");
    CHECK(cosine_similarity(target, close) > cosine_similarity(target, far));
}
