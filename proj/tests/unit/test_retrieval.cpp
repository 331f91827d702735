// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <codegraph/descriptions.hpp>
#include <codegraph/embedding.hpp>
#include <codegraph/graph.hpp>
#include <codegraph/llm.hpp>
#include <codegraph/prompts.hpp>
#include <codegraph/repo_parser.hpp>
#include <codegraph/retrieval.hpp>

#include <algorithm>
#include <set>

using namespace codegraph;

namespace {

const std::string kRepoRoot = CODEGRAPH_REPO_ROOT;
const std::string kMiniRepo = kRepoRoot + "/tests/fixtures/mini_repo";

PropertyGraph described_graph() {
    PropertyGraph g = build_graph(parse_repository(kMiniRepo));
    attach_descriptions(g, nullptr, nullptr);
    return g;
}

} // namespace

TEST_CASE("heuristic entity extraction recognizes the common shapes") {
    std::string source;
    QueryEntities e = extract_query_entities("use the DataLoader class to batch items", nullptr,
                                             nullptr, &source);
    CHECK(source == "heuristic");
    CHECK(e.classes == std::vector<std::string>{"DataLoader"});
    CHECK(e.functions.empty());

    e = extract_query_entities("make it faster", nullptr, nullptr, &source);
    CHECK(e.empty());

    e = extract_query_entities("call parse_args() after setup", nullptr, nullptr, &source);
    CHECK(e.functions == std::vector<std::string>{"parse_args"});

    e = extract_query_entities("the add function in the util module", nullptr, nullptr, &source);
    CHECK(e.functions == std::vector<std::string>{"add"});

    e = extract_query_entities("fix the os.path helpers", nullptr, nullptr, &source);
    CHECK(e.modules == std::vector<std::string>{"os.path"});

    // Single-hump capitalized words stay out: sentence-initial words would
    // flood the class list. The model path catches those.
    e = extract_query_entities("the area method of DataLoader", nullptr, nullptr, &source);
    CHECK(e.methods == std::vector<std::string>{"area"});
    CHECK(e.classes == std::vector<std::string>{"DataLoader"});
    CHECK(extract_query_entities("Use the helper", nullptr, nullptr, &source).empty());
}

TEST_CASE("model-backed extraction parses the json reply") {
    PromptCatalog catalog = PromptCatalog::load(kRepoRoot + "/prompts");
    MockLlmClient llm;
    llm.set_default_response(
        R"({"classes": ["Circle"], "functions": ["add"], "methods": [], "modules": ["util"]})");
    std::string source;
    QueryEntities e = extract_query_entities("anything", &llm, &catalog, &source);
    CHECK(source == "llm");
    CHECK(e.classes == std::vector<std::string>{"Circle"});
    CHECK(e.functions == std::vector<std::string>{"add"});
    CHECK(e.modules == std::vector<std::string>{"util"});
}

TEST_CASE("a broken model reply falls back to the heuristic") {
    PromptCatalog catalog = PromptCatalog::load(kRepoRoot + "/prompts");
    MockLlmClient llm;
    std::string source;

    llm.set_default_response("I think you want the add function.");
    QueryEntities e =
        extract_query_entities("use the DataLoader class", &llm, &catalog, &source);
    CHECK(source == "heuristic");
    CHECK(e.classes == std::vector<std::string>{"DataLoader"});

    llm.set_default_response(R"({"classes": "Circle"})"); // wrong shape
    e = extract_query_entities("use the DataLoader class", &llm, &catalog, &source);
    CHECK(source == "heuristic");
}

TEST_CASE("fenced json replies are accepted") {
    PromptCatalog catalog = PromptCatalog::load(kRepoRoot + "/prompts");
    MockLlmClient llm;
    llm.set_default_response(
        "```json\n{\"classes\": [], \"functions\": [\"sub\"], \"methods\": [], \"modules\": []}\n```");
    std::string source;
    QueryEntities e = extract_query_entities("subtract", &llm, &catalog, &source);
    CHECK(source == "llm");
    CHECK(e.functions == std::vector<std::string>{"sub"});
}

TEST_CASE("initial retrieval merges fulltext and vector hits") {
    PropertyGraph g = described_graph();
    HashingEmbedder emb(256);
    GraphIndexes idx = build_indexes(g, emb);

    const std::string query = "add two numbers using the add function";
    std::string source;
    QueryEntities entities = extract_query_entities(query, nullptr, nullptr, &source);
    REQUIRE(entities.functions == std::vector<std::string>{"add"});

    auto seeds = initial_retrieval(idx, emb, query, entities, {});
    REQUIRE(!seeds.empty());
    // util.add is findable by name and through its documentation; it shows
    // up once with the better of the two scores.
    int count = 0;
    for (const auto& h : seeds) {
        if (h.node_id == "util.add") ++count;
    }
    CHECK(count == 1);
    CHECK(seeds[0].node_id == "util.add");
    CHECK(std::is_sorted(seeds.begin(), seeds.end(), [](const ScoredHit& a, const ScoredHit& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.node_id < b.node_id;
    }));
}

TEST_CASE("per-channel limits apply before the merge") {
    PropertyGraph g = described_graph();
    HashingEmbedder emb(256);
    GraphIndexes idx = build_indexes(g, emb);
    RetrievalConfig cfg;
    cfg.seed_k = 1;
    QueryEntities entities;
    entities.functions = {"add", "sub"};
    auto seeds = initial_retrieval(idx, emb, "add sub", entities, cfg);
    // Each channel contributes at most one owner; the merged list can hold
    // up to two distinct ids but never more.
    CHECK(seeds.size() <= 2);
}

TEST_CASE("retrieve returns an empty context when nothing matches") {
    PropertyGraph g = described_graph();
    HashingEmbedder emb(256);
    GraphIndexes idx = build_indexes(g, emb);
    RetrievalConfig cfg;
    cfg.vector_threshold = 0.9999; // nothing clears this
    RetrievalResult r = retrieve(g, idx, emb, "zzz qqq xxyzzy", cfg);
    CHECK(r.subgraph.node_ids.empty());
    CHECK(r.seed_hits.empty());
    CHECK(r.diagnostics.seed_count == 0);
    REQUIRE(!r.diagnostics.notes.empty());
    CHECK(r.diagnostics.notes[0].find("no seeds") != std::string::npos);
}

TEST_CASE("stage counts are monotone and seeds survive filtering") {
    PropertyGraph g = described_graph();
    HashingEmbedder emb(256);
    GraphIndexes idx = build_indexes(g, emb);

    const char* queries[] = {
        "add two numbers using the add function",
        "compute the area of a circle",
        "what does the main entry point do",
        "subtract one number from another",
        "the Circle class radius attribute",
        "perimeter of a shape",
        "arithmetic helpers in the util module",
        "circle geometry",
        "entry point wiring the calculator",
        "documentation for the add function",
    };
    for (const char* q : queries) {
        CAPTURE(q);
        RetrievalResult r = retrieve(g, idx, emb, q, {});
        std::set<std::string> kept(r.subgraph.node_ids.begin(), r.subgraph.node_ids.end());
        CHECK(r.diagnostics.seed_count == r.diagnostics.seed_ids.size());
        CHECK(r.diagnostics.filtered_count <= r.diagnostics.expanded_count);
        CHECK(kept.size() == r.diagnostics.filtered_count);
        for (const std::string& s : r.diagnostics.seed_ids) {
            CHECK(kept.count(s) == 1);
        }
        // Every kept node lies within the expansion radius of some seed.
        std::set<std::string> seeds(r.diagnostics.seed_ids.begin(), r.diagnostics.seed_ids.end());
        if (!seeds.empty()) {
            Subgraph expanded = expand_seeds(g, seeds, r.diagnostics.hops);
            std::set<std::string> exp(expanded.node_ids.begin(), expanded.node_ids.end());
            CHECK(expanded.node_ids.size() == r.diagnostics.expanded_count);
            for (const std::string& id : kept) CHECK(exp.count(id) == 1);
        }
    }
}

TEST_CASE("the filter cap keeps the best scoring non-seeds") {
    PropertyGraph g = described_graph();
    HashingEmbedder emb(256);
    GraphIndexes idx = build_indexes(g, emb);
    RetrievalConfig cfg;
    cfg.filter_k = 4;
    RetrievalResult r = retrieve(g, idx, emb, "compute the area of a circle", cfg);
    CHECK(r.subgraph.node_ids.size() <=
          std::max<std::size_t>(cfg.filter_k, r.diagnostics.seed_ids.size()));
    for (const std::string& s : r.diagnostics.seed_ids) {
        CHECK(std::count(r.subgraph.node_ids.begin(), r.subgraph.node_ids.end(), s) == 1);
    }
    // Induced edges connect kept nodes only.
    std::set<std::string> kept(r.subgraph.node_ids.begin(), r.subgraph.node_ids.end());
    for (const Edge& e : r.subgraph.edges) {
        CHECK(kept.count(e.src));
        CHECK(kept.count(e.dst));
    }
}

TEST_CASE("result json is deterministic and complete") {
    PropertyGraph g = described_graph();
    HashingEmbedder emb(256);
    GraphIndexes idx = build_indexes(g, emb);
    RetrievalResult r1 = retrieve(g, idx, emb, "area of a circle", {});
    RetrievalResult r2 = retrieve(g, idx, emb, "area of a circle", {});
    const std::string j1 = retrieval_result_to_json(r1);
    const std::string j2 = retrieval_result_to_json(r2);
    CHECK(j1 == j2);
    CHECK(j1.find("\"diagnostics\"") != std::string::npos);
    CHECK(j1.find("\"seed_ids\"") != std::string::npos);
    CHECK(j1.find("\"entity_source\"") != std::string::npos);
}
