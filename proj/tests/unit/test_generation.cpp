// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <codegraph/descriptions.hpp>
#include <codegraph/embedding.hpp>
#include <codegraph/errors.hpp>
#include <codegraph/generation.hpp>
#include <codegraph/graph.hpp>
#include <codegraph/llm.hpp>
#include <codegraph/prompts.hpp>
#include <codegraph/repo_parser.hpp>
#include <codegraph/retrieval.hpp>

using namespace codegraph;

namespace {

const std::string kRepoRoot = CODEGRAPH_REPO_ROOT;
const std::string kMiniRepo = kRepoRoot + "/tests/fixtures/mini_repo";

PropertyGraph described_graph() {
    PropertyGraph g = build_graph(parse_repository(kMiniRepo));
    attach_descriptions(g, nullptr, nullptr);
    return g;
}

Subgraph subgraph_of(const PropertyGraph& g, std::set<std::string> ids,
                     std::vector<std::string> seeds = {}) {
    Subgraph sub;
    sub.node_ids.assign(ids.begin(), ids.end());
    sub.edges = induced_edges(g, ids);
    sub.seed_ids = std::move(seeds);
    return sub;
}

} // namespace

TEST_CASE("serialization renders one block per node plus relations") {
    PropertyGraph g = described_graph();
    Subgraph sub = subgraph_of(g, {"util", "util.add", "util.add#doc", "util.add#desc"});
    PromptContext ctx = serialize_subgraph(g, sub);

    CHECK(ctx.node_count == 4);
    CHECK_FALSE(ctx.truncated);
    // Kind order puts the file first, then the function, then doc texts.
    const std::string& t = ctx.context_text;
    std::size_t file_at = t.find("### File util (util.py:1-");
    std::size_t fn_at = t.find("### Function util.add (util.py:");
    std::size_t doc_at = t.find("### Documentation util.add#doc");
    std::size_t desc_at = t.find("### GeneratedDescription util.add#desc");
    std::size_t rel_at = t.find("\n### RELATIONS\n");
    REQUIRE(file_at != std::string::npos);
    REQUIRE(fn_at != std::string::npos);
    REQUIRE(doc_at != std::string::npos);
    REQUIRE(desc_at != std::string::npos);
    REQUIRE(rel_at != std::string::npos);
    CHECK(file_at < fn_at);
    CHECK(fn_at < doc_at);
    CHECK(doc_at < desc_at);
    CHECK(rel_at > desc_at);

    // Code nodes are fenced; doc nodes are plain text.
    CHECK(t.find("```python\ndef add(a, b):") != std::string::npos);
    CHECK(t.find("util.add -[HAS_DOCUMENTATION]-> util.add#doc") != std::string::npos);
    CHECK(t.find("util -[DEFINES_FUNCTION]-> util.add") != std::string::npos);
}

TEST_CASE("doc nodes have no line range in their header") {
    PropertyGraph g = described_graph();
    Subgraph sub = subgraph_of(g, {"util.add#desc"});
    PromptContext ctx = serialize_subgraph(g, sub);
    CHECK(ctx.context_text.find("### GeneratedDescription util.add#desc (util.py)\n") !=
          std::string::npos);
}

TEST_CASE("an empty subgraph serializes to the placeholder") {
    PropertyGraph g = described_graph();
    PromptContext ctx = serialize_subgraph(g, Subgraph{});
    CHECK(ctx.context_text == "### CONTEXT\n(no repository context retrieved)\n");
    CHECK(ctx.node_count == 0);
}

TEST_CASE("the budget drops worst-scoring non-seeds first") {
    PropertyGraph g = described_graph();
    Subgraph sub = subgraph_of(g, {"util", "util.add", "util.sub", "util#doc"}, {"util.add"});
    std::map<std::string, double> scores = {
        {"util", 0.9}, {"util.add", 0.8}, {"util.sub", 0.1}, {"util#doc", 0.5}};

    PromptContext full = serialize_subgraph(g, sub, scores);
    REQUIRE_FALSE(full.truncated);

    // A budget just under the full size forces exactly one drop: util.sub.
    PromptContext cut = serialize_subgraph(g, sub, scores, full.context_text.size() - 1);
    CHECK(cut.truncated);
    CHECK(cut.node_count == 3);
    CHECK(cut.context_text.find("util.sub") == std::string::npos);
    CHECK(cut.context_text.find("### Function util.add") != std::string::npos);
    CHECK(cut.context_text.size() <= full.context_text.size() - 1);
}

TEST_CASE("seeds survive even a budget only they fit into") {
    PropertyGraph g = described_graph();
    Subgraph sub = subgraph_of(g, {"util", "util.add", "util.sub"}, {"util.add"});
    PromptContext ctx = serialize_subgraph(g, sub, {}, 80);
    CHECK(ctx.truncated);
    CHECK(ctx.context_text.size() <= 80);
    // The seed's block is what remains, even if clipped mid-block.
    CHECK(ctx.context_text.find("util.add") != std::string::npos);
}

TEST_CASE("prompt assembly places the context before the task") {
    PromptCatalog catalog = PromptCatalog::load(kRepoRoot + "/prompts");
    PromptContext ctx;
    ctx.context_text = "### File util (util.py:1-9)\n```python\nx = 1\n```\n";
    auto messages = build_generation_prompt("add two numbers", ctx, catalog);
    REQUIRE(messages.size() == 2);
    CHECK(messages[0].role == "system");
    CHECK(messages[1].role == "user");
    CHECK(messages[1].content.rfind(ctx.context_text, 0) == 0);
    CHECK(messages[1].content.find("add two numbers") != std::string::npos);
}

TEST_CASE("code extraction prefers the first fenced block") {
    MockLlmClient llm;
    ChatRequest req;
    req.messages.push_back({"user", "task"});

    llm.set_default_response("Here is the code:\n```python\ndef f():\n    return 1\n```\nEnjoy!");
    GeneratedCode out = generate_code(req, llm);
    CHECK(out.code_text == "def f():\n    return 1");
    CHECK(out.extraction == "fenced");

    llm.set_default_response("```\nplain fence\n```");
    CHECK(generate_code(req, llm).code_text == "plain fence");

    // Inline backticks are not fences.
    llm.set_default_response("use `x = 1` somewhere\nreturn x\n");
    CHECK(generate_code(req, llm).extraction == "whole");
}

TEST_CASE("an unclosed fence runs to the end of the reply") {
    MockLlmClient llm;
    ChatRequest req;
    req.messages.push_back({"user", "task"});
    llm.set_default_response("```python\ndef g():\n    return 2\n");
    GeneratedCode out = generate_code(req, llm);
    CHECK(out.code_text == "def g():\n    return 2");
}

TEST_CASE("bare code replies pass through whole") {
    MockLlmClient llm;
    ChatRequest req;
    req.messages.push_back({"user", "task"});
    llm.set_default_response("def h(x):\n    return x * 2\n");
    GeneratedCode out = generate_code(req, llm);
    CHECK(out.code_text == "def h(x):\n    return x * 2");
    CHECK(out.extraction == "whole");
}

TEST_CASE("prose and empty replies raise extraction errors with the raw text") {
    MockLlmClient llm;
    ChatRequest req;
    req.messages.push_back({"user", "task"});

    llm.set_default_response("I cannot write that code for you today.");
    CHECK_THROWS_AS(generate_code(req, llm), ExtractionError);
    try {
        generate_code(req, llm);
    } catch (const ExtractionError& e) {
        CHECK(e.raw_response() == "I cannot write that code for you today.");
    }

    llm.set_default_response("");
    CHECK_THROWS_AS(generate_code(req, llm), ExtractionError);

    llm.set_default_response("```python\n\n```");
    CHECK_THROWS_AS(generate_code(req, llm), ExtractionError);
}

TEST_CASE("the full pipeline grounds generation in retrieved context") {
    PropertyGraph g = described_graph();
    HashingEmbedder emb(256);
    GraphIndexes idx = build_indexes(g, emb);
    PromptCatalog catalog = PromptCatalog::load(kRepoRoot + "/prompts");

    RetrievalResult r = retrieve(g, idx, emb, "add two numbers using the add function", {});
    PromptContext ctx = serialize_subgraph(g, r.subgraph, r.node_scores);
    REQUIRE(ctx.node_count > 0);

    auto messages = build_generation_prompt("add two numbers", ctx, catalog);
    MockLlmClient llm;
    llm.set_default_response("```python\nresult = add(a, b)\n```");
    ChatRequest req;
    req.messages = messages;
    GeneratedCode out = generate_code(req, llm);
    CHECK(out.code_text == "result = add(a, b)");
    CHECK(out.raw_response.find("```python") == 0);
}
