// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <codegraph/descriptions.hpp>
#include <codegraph/errors.hpp>
#include <codegraph/graph.hpp>
#include <codegraph/llm.hpp>
#include <codegraph/prompts.hpp>
#include <codegraph/repo_parser.hpp>

using namespace codegraph;

namespace {

const std::string kRepoRoot = CODEGRAPH_REPO_ROOT;
const std::string kMiniRepo = kRepoRoot + "/tests/fixtures/mini_repo";

} // namespace

TEST_CASE("fallback descriptions state signature, doc line and callees") {
    PropertyGraph g = build_graph(parse_repository(kMiniRepo));

    DescriptionRecord add = generate_description(*g.find("util.add"), nullptr, nullptr);
    CHECK(add.text == "Function `util.add`(a, b): Add two integers.. Calls: none.");
    CHECK(add.origin == "fallback");

    // sub has no docstring and calls add.
    DescriptionRecord sub = generate_description(*g.find("util.sub"), nullptr, nullptr);
    CHECK(sub.text == "Function `util.sub`(a, b): no documentation. Calls: add.");

    DescriptionRecord area = generate_description(*g.find("shapes.Circle.area"), nullptr, nullptr);
    CHECK(area.text.rfind("Method `shapes.Circle.area`(self):", 0) == 0);
}

TEST_CASE("only class, method and function nodes get descriptions") {
    PropertyGraph g = build_graph(parse_repository(kMiniRepo));
    CHECK_THROWS_AS(generate_description(*g.find("util"), nullptr, nullptr), InputError);
    CHECK_THROWS_AS(generate_description(*g.find("shapes.Circle.radius"), nullptr, nullptr),
                    InputError);
    CHECK_THROWS_AS(generate_description(*g.find("util#doc"), nullptr, nullptr), InputError);
}

TEST_CASE("a responding model overrides the template") {
    PropertyGraph g = build_graph(parse_repository(kMiniRepo));
    PromptCatalog catalog = PromptCatalog::load(kRepoRoot + "/prompts");

    MockLlmClient llm;
    llm.set_default_response("Adds a and b and returns the sum.");
    DescriptionRecord rec = generate_description(*g.find("util.add"), &llm, &catalog);
    CHECK(rec.text == "Adds a and b and returns the sum.");
    CHECK(rec.origin == "llm");
}

TEST_CASE("an empty model reply falls back to the template") {
    PropertyGraph g = build_graph(parse_repository(kMiniRepo));
    PromptCatalog catalog = PromptCatalog::load(kRepoRoot + "/prompts");
    MockLlmClient llm; // Canned mode with no canned entries replies ""
    DescriptionRecord rec = generate_description(*g.find("util.add"), &llm, &catalog);
    CHECK(rec.origin == "fallback");
    CHECK(rec.text.find("util.add") != std::string::npos);
}

TEST_CASE("attach adds one description node and edge per eligible node") {
    PropertyGraph g = build_graph(parse_repository(kMiniRepo));
    const std::size_t before_nodes = g.node_count();
    const std::size_t before_edges = g.edge_count();

    std::size_t added = attach_descriptions(g, nullptr, nullptr);
    CHECK(added == 6); // 3 functions + 2 methods + 1 class
    CHECK(g.node_count() == before_nodes + 6);
    CHECK(g.edge_count() == before_edges + 6);
    CHECK(g.count_kind(NodeKind::GeneratedDescription) == 6);
    CHECK(validate_schema(g).empty());

    const Node* desc = g.find("util.add#desc");
    REQUIRE(desc != nullptr);
    CHECK(desc->kind == NodeKind::GeneratedDescription);
    CHECK(desc->name == "add");
    CHECK(desc->path == "util.py");
    CHECK_FALSE(desc->span.has_value());
    CHECK(g.edges().count({"util.add", EdgeRel::HasDescription, "util.add#desc"}) == 1);
}

TEST_CASE("attach is idempotent") {
    PropertyGraph g = build_graph(parse_repository(kMiniRepo));
    CHECK(attach_descriptions(g, nullptr, nullptr) == 6);
    CHECK(attach_descriptions(g, nullptr, nullptr) == 0);
    CHECK(g.count_kind(NodeKind::GeneratedDescription) == 6);
}

TEST_CASE("class descriptions list methods' callees") {
    PropertyGraph g = build_graph(parse_repository(kMiniRepo));
    DescriptionRecord rec = generate_description(*g.find("shapes.Circle"), nullptr, nullptr);
    CHECK(rec.text.rfind("Class `shapes.Circle`", 0) == 0);
}
