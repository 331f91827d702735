// SPDX-License-Identifier: Apache-2.0
// Command-line entry point: index, query, generate, eval, inspect.
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "codegraph/config.hpp"
#include "codegraph/descriptions.hpp"
#include "codegraph/errors.hpp"
#include "codegraph/evalharness.hpp"
#include "codegraph/generation.hpp"
#include "codegraph/graph_io.hpp"
#include "codegraph/repo_parser.hpp"
#include "codegraph/retrieval.hpp"

namespace {

using namespace codegraph;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitExtraction = 3;
constexpr int kExitInfrastructure = 4;

constexpr const char* kRawResponseFile = "codegraph-raw-response.txt";

/// Flag-level overrides collected by CLI11; only values the user actually
/// passed are applied, keeping the precedence flag > env > file > default.
struct Overrides {
    std::optional<std::string> repo_root;
    std::vector<std::string> include;
    bool include_set = false;
    std::vector<std::string> exclude;
    bool exclude_set = false;
    std::optional<std::string> graph_path;
    std::optional<long> seed_k;
    std::optional<int> hops;
    std::optional<long> filter_k;
    std::optional<double> fulltext_threshold;
    std::optional<double> vector_threshold;
    std::optional<long> embedding_dim;
    std::optional<std::string> embedder_mode;
    std::optional<std::string> embedder_base_url;
    std::optional<std::string> embedder_model;
    std::optional<std::string> llm_mode;
    std::optional<std::string> llm_base_url;
    std::optional<std::string> llm_model;
    std::optional<double> llm_temperature;
    std::optional<std::string> llm_mock_response;
    std::optional<long> context_budget;
    std::optional<int> timeout;
    std::optional<std::string> prompts_dir;
    std::optional<int> jobs;
};

void add_config_flags(CLI::App& app, std::string& config_path, Overrides& ov) {
    app.add_option("--config", config_path, "Config file (key = value lines)");
    app.add_option("--repo-root", ov.repo_root, "Repository to index");
    app.add_option("--include", ov.include, "Include glob(s)")
        ->each([&ov](const std::string&) { ov.include_set = true; });
    app.add_option("--exclude", ov.exclude, "Exclude glob(s)")
        ->each([&ov](const std::string&) { ov.exclude_set = true; });
    app.add_option("--graph", ov.graph_path, "Graph file path");
    app.add_option("--seed-k", ov.seed_k, "Max seeds per retrieval channel");
    app.add_option("--hops", ov.hops, "Expansion depth");
    app.add_option("--filter-k", ov.filter_k, "Max nodes after filtering");
    app.add_option("--fulltext-threshold", ov.fulltext_threshold, "BM25 score floor");
    app.add_option("--vector-threshold", ov.vector_threshold, "Cosine score floor");
    app.add_option("--embedding-dim", ov.embedding_dim, "Embedding dimension");
    app.add_option("--embedder-mode", ov.embedder_mode, "default or remote");
    app.add_option("--embedder-base-url", ov.embedder_base_url, "Embedding service URL");
    app.add_option("--embedder-model", ov.embedder_model, "Embedding model name");
    app.add_option("--llm-mode", ov.llm_mode,
                   "mock, mock:echo-reference, mock:always-pass-keyword or remote");
    app.add_option("--llm-base-url", ov.llm_base_url, "Chat service URL");
    app.add_option("--llm-model", ov.llm_model, "Chat model name");
    app.add_option("--llm-temperature", ov.llm_temperature, "Sampling temperature");
    app.add_option("--llm-mock-response", ov.llm_mock_response, "Default reply of the mock LLM");
    app.add_option("--context-budget", ov.context_budget, "Prompt context budget, characters");
    app.add_option("--timeout", ov.timeout, "Eval test timeout, seconds");
    app.add_option("--prompts-dir", ov.prompts_dir, "Prompt template directory");
    app.add_option("--jobs", ov.jobs, "Worker threads (0 = available parallelism)");
}

Config resolve_config(const std::string& config_path, const Overrides& ov) {
    Config cfg;
    if (!config_path.empty()) cfg = load_config_file(config_path, cfg);
    cfg = apply_env(std::move(cfg));

    if (ov.repo_root) cfg.repo_root = *ov.repo_root;
    if (ov.include_set) cfg.include = ov.include;
    if (ov.exclude_set) cfg.exclude = ov.exclude;
    if (ov.graph_path) cfg.graph_path = *ov.graph_path;
    if (ov.seed_k) cfg.seed_k = static_cast<std::size_t>(std::max(0L, *ov.seed_k));
    if (ov.hops) cfg.hops = *ov.hops;
    if (ov.filter_k) cfg.filter_k = static_cast<std::size_t>(std::max(0L, *ov.filter_k));
    if (ov.fulltext_threshold) cfg.fulltext_threshold = *ov.fulltext_threshold;
    if (ov.vector_threshold) cfg.vector_threshold = *ov.vector_threshold;
    if (ov.embedding_dim) cfg.embedding_dim = static_cast<std::size_t>(std::max(0L, *ov.embedding_dim));
    if (ov.embedder_mode) cfg.embedder_mode = *ov.embedder_mode;
    if (ov.embedder_base_url) cfg.embedder_base_url = *ov.embedder_base_url;
    if (ov.embedder_model) cfg.embedder_model = *ov.embedder_model;
    if (ov.llm_mode) cfg.llm_mode = *ov.llm_mode;
    if (ov.llm_base_url) cfg.llm_base_url = *ov.llm_base_url;
    if (ov.llm_model) cfg.llm_model = *ov.llm_model;
    if (ov.llm_temperature) cfg.llm_temperature = *ov.llm_temperature;
    if (ov.llm_mock_response) cfg.llm_mock_response = *ov.llm_mock_response;
    if (ov.context_budget) cfg.context_budget = static_cast<std::size_t>(std::max(0L, *ov.context_budget));
    if (ov.timeout) cfg.eval_timeout_seconds = *ov.timeout;
    if (ov.prompts_dir) cfg.prompts_dir = *ov.prompts_dir;
    if (ov.jobs) cfg.jobs = *ov.jobs;

    validate_config(cfg);
    return cfg;
}

ParserOptions parser_options(const Config& cfg) {
    ParserOptions opts;
    opts.include = cfg.include;
    opts.exclude = cfg.exclude;
    opts.jobs = cfg.jobs <= 0 ? 0u : static_cast<unsigned>(cfg.jobs);
    return opts;
}

PropertyGraph load_graph_or_die(const Config& cfg) {
    return load_graph(cfg.graph_path); // missing file -> InputError -> exit 2
}

bool llm_is_mock(const Config& cfg) { return cfg.llm_mode.rfind("mock", 0) == 0; }

int cmd_index(const Config& cfg) {
    RepoParse parse = parse_repository(cfg.repo_root, parser_options(cfg));
    std::vector<std::string> diagnostics = parse.diagnostics;
    PropertyGraph graph = build_graph(parse.files, parse.usages, &diagnostics);

    std::size_t described = 0;
    if (llm_is_mock(cfg)) {
        // Offline path: the deterministic template, no prompt catalog needed.
        described = attach_descriptions(graph, nullptr, nullptr);
    } else {
        PromptCatalog catalog = PromptCatalog::load(cfg.prompts_dir);
        auto llm = make_llm_client(cfg);
        described = attach_descriptions(graph, llm.get(), &catalog);
    }

    persist_graph(graph, cfg.graph_path);
    for (const std::string& d : diagnostics) std::cerr << "note: " << d << "\n";
    std::cout << "indexed " << cfg.repo_root << ": nodes=" << graph.node_count()
              << " edges=" << graph.edge_count() << " descriptions=" << described << " -> "
              << cfg.graph_path << "\n";
    return kExitOk;
}

int cmd_query(const Config& cfg, const std::string& query, bool as_json) {
    PropertyGraph graph = load_graph_or_die(cfg);
    auto embedder = make_embedder(cfg);
    GraphIndexes indexes = build_indexes(graph, *embedder);

    RetrievalResult result;
    if (cfg.llm_mode == "remote") {
        PromptCatalog catalog = PromptCatalog::load(cfg.prompts_dir);
        auto llm = make_llm_client(cfg);
        result = retrieve(graph, indexes, *embedder, query, retrieval_config(cfg), llm.get(),
                          &catalog);
    } else {
        result = retrieve(graph, indexes, *embedder, query, retrieval_config(cfg));
    }

    if (as_json) {
        std::cout << retrieval_result_to_json(result);
        return kExitOk;
    }

    std::cout << result.subgraph.node_ids.size() << " nodes retrieved\n";
    for (const std::string& id : result.subgraph.node_ids) {
        const Node* node = graph.find(id);
        std::ostringstream score;
        score.setf(std::ios::fixed);
        score.precision(4);
        score << result.node_scores.at(id);
        std::cout << "  " << score.str() << "  " << to_string(node->kind) << "  " << id << "\n";
    }
    if (!result.subgraph.edges.empty()) {
        std::cout << result.subgraph.edges.size() << " edges\n";
    }
    return kExitOk;
}

int cmd_generate(const Config& cfg, const std::string& query, const std::string& dump_context) {
    PropertyGraph graph = load_graph_or_die(cfg);
    PromptCatalog catalog = PromptCatalog::load(cfg.prompts_dir);
    auto embedder = make_embedder(cfg);
    GraphIndexes indexes = build_indexes(graph, *embedder);

    auto llm = make_llm_client(cfg);
    LlmClient* extraction_llm = cfg.llm_mode == "remote" ? llm.get() : nullptr;
    RetrievalResult result = retrieve(graph, indexes, *embedder, query, retrieval_config(cfg),
                                      extraction_llm, &catalog);

    PromptContext ctx =
        serialize_subgraph(graph, result.subgraph, result.node_scores, cfg.context_budget);
    if (result.subgraph.node_ids.empty()) {
        std::cerr << "warning: no repository context retrieved; generating without it\n";
    }
    if (!dump_context.empty()) {
        std::ofstream out(dump_context, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write context dump " + dump_context);
        out << ctx.context_text;
    }

    ChatRequest request;
    request.messages = build_generation_prompt(query, ctx, catalog);
    request.model = cfg.llm_model;
    request.temperature = cfg.llm_temperature;

    GeneratedCode code = generate_code(request, *llm);
    std::cout << code.code_text << "\n";
    return kExitOk;
}

int cmd_eval(const Config& cfg, const std::string& samples_path, const std::string& report_path) {
    SampleSet set = load_samples(samples_path);
    PromptCatalog catalog = PromptCatalog::load(cfg.prompts_dir);
    auto llm = make_llm_client(cfg);

    ReferenceBodyHook hook;
    if (auto* mock = dynamic_cast<MockLlmClient*>(llm.get())) {
        hook = [mock](const std::string& body) { mock->set_reference_body(body); };
    }

    BenchmarkReport report = run_benchmark(set, eval_config(cfg), catalog, *llm, hook);
    if (!report_path.empty()) {
        std::ofstream out(report_path, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write report " + report_path);
        out << report_to_json(report);
    }
    std::cout << report_summary(report);
    return kExitOk;
}

int cmd_inspect(const Config& cfg) {
    PropertyGraph graph = load_graph_or_die(cfg);
    std::vector<std::string> violations = validate_schema(graph);

    std::cout << "graph " << cfg.graph_path << ": nodes=" << graph.node_count()
              << " edges=" << graph.edge_count() << "\n";
    const NodeKind kinds[] = {NodeKind::File,      NodeKind::Class,
                              NodeKind::Method,    NodeKind::Function,
                              NodeKind::Attribute, NodeKind::Documentation,
                              NodeKind::GeneratedDescription};
    for (NodeKind kind : kinds) {
        std::size_t count = graph.count_kind(kind);
        if (count) std::cout << "  " << to_string(kind) << ": " << count << "\n";
    }
    if (violations.empty()) {
        std::cout << "schema: ok (0 violations)\n";
    } else {
        std::cout << "schema: " << violations.size() << " violation(s)\n";
        for (const std::string& v : violations) std::cout << "  " << v << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Code knowledge graph engine: index a repository, retrieve "
                 "query-relevant subgraphs, ground code generation in them."};
    app.require_subcommand(1);

    std::string config_path;
    Overrides ov;
    add_config_flags(app, config_path, ov);

    CLI::App* index = app.add_subcommand("index", "Parse the repository into a graph file");
    index->fallthrough();

    std::string query_text;
    bool query_json = false;
    CLI::App* query = app.add_subcommand("query", "Retrieve a query-relevant subgraph");
    query->add_option("query", query_text, "Natural-language query")->required();
    query->add_flag("--json", query_json, "Print the exact retrieval result JSON");
    query->fallthrough();

    std::string generate_text;
    std::string dump_context;
    CLI::App* generate = app.add_subcommand("generate", "Generate code grounded in the graph");
    generate->add_option("query", generate_text, "Task statement")->required();
    generate->add_option("--dump-context", dump_context, "Write the prompt context to a file");
    generate->fallthrough();

    std::string samples_path;
    std::string report_path;
    CLI::App* eval = app.add_subcommand("eval", "Run benchmark samples and report pass@1");
    eval->add_option("samples", samples_path, "JSONL sample file")->required();
    eval->add_option("--report", report_path, "Write the JSON report to a file");
    eval->fallthrough();

    CLI::App* inspect = app.add_subcommand("inspect", "Validate the graph file and print stats");
    inspect->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        Config cfg = resolve_config(config_path, ov);
        if (index->parsed()) return cmd_index(cfg);
        if (query->parsed()) return cmd_query(cfg, query_text, query_json);
        if (generate->parsed()) return cmd_generate(cfg, generate_text, dump_context);
        if (eval->parsed()) return cmd_eval(cfg, samples_path, report_path);
        if (inspect->parsed()) return cmd_inspect(cfg);
        std::cerr << "error: no command\n";
        return kExitUsage;
    } catch (const ExtractionError& e) {
        std::ofstream out(kRawResponseFile, std::ios::binary | std::ios::trunc);
        if (out) out << e.raw_response();
        std::cerr << "error: " << e.what() << " (raw response saved to " << kRawResponseFile
                  << ")\n";
        return kExitExtraction;
    } catch (const TransportError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfrastructure;
    } catch (const Error& e) {
        // config, input, graph and schema problems are usage errors
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInfrastructure;
    }
}
