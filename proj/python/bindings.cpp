// SPDX-License-Identifier: Apache-2.0
//
// Python surface for the engine's main operations: index a repository,
// load/persist graph files, retrieve query-relevant subgraphs, serialize
// prompt context and run the offline benchmark. Remote-backed modes stay
// CLI-only; the bound eval accepts the mock modes.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <string>
#include <utility>

#include <codegraph/config.hpp>
#include <codegraph/descriptions.hpp>
#include <codegraph/embedding.hpp>
#include <codegraph/errors.hpp>
#include <codegraph/evalharness.hpp>
#include <codegraph/fulltext.hpp>
#include <codegraph/generation.hpp>
#include <codegraph/graph.hpp>
#include <codegraph/graph_io.hpp>
#include <codegraph/llm.hpp>
#include <codegraph/prompts.hpp>
#include <codegraph/repo_parser.hpp>
#include <codegraph/retrieval.hpp>

namespace py = pybind11;
using namespace codegraph;

namespace {

// One loaded graph plus the indexes retrieval reads. The graph is fixed at
// construction; reindex or reload to pick up repository changes.
class Session {
  public:
    Session(PropertyGraph graph, std::size_t embedding_dim)
        : graph_(std::move(graph)),
          embedder_(embedding_dim),
          indexes_(build_indexes(graph_, embedder_)) {}

    static std::unique_ptr<Session> index(const std::string& repo_root,
                                          std::size_t embedding_dim) {
        PropertyGraph g = build_graph(parse_repository(repo_root));
        attach_descriptions(g, nullptr, nullptr);
        return std::make_unique<Session>(std::move(g), embedding_dim);
    }

    static std::unique_ptr<Session> load(const std::string& graph_path,
                                         std::size_t embedding_dim) {
        return std::make_unique<Session>(load_graph(graph_path), embedding_dim);
    }

    void persist(const std::string& graph_path) const { persist_graph(graph_, graph_path); }

    std::size_t node_count() const { return graph_.node_count(); }
    std::size_t edge_count() const { return graph_.edge_count(); }

    std::map<std::string, std::size_t> kind_counts() const {
        static const NodeKind kinds[] = {NodeKind::File,      NodeKind::Class,
                                         NodeKind::Method,    NodeKind::Function,
                                         NodeKind::Attribute, NodeKind::Documentation,
                                         NodeKind::GeneratedDescription};
        std::map<std::string, std::size_t> counts;
        for (NodeKind kind : kinds) {
            const std::size_t n = graph_.count_kind(kind);
            if (n) counts[to_string(kind)] = n;
        }
        return counts;
    }

    std::vector<std::string> validate() const { return validate_schema(graph_); }

    std::string retrieve_json(const std::string& query, const RetrievalConfig& config) {
        return retrieval_result_to_json(retrieve(graph_, indexes_, embedder_, query, config));
    }

    std::string context(const std::string& query, const RetrievalConfig& config,
                        std::size_t budget) {
        RetrievalResult result = retrieve(graph_, indexes_, embedder_, query, config);
        return serialize_subgraph(graph_, result.subgraph, result.node_scores, budget)
            .context_text;
    }

  private:
    PropertyGraph graph_;
    HashingEmbedder embedder_;
    GraphIndexes indexes_;
};

RetrievalConfig retrieval_config_from(std::size_t seed_k, int hops, std::size_t filter_k,
                                      double fulltext_threshold, double vector_threshold) {
    RetrievalConfig rc;
    rc.seed_k = seed_k;
    rc.hops = hops;
    rc.filter_k = filter_k;
    rc.fulltext_threshold = fulltext_threshold;
    rc.vector_threshold = vector_threshold;
    return rc;
}

py::dict run_eval(const std::string& samples_path, const std::string& prompts_dir,
                  const std::string& llm_mode, int timeout_seconds) {
    Config cfg;
    cfg.llm_mode = llm_mode;
    cfg.eval_timeout_seconds = timeout_seconds;
    validate_config(cfg);
    if (cfg.llm_mode == "remote") throw InputError("remote eval is CLI-only");

    SampleSet set = load_samples(samples_path);
    PromptCatalog catalog = PromptCatalog::load(prompts_dir);
    auto llm = make_llm_client(cfg);

    ReferenceBodyHook hook;
    if (auto* mock = dynamic_cast<MockLlmClient*>(llm.get())) {
        hook = [mock](const std::string& body) { mock->set_reference_body(body); };
    }

    BenchmarkReport report;
    {
        py::gil_scoped_release release;
        report = run_benchmark(set, eval_config(cfg), catalog, *llm, hook);
    }

    py::dict out;
    out["pass_at_1"] = report.pass_at_1;
    out["summary"] = report_summary(report);
    out["report_json"] = report_to_json(report);
    py::list failed;
    for (const EvalOutcome& o : report.outcomes) {
        if (!o.passed) failed.append(py::make_tuple(o.sample_id, o.failure_stage));
    }
    out["failed"] = failed;
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Code knowledge graph engine: repository indexing, hybrid "
              "subgraph retrieval, context serialization and offline eval.";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<GraphError>(m, "GraphError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<Session>(m, "Session")
        .def_static("index", &Session::index, py::arg("repo_root"),
                    py::arg("embedding_dim") = 256,
                    "Parse a repository, attach descriptions and build the indexes.")
        .def_static("load", &Session::load, py::arg("graph_path"),
                    py::arg("embedding_dim") = 256, "Load a persisted graph file.")
        .def("persist", &Session::persist, py::arg("graph_path"))
        .def("node_count", &Session::node_count)
        .def("edge_count", &Session::edge_count)
        .def("kind_counts", &Session::kind_counts)
        .def("validate", &Session::validate,
             "Schema violations as strings; empty means the graph is well formed.")
        .def(
            "retrieve_json",
            [](Session& s, const std::string& query, std::size_t seed_k, int hops,
               std::size_t filter_k, double fulltext_threshold, double vector_threshold) {
                return s.retrieve_json(query,
                                       retrieval_config_from(seed_k, hops, filter_k,
                                                             fulltext_threshold,
                                                             vector_threshold));
            },
            py::arg("query"), py::arg("seed_k") = 10, py::arg("hops") = 2,
            py::arg("filter_k") = 25, py::arg("fulltext_threshold") = 0.0,
            py::arg("vector_threshold") = 0.25,
            "Full retrieval pipeline; returns the deterministic result JSON.")
        .def(
            "context",
            [](Session& s, const std::string& query, std::size_t budget, std::size_t seed_k,
               int hops, std::size_t filter_k, double fulltext_threshold,
               double vector_threshold) {
                return s.context(query,
                                 retrieval_config_from(seed_k, hops, filter_k,
                                                       fulltext_threshold, vector_threshold),
                                 budget);
            },
            py::arg("query"), py::arg("budget") = 24000, py::arg("seed_k") = 10,
            py::arg("hops") = 2, py::arg("filter_k") = 25, py::arg("fulltext_threshold") = 0.0,
            py::arg("vector_threshold") = 0.25,
            "Retrieve and serialize the prompt context block.");

    m.def("tokenize", &tokenize_identifier, py::arg("text"),
          "Lowercased identifier tokens: splits on non-alphanumerics and "
          "camelCase humps.");
    m.def(
        "embed",
        [](const std::string& text, std::size_t dim) {
            HashingEmbedder embedder(dim);
            return embedder.embed(text);
        },
        py::arg("text"), py::arg("dim") = 256,
        "Deterministic hashing embedding, unit L2 norm for nonempty text.");
    m.def("cosine", &cosine_similarity, py::arg("a"), py::arg("b"));
    m.def("run_eval", &run_eval, py::arg("samples_path"), py::arg("prompts_dir"),
          py::arg("llm_mode") = "mock:echo-reference", py::arg("timeout_seconds") = 60,
          "Run the benchmark offline with a mock client; returns pass@1, the "
          "text summary and the JSON report.");

    m.attr("__version__") = "0.1.0";
}
