// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "codegraph/embedding.hpp"
#include "codegraph/evalharness.hpp"
#include "codegraph/llm.hpp"
#include "codegraph/retrieval.hpp"

namespace codegraph {

/// Every tunable in one place. Values resolve with precedence
/// flag > environment > config file > default; the file format is
/// TOML-style `key = value` lines and the environment prefix is
/// CODEGRAPH_ (e.g. CODEGRAPH_SEED_K).
struct Config {
    std::string repo_root = ".";
    std::vector<std::string> include = {"**/*.py"};
    std::vector<std::string> exclude;
    std::string graph_path = "codegraph.jsonl";

    std::size_t seed_k = 10;
    int hops = 2;
    std::size_t filter_k = 25;
    double fulltext_threshold = 0.0;
    double vector_threshold = 0.25;

    std::size_t embedding_dim = 256;
    std::string embedder_mode = "default"; // "default" or "remote"
    std::string embedder_base_url;
    std::string embedder_model;

    /// "mock", "mock:echo-reference", "mock:always-pass-keyword" or
    /// "remote". The API key for remote mode comes from CODEGRAPH_LLM_KEY.
    std::string llm_mode = "mock";
    std::string llm_base_url;
    std::string llm_model;
    double llm_temperature = 0.0;
    /// Default reply of the plain "mock" client; empty keeps it silent.
    std::string llm_mock_response;

    std::size_t context_budget = 24000;
    int eval_timeout_seconds = 60;
    std::string prompts_dir = "prompts";
    int jobs = 0; // 0 = available parallelism
};

/// Reads `key = value` lines over `base`. Comments start with '#', strings
/// may be quoted, lists use ["a", "b"]. Unknown keys and malformed values
/// are ConfigErrors naming the line.
Config load_config_file(const std::string& path, Config base = {});

/// Applies CODEGRAPH_* environment overrides on top of `base`.
Config apply_env(Config base);

/// Range and mode checks; throws ConfigError with the offending key.
void validate_config(const Config& config);

/// Wiring helpers shared by the CLI and the bindings.
std::unique_ptr<Embedder> make_embedder(const Config& config);
std::unique_ptr<LlmClient> make_llm_client(const Config& config);
RetrievalConfig retrieval_config(const Config& config);
EvalConfig eval_config(const Config& config);

} // namespace codegraph
