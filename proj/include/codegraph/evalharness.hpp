// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "codegraph/llm.hpp"
#include "codegraph/prompts.hpp"
#include "codegraph/retrieval.hpp"

namespace codegraph {

/// One benchmark task: a target function or method whose body is blanked,
/// regenerated from retrieved context, spliced back and judged by a test
/// command's exit status.
struct EvalSample {
    std::string sample_id;
    std::string target_namespace; // qualified name of the function/method
    std::string file_path;        // repository-relative
    std::string requirement;      // natural-language functionality statement
    std::string signature;        // expected def header
    std::string test_command;
    std::string repo_root;
};

struct SampleSet {
    std::vector<EvalSample> samples;
    /// Unparseable or incomplete input lines, cited by line number.
    std::vector<std::string> errors;
};

/// Reads one JSON object per line. Bad lines go to `errors` and parsing
/// continues. Relative repo_root values resolve against the file's
/// directory. A missing file is an InputError.
SampleSet load_samples(const std::string& path);

struct BlankResult {
    /// File with the target body replaced by a lone `pass`.
    std::string file_text;
    /// The replaced body, dedented by its common indentation.
    std::string original_body;
    std::string body_indent;
};

/// Blanks the target's body, keeping signature, decorators and docstring.
/// The namespace must locate exactly one def with a block body; anything
/// else is an InputError.
BlankResult blank_body(const std::string& repo_root, const EvalSample& sample);

/// Replaces the lone `pass` left by blank_body with `body`, re-indented to
/// the target's body indentation with internal relative indentation kept.
/// An empty body or a target that is not in blanked form is an InputError.
std::string splice_body(const std::string& file_text, const EvalSample& sample,
                        const std::string& body);

struct EvalOutcome {
    std::string sample_id;
    bool passed = false;
    std::string generated_body;
    RetrievalDiagnostics diagnostics;
    /// Empty on success, else "retrieve", "generate", "splice" or "test".
    std::string failure_stage;
    std::string note; // error detail for non-test failures
    int test_exit_code = -1;
    bool test_timed_out = false;
    /// Combined test output with scratch paths replaced by "<scratch>".
    std::string test_output;
};

struct EvalConfig {
    RetrievalConfig retrieval; // hops=2 matches the benchmark protocol
    std::size_t context_budget = 24000;
    int timeout_seconds = 60;
    std::size_t embedding_dim = 256;
    std::string model;
    double temperature = 0.0;
};

/// Called with the reference body right before generation, so scripted
/// mock clients can key their reply on it.
using ReferenceBodyHook = std::function<void(const std::string&)>;

/// One sample end to end in a scratch copy of its repository: blank the
/// target, rebuild graph + descriptions, take the n-hop neighborhood of
/// the target as the retrieval (entity extraction and seed search are
/// skipped; the target is known), filter, serialize, generate, splice and
/// run the test command. Stage failures land in failure_stage; only
/// infrastructure errors propagate.
EvalOutcome run_sample(const EvalSample& sample, const EvalConfig& config,
                       const PromptCatalog& catalog, LlmClient& llm,
                       const ReferenceBodyHook& hook = {});

struct BenchmarkReport {
    std::vector<EvalOutcome> outcomes; // ordered by sample_id
    double pass_at_1 = 0.0;
    std::map<std::string, std::size_t> failure_stages;
    std::vector<std::string> sample_errors; // carried over from loading
};

/// pass@k over completed outcomes. Only k=1 is supported (one generation
/// per sample); an empty outcome list or another k is an InputError.
double pass_at_k(const std::vector<EvalOutcome>& outcomes, int k);

/// Runs every sample and aggregates, ordered by sample_id.
BenchmarkReport run_benchmark(const SampleSet& set, const EvalConfig& config,
                              const PromptCatalog& catalog, LlmClient& llm,
                              const ReferenceBodyHook& hook = {});

/// Deterministic JSON rendering of the report.
std::string report_to_json(const BenchmarkReport& report);

/// Plain-text summary ending in a "pass@1 = <percent>" line.
std::string report_summary(const BenchmarkReport& report);

} // namespace codegraph
