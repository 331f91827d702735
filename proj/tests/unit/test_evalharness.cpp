// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <codegraph/errors.hpp>
#include <codegraph/evalharness.hpp>
#include <codegraph/llm.hpp>
#include <codegraph/prompts.hpp>
#include <codegraph/subprocess.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>

using namespace codegraph;
namespace fs = std::filesystem;

namespace {

const std::string kRepoRoot = CODEGRAPH_REPO_ROOT;
const std::string kSamples = kRepoRoot + "/tests/fixtures/minibench/samples.jsonl";

std::string read_file(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("run_command captures output and exit codes") {
    CommandResult ok = run_command("echo out; echo err 1>&2; exit 0", "/tmp", 10);
    CHECK(ok.exit_code == 0);
    CHECK_FALSE(ok.timed_out);
    CHECK(ok.output.find("out") != std::string::npos);
    CHECK(ok.output.find("err") != std::string::npos);

    CommandResult fail = run_command("exit 3", "/tmp", 10);
    CHECK(fail.exit_code == 3);

    CommandResult cwd = run_command("pwd", "/usr", 10);
    CHECK(cwd.output.find("/usr") == 0);
}

TEST_CASE("run_command kills over-budget process groups") {
    const auto t0 = std::chrono::steady_clock::now();
    CommandResult r = run_command("sleep 30", "/tmp", 1);
    const auto elapsed = std::chrono::steady_clock::now() - t0;
    CHECK(r.timed_out);
    CHECK(std::chrono::duration_cast<std::chrono::seconds>(elapsed).count() < 10);
}

TEST_CASE("samples load with resolved repo roots") {
    SampleSet set = load_samples(kSamples);
    CHECK(set.errors.empty());
    REQUIRE(set.samples.size() == 6);
    const EvalSample& s = set.samples[0];
    CHECK(s.sample_id == "calc-add");
    CHECK(s.target_namespace == "ops.add");
    CHECK(s.file_path == "ops.py");
    CHECK(fs::path(s.repo_root).is_absolute());
    CHECK(fs::exists(fs::path(s.repo_root) / "ops.py"));
}

TEST_CASE("malformed sample lines become errors, not crashes") {
    fs::path p = fs::temp_directory_path() / "cg-bad-samples.jsonl";
    std::ofstream(p) << "{\"sample_id\": \"x\"}\n"
                     << "not json\n"
                     << "\n"
                     << R"({"sample_id":"ok","namespace":"m.f","file_path":"m.py",)"
                     << R"("requirement":"r","signature":"def f():","test_command":"true",)"
                     << R"("repo_root":"."})"
                     << "\n";
    SampleSet set = load_samples(p.string());
    CHECK(set.samples.size() == 1);
    CHECK(set.samples[0].sample_id == "ok");
    REQUIRE(set.errors.size() == 2);
    CHECK(set.errors[0].find("line 1") != std::string::npos);
    CHECK(set.errors[1].find("line 2") != std::string::npos);
    fs::remove(p);
}

TEST_CASE("blanking preserves everything but the body") {
    SampleSet set = load_samples(kSamples);
    const EvalSample& s = set.samples[0]; // calc-add
    BlankResult blank = blank_body(s.repo_root, s);

    const std::string original = read_file(fs::path(s.repo_root) / s.file_path);
    CHECK(blank.file_text != original);
    CHECK(blank.file_text.find(s.signature) != std::string::npos);
    CHECK(blank.file_text.find(blank.body_indent + "pass") != std::string::npos);
    CHECK_FALSE(blank.original_body.empty());
    // The stored body is dedented to column zero.
    CHECK(blank.original_body[0] != ' ');
}

TEST_CASE("blank then splice is byte-exact for every benchmark sample") {
    SampleSet set = load_samples(kSamples);
    REQUIRE(set.samples.size() == 6);
    for (const EvalSample& s : set.samples) {
        CAPTURE(s.sample_id);
        const std::string original = read_file(fs::path(s.repo_root) / s.file_path);
        BlankResult blank = blank_body(s.repo_root, s);
        const std::string restored = splice_body(blank.file_text, s, blank.original_body);
        REQUIRE(restored == original);
    }
}

TEST_CASE("splice rejects unusable input") {
    SampleSet set = load_samples(kSamples);
    const EvalSample& s = set.samples[0];
    BlankResult blank = blank_body(s.repo_root, s);

    CHECK_THROWS_AS(splice_body(blank.file_text, s, "   \n  \n"), InputError);

    const std::string original = read_file(fs::path(s.repo_root) / s.file_path);
    CHECK_THROWS_WITH_AS(splice_body(original, s, "return 1"), doctest::Contains("blanked"),
                         InputError);
}

TEST_CASE("splice reindents dedented bodies") {
    SampleSet set = load_samples(kSamples);
    const EvalSample& s = set.samples[0];
    BlankResult blank = blank_body(s.repo_root, s);
    std::string spliced = splice_body(blank.file_text, s, "x = 1\nif x:\n    x += 1\nreturn x");
    CHECK(spliced.find(blank.body_indent + "x = 1\n") != std::string::npos);
    CHECK(spliced.find(blank.body_indent + "if x:\n") != std::string::npos);
    CHECK(spliced.find(blank.body_indent + "    x += 1\n") != std::string::npos);
}

TEST_CASE("pass@k guards its domain") {
    CHECK_THROWS_AS(pass_at_k({}, 1), InputError);
    EvalOutcome win;
    win.passed = true;
    EvalOutcome loss;
    CHECK_THROWS_AS(pass_at_k({win}, 2), InputError);
    CHECK(pass_at_k({win, loss}, 1) == doctest::Approx(0.5));
    CHECK(pass_at_k({win, win}, 1) == doctest::Approx(1.0));
}

TEST_CASE("run_sample passes with the reference body echoed back") {
    SampleSet set = load_samples(kSamples);
    PromptCatalog catalog = PromptCatalog::load(kRepoRoot + "/prompts");
    MockLlmClient llm(MockLlmClient::Mode::EchoReference);
    EvalConfig config;

    EvalOutcome out = run_sample(set.samples[0], config, catalog, llm,
                                 [&llm](const std::string& body) { llm.set_reference_body(body); });
    CHECK(out.passed);
    CHECK(out.failure_stage.empty());
    CHECK(out.test_exit_code == 0);
    CHECK(out.diagnostics.entity_source == "skipped");
    CHECK(out.diagnostics.seed_ids == std::vector<std::string>{"ops.add"});
    CHECK(out.diagnostics.seed_count == 1);
    CHECK(out.diagnostics.hops == 2);
    CHECK(out.generated_body.find("return") != std::string::npos);
}

TEST_CASE("run_sample reports the failing stage") {
    SampleSet set = load_samples(kSamples);
    PromptCatalog catalog = PromptCatalog::load(kRepoRoot + "/prompts");
    EvalConfig config;

    SUBCASE("wrong code fails at the test stage") {
        MockLlmClient llm(MockLlmClient::Mode::AlwaysPassKeyword);
        EvalOutcome out = run_sample(set.samples[0], config, catalog, llm, {});
        CHECK_FALSE(out.passed);
        CHECK(out.failure_stage == "test");
        CHECK(out.test_exit_code != 0);
    }
    SUBCASE("prose fails at the generate stage") {
        MockLlmClient llm;
        llm.set_default_response("Sorry, I can only describe the approach.");
        EvalOutcome out = run_sample(set.samples[0], config, catalog, llm, {});
        CHECK_FALSE(out.passed);
        CHECK(out.failure_stage == "generate");
    }
    SUBCASE("a bogus namespace fails while blanking, attributed to splice") {
        EvalSample ghost = set.samples[0];
        ghost.target_namespace = "ops.nonexistent";
        MockLlmClient llm(MockLlmClient::Mode::EchoReference);
        EvalOutcome out = run_sample(ghost, config, catalog, llm, {});
        CHECK_FALSE(out.passed);
        CHECK(out.failure_stage == "splice");
    }
}

TEST_CASE("scratch paths never leak into outcomes") {
    SampleSet set = load_samples(kSamples);
    PromptCatalog catalog = PromptCatalog::load(kRepoRoot + "/prompts");
    MockLlmClient llm(MockLlmClient::Mode::AlwaysPassKeyword);
    EvalConfig config;
    EvalOutcome out = run_sample(set.samples[0], config, catalog, llm, {});
    CHECK(out.test_output.find("/tmp/") == std::string::npos);
    CHECK(out.test_output.find("codegraph-eval-") == std::string::npos);
}

TEST_CASE("benchmark reports aggregate deterministically") {
    SampleSet set = load_samples(kSamples);
    PromptCatalog catalog = PromptCatalog::load(kRepoRoot + "/prompts");
    MockLlmClient llm(MockLlmClient::Mode::EchoReference);
    EvalConfig config;
    auto hook = [&llm](const std::string& body) { llm.set_reference_body(body); };

    BenchmarkReport rep = run_benchmark(set, config, catalog, llm, hook);
    CHECK(rep.pass_at_1 == doctest::Approx(1.0));
    CHECK(rep.outcomes.size() == 6);
    CHECK(rep.failure_stages.empty());

    const std::string summary = report_summary(rep);
    CHECK(summary.find("pass@1 = 100.0% (6/6 passed)") != std::string::npos);
    CHECK(summary.find("PASS  calc-add") != std::string::npos);

    BenchmarkReport rep2 = run_benchmark(set, config, catalog, llm, hook);
    CHECK(report_to_json(rep) == report_to_json(rep2));
}
