// SPDX-License-Identifier: Apache-2.0
#include "codegraph/evalharness.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "codegraph/descriptions.hpp"
#include "codegraph/errors.hpp"
#include "codegraph/generation.hpp"
#include "codegraph/graph.hpp"
#include "codegraph/repo_parser.hpp"
#include "codegraph/subprocess.hpp"

namespace fs = std::filesystem;

namespace codegraph {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    lines.push_back(cur);
    return lines;
}

/// Inverse of split_lines: joins with '\n' without appending a trailing
/// newline beyond what the final element carries.
std::string join_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i) out += '\n';
        out += lines[i];
    }
    return out;
}

bool whitespace_only(const std::string& s) {
    for (char c : s) {
        if (c != ' ' && c != '\t' && c != '\r') return false;
    }
    return true;
}

/// Longest common leading whitespace across lines that carry content.
std::string common_indent(const std::vector<std::string>& lines) {
    std::string common;
    bool first = true;
    for (const std::string& line : lines) {
        if (whitespace_only(line)) continue;
        std::size_t i = 0;
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::string indent = line.substr(0, i);
        if (first) {
            common = indent;
            first = false;
        } else {
            std::size_t j = 0;
            while (j < common.size() && j < indent.size() && common[j] == indent[j]) ++j;
            common.resize(j);
        }
        if (common.empty()) break;
    }
    return common;
}

const DefBodyLayout& locate_layout(const FileParse& parsed, const EvalSample& sample) {
    const DefBodyLayout* found = nullptr;
    for (const DefBodyLayout& layout : parsed.body_layouts) {
        if (layout.qualified_name != sample.target_namespace) continue;
        if (found) {
            throw InputError(sample.file_path + ": namespace '" + sample.target_namespace +
                             "' is ambiguous (defined more than once)");
        }
        found = &layout;
    }
    if (!found) {
        throw InputError(sample.file_path + ": namespace '" + sample.target_namespace +
                         "' not found");
    }
    if (found->inline_body) {
        throw InputError(sample.file_path + ": namespace '" + sample.target_namespace +
                         "' has an inline body, cannot blank it");
    }
    if (found->body_start_line <= 0 || found->body_end_line < found->body_start_line) {
        throw InputError(sample.file_path + ": namespace '" + sample.target_namespace +
                         "' has no body statements");
    }
    return *found;
}

std::string replace_all(std::string text, const std::string& needle, const std::string& with) {
    if (needle.empty()) return text;
    std::size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        text.replace(pos, needle.size(), with);
        pos += with.size();
    }
    return text;
}

/// Deletes the scratch tree when the sample finishes, whatever the path.
struct ScratchDir {
    fs::path path;
    ~ScratchDir() {
        std::error_code ec;
        if (!path.empty()) fs::remove_all(path, ec);
    }
};

fs::path make_scratch_dir() {
    static std::mt19937_64 rng{std::random_device{}()};
    const fs::path base = fs::temp_directory_path();
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::ostringstream name;
        name << "codegraph-eval-" << std::hex << rng();
        fs::path candidate = base / name.str();
        std::error_code ec;
        if (fs::create_directory(candidate, ec) && !ec) return candidate;
    }
    throw TransportError("cannot create a scratch directory under " + base.string());
}

} // namespace

SampleSet load_samples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read samples file " + path);
    const fs::path base = fs::path(path).parent_path();

    SampleSet set;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (whitespace_only(line)) continue;
        ordered_json obj;
        try {
            obj = ordered_json::parse(line);
        } catch (const ordered_json::parse_error& e) {
            set.errors.push_back("line " + std::to_string(line_no) + ": bad JSON: " + e.what());
            continue;
        }
        if (!obj.is_object()) {
            set.errors.push_back("line " + std::to_string(line_no) + ": not a JSON object");
            continue;
        }
        auto field = [&](const char* key, std::string& out) {
            if (!obj.contains(key) || !obj[key].is_string() ||
                obj[key].get<std::string>().empty()) {
                throw InputError(std::string("missing or empty field '") + key + "'");
            }
            out = obj[key].get<std::string>();
        };
        EvalSample sample;
        try {
            field("sample_id", sample.sample_id);
            field("namespace", sample.target_namespace);
            field("file_path", sample.file_path);
            field("requirement", sample.requirement);
            field("signature", sample.signature);
            field("test_command", sample.test_command);
            field("repo_root", sample.repo_root);
        } catch (const InputError& e) {
            set.errors.push_back("line " + std::to_string(line_no) + ": " + e.what());
            continue;
        }
        if (fs::path(sample.repo_root).is_relative()) {
            sample.repo_root = (base / sample.repo_root).string();
        }
        set.samples.push_back(std::move(sample));
    }
    return set;
}

BlankResult blank_body(const std::string& repo_root, const EvalSample& sample) {
    const fs::path file = fs::path(repo_root) / sample.file_path;
    const std::string original = read_file(file);
    FileParse parsed = parse_file(sample.file_path, original);
    const DefBodyLayout& layout = locate_layout(parsed, sample);

    std::vector<std::string> lines = split_lines(original);
    const std::size_t first = static_cast<std::size_t>(layout.body_start_line - 1);
    const std::size_t last = static_cast<std::size_t>(layout.body_end_line - 1);
    if (last >= lines.size()) {
        throw InputError(sample.file_path + ": body span runs past the end of the file");
    }

    std::vector<std::string> body(lines.begin() + static_cast<std::ptrdiff_t>(first),
                                  lines.begin() + static_cast<std::ptrdiff_t>(last) + 1);
    const std::string indent = common_indent(body);
    std::vector<std::string> dedented;
    dedented.reserve(body.size());
    for (const std::string& line : body) {
        if (whitespace_only(line)) {
            dedented.push_back(line);
        } else {
            dedented.push_back(line.substr(indent.size()));
        }
    }

    std::vector<std::string> blanked(lines.begin(), lines.begin() + static_cast<std::ptrdiff_t>(first));
    blanked.push_back(layout.body_indent + "pass");
    blanked.insert(blanked.end(), lines.begin() + static_cast<std::ptrdiff_t>(last) + 1,
                   lines.end());

    BlankResult result;
    result.file_text = join_lines(blanked);
    result.original_body = join_lines(dedented);
    result.body_indent = layout.body_indent;
    return result;
}

std::string splice_body(const std::string& file_text, const EvalSample& sample,
                        const std::string& body) {
    std::string trimmed = body;
    while (!trimmed.empty() &&
           (trimmed.back() == '\n' || trimmed.back() == ' ' || trimmed.back() == '\t' ||
            trimmed.back() == '\r')) {
        trimmed.pop_back();
    }
    if (trimmed.empty()) throw InputError("cannot splice an empty body");

    FileParse parsed = parse_file(sample.file_path, file_text);
    const DefBodyLayout& layout = locate_layout(parsed, sample);

    std::vector<std::string> lines = split_lines(file_text);
    const std::size_t first = static_cast<std::size_t>(layout.body_start_line - 1);
    const std::size_t last = static_cast<std::size_t>(layout.body_end_line - 1);
    if (layout.body_start_line != layout.body_end_line || first >= lines.size() ||
        lines[first] != layout.body_indent + "pass") {
        throw InputError(sample.file_path + ": target '" + sample.target_namespace +
                         "' is not in blanked form");
    }

    std::vector<std::string> body_lines = split_lines(trimmed);
    const std::string inner = common_indent(body_lines);
    std::vector<std::string> indented;
    indented.reserve(body_lines.size());
    for (const std::string& line : body_lines) {
        if (whitespace_only(line)) {
            indented.push_back(line);
        } else {
            indented.push_back(layout.body_indent + line.substr(inner.size()));
        }
    }

    std::vector<std::string> out(lines.begin(), lines.begin() + static_cast<std::ptrdiff_t>(first));
    out.insert(out.end(), indented.begin(), indented.end());
    out.insert(out.end(), lines.begin() + static_cast<std::ptrdiff_t>(last) + 1, lines.end());
    return join_lines(out);
}

EvalOutcome run_sample(const EvalSample& sample, const EvalConfig& config,
                       const PromptCatalog& catalog, LlmClient& llm,
                       const ReferenceBodyHook& hook) {
    EvalOutcome outcome;
    outcome.sample_id = sample.sample_id;

    ScratchDir scratch{make_scratch_dir()};
    std::error_code ec;
    fs::copy(sample.repo_root, scratch.path, fs::copy_options::recursive, ec);
    if (ec) {
        throw TransportError("cannot copy " + sample.repo_root + " to scratch: " + ec.message());
    }

    // Blank the target body first so everything downstream sees the
    // repository exactly as the benchmark defines it.
    BlankResult blank;
    try {
        blank = blank_body(scratch.path.string(), sample);
    } catch (const InputError& e) {
        outcome.failure_stage = "splice";
        outcome.note = e.what();
        return outcome;
    }
    write_file(scratch.path / sample.file_path, blank.file_text);

    PropertyGraph graph = build_graph(parse_repository(scratch.path.string(), {}));
    attach_descriptions(graph, nullptr, nullptr);

    if (!graph.contains(sample.target_namespace)) {
        outcome.failure_stage = "retrieve";
        outcome.note = "target node '" + sample.target_namespace + "' not in the graph";
        return outcome;
    }

    // The benchmark protocol skips query-entity extraction and seed
    // search: retrieval starts from the known target node.
    RetrievalDiagnostics& diag = outcome.diagnostics;
    diag.entity_source = "skipped";
    diag.notes.push_back("seeded by the eval target; entity extraction skipped");
    diag.seed_ids = {sample.target_namespace};
    diag.seed_count = 1;
    diag.hops = config.retrieval.hops;

    HashingEmbedder embedder(config.embedding_dim);
    Subgraph expanded =
        n_hop_subgraph(graph, {sample.target_namespace}, config.retrieval.hops);
    diag.expanded_count = expanded.node_ids.size();

    auto [filtered, scores] =
        filter_subgraph(graph, expanded, sample.requirement, config.retrieval, embedder);
    diag.filtered_count = filtered.node_ids.size();

    PromptContext ctx = serialize_subgraph(graph, filtered, scores, config.context_budget);
    const std::string task = sample.requirement + "\n\nSignature: " + sample.signature;

    ChatRequest request;
    request.messages = build_generation_prompt(task, ctx, catalog);
    request.model = config.model;
    request.temperature = config.temperature;

    if (hook) hook(blank.original_body);

    GeneratedCode code;
    try {
        code = generate_code(request, llm);
    } catch (const Error& e) {
        outcome.failure_stage = "generate";
        outcome.note = e.what();
        return outcome;
    }
    outcome.generated_body = code.code_text;

    std::string spliced;
    try {
        spliced = splice_body(blank.file_text, sample, code.code_text);
    } catch (const InputError& e) {
        outcome.failure_stage = "splice";
        outcome.note = e.what();
        return outcome;
    }
    write_file(scratch.path / sample.file_path, spliced);

    CommandResult test = run_command(sample.test_command, scratch.path.string(),
                                     config.timeout_seconds);
    outcome.test_exit_code = test.exit_code;
    outcome.test_timed_out = test.timed_out;
    outcome.test_output = replace_all(test.output, scratch.path.string(), "<scratch>");

    if (test.timed_out || test.exit_code != 0) {
        outcome.failure_stage = "test";
        return outcome;
    }
    outcome.passed = true;
    return outcome;
}

double pass_at_k(const std::vector<EvalOutcome>& outcomes, int k) {
    if (outcomes.empty()) throw InputError("pass@k over an empty outcome list");
    if (k != 1) {
        throw InputError("pass@" + std::to_string(k) +
                         " needs multiple generations per sample; only k=1 is supported");
    }
    std::size_t passed = 0;
    for (const EvalOutcome& o : outcomes) {
        if (o.passed) ++passed;
    }
    return static_cast<double>(passed) / static_cast<double>(outcomes.size());
}

BenchmarkReport run_benchmark(const SampleSet& set, const EvalConfig& config,
                              const PromptCatalog& catalog, LlmClient& llm,
                              const ReferenceBodyHook& hook) {
    BenchmarkReport report;
    report.sample_errors = set.errors;

    std::vector<EvalSample> ordered = set.samples;
    std::sort(ordered.begin(), ordered.end(),
              [](const EvalSample& a, const EvalSample& b) { return a.sample_id < b.sample_id; });

    for (const EvalSample& sample : ordered) {
        report.outcomes.push_back(run_sample(sample, config, catalog, llm, hook));
    }
    for (const EvalOutcome& o : report.outcomes) {
        if (!o.failure_stage.empty()) ++report.failure_stages[o.failure_stage];
    }
    report.pass_at_1 = pass_at_k(report.outcomes, 1);
    return report;
}

std::string report_to_json(const BenchmarkReport& report) {
    ordered_json doc;
    doc["pass_at_1"] = report.pass_at_1;
    doc["total"] = report.outcomes.size();
    std::size_t passed = 0;
    for (const EvalOutcome& o : report.outcomes) {
        if (o.passed) ++passed;
    }
    doc["passed"] = passed;

    ordered_json stages = ordered_json::object();
    for (const auto& [stage, count] : report.failure_stages) stages[stage] = count;
    doc["failure_stages"] = std::move(stages);
    doc["sample_errors"] = report.sample_errors;

    ordered_json outcomes = ordered_json::array();
    for (const EvalOutcome& o : report.outcomes) {
        ordered_json rec;
        rec["sample_id"] = o.sample_id;
        rec["passed"] = o.passed;
        rec["failure_stage"] = o.failure_stage;
        rec["note"] = o.note;
        rec["generated_body"] = o.generated_body;
        rec["test_exit_code"] = o.test_exit_code;
        rec["test_timed_out"] = o.test_timed_out;
        rec["test_output"] = o.test_output;
        ordered_json diag;
        diag["entity_source"] = o.diagnostics.entity_source;
        diag["seed_ids"] = o.diagnostics.seed_ids;
        diag["seed_count"] = o.diagnostics.seed_count;
        diag["expanded_count"] = o.diagnostics.expanded_count;
        diag["filtered_count"] = o.diagnostics.filtered_count;
        diag["hops"] = o.diagnostics.hops;
        diag["notes"] = o.diagnostics.notes;
        rec["diagnostics"] = std::move(diag);
        outcomes.push_back(std::move(rec));
    }
    doc["outcomes"] = std::move(outcomes);
    return doc.dump(2) + "\n";
}

std::string report_summary(const BenchmarkReport& report) {
    std::ostringstream out;
    std::size_t passed = 0;
    for (const EvalOutcome& o : report.outcomes) {
        if (o.passed) ++passed;
        out << (o.passed ? "PASS" : "FAIL") << "  " << o.sample_id;
        if (!o.failure_stage.empty()) out << "  (stage: " << o.failure_stage << ")";
        out << "\n";
    }
    for (const std::string& err : report.sample_errors) {
        out << "SKIP  " << err << "\n";
    }
    double percent = report.pass_at_1 * 100.0;
    std::ostringstream pct;
    pct.setf(std::ios::fixed);
    pct.precision(1);
    pct << percent;
    out << "pass@1 = " << pct.str() << "% (" << passed << "/" << report.outcomes.size()
        << " passed)\n";
    return out.str();
}

} // namespace codegraph
