// SPDX-License-Identifier: Apache-2.0
#include "codegraph/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>

#include "codegraph/errors.hpp"

namespace codegraph {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

/// Cuts an unquoted '#' comment off the line.
std::string strip_comment(const std::string& line) {
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quote) {
            if (c == quote) quote = 0;
        } else if (c == '"' || c == '\'') {
            quote = c;
        } else if (c == '#') {
            return line.substr(0, i);
        }
    }
    return line;
}

std::string unquote(const std::string& raw, const std::string& where) {
    std::string v = trim(raw);
    for (char q : {'"', '\''}) {
        if (v.size() >= 2 && v.front() == q && v.back() == q) {
            return v.substr(1, v.size() - 2);
        }
        if (!v.empty() && (v.front() == q || v.back() == q)) {
            throw ConfigError(where + ": unbalanced quotes in '" + raw + "'");
        }
    }
    return v;
}

std::vector<std::string> parse_list(const std::string& raw, const std::string& where) {
    std::string v = trim(raw);
    if (v.size() >= 2 && v.front() == '[' && v.back() == ']') {
        v = v.substr(1, v.size() - 2);
    }
    std::vector<std::string> items;
    std::string cur;
    bool in_quote = false;
    for (char c : v) {
        if (c == '"') {
            in_quote = !in_quote;
            cur.push_back(c);
        } else if (c == ',' && !in_quote) {
            std::string item = unquote(cur, where);
            if (!item.empty()) items.push_back(item);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    std::string item = unquote(cur, where);
    if (!item.empty()) items.push_back(item);
    return items;
}

long parse_int(const std::string& raw, const std::string& where) {
    std::string v = unquote(raw, where);
    try {
        std::size_t used = 0;
        long out = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ConfigError(where + ": '" + v + "' is not an integer");
    }
}

double parse_double(const std::string& raw, const std::string& where) {
    std::string v = unquote(raw, where);
    try {
        std::size_t used = 0;
        double out = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ConfigError(where + ": '" + v + "' is not a number");
    }
}

std::size_t parse_size(const std::string& raw, const std::string& where) {
    long v = parse_int(raw, where);
    if (v < 0) throw ConfigError(where + ": negative value " + std::to_string(v));
    return static_cast<std::size_t>(v);
}

/// key -> assignment from raw text; shared by the file loader and the
/// environment override pass.
using Setter = std::function<void(Config&, const std::string& raw, const std::string& where)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"repo_root", [](Config& c, const std::string& r, const std::string& w) { c.repo_root = unquote(r, w); }},
        {"include", [](Config& c, const std::string& r, const std::string& w) { c.include = parse_list(r, w); }},
        {"exclude", [](Config& c, const std::string& r, const std::string& w) { c.exclude = parse_list(r, w); }},
        {"graph_path", [](Config& c, const std::string& r, const std::string& w) { c.graph_path = unquote(r, w); }},
        {"seed_k", [](Config& c, const std::string& r, const std::string& w) { c.seed_k = parse_size(r, w); }},
        {"hops", [](Config& c, const std::string& r, const std::string& w) { c.hops = static_cast<int>(parse_int(r, w)); }},
        {"filter_k", [](Config& c, const std::string& r, const std::string& w) { c.filter_k = parse_size(r, w); }},
        {"fulltext_threshold", [](Config& c, const std::string& r, const std::string& w) { c.fulltext_threshold = parse_double(r, w); }},
        {"vector_threshold", [](Config& c, const std::string& r, const std::string& w) { c.vector_threshold = parse_double(r, w); }},
        {"embedding_dim", [](Config& c, const std::string& r, const std::string& w) { c.embedding_dim = parse_size(r, w); }},
        {"embedder_mode", [](Config& c, const std::string& r, const std::string& w) { c.embedder_mode = unquote(r, w); }},
        {"embedder_base_url", [](Config& c, const std::string& r, const std::string& w) { c.embedder_base_url = unquote(r, w); }},
        {"embedder_model", [](Config& c, const std::string& r, const std::string& w) { c.embedder_model = unquote(r, w); }},
        {"llm_mode", [](Config& c, const std::string& r, const std::string& w) { c.llm_mode = unquote(r, w); }},
        {"llm_base_url", [](Config& c, const std::string& r, const std::string& w) { c.llm_base_url = unquote(r, w); }},
        {"llm_model", [](Config& c, const std::string& r, const std::string& w) { c.llm_model = unquote(r, w); }},
        {"llm_temperature", [](Config& c, const std::string& r, const std::string& w) { c.llm_temperature = parse_double(r, w); }},
        {"llm_mock_response", [](Config& c, const std::string& r, const std::string& w) { c.llm_mock_response = unquote(r, w); }},
        {"context_budget", [](Config& c, const std::string& r, const std::string& w) { c.context_budget = parse_size(r, w); }},
        {"eval_timeout_seconds", [](Config& c, const std::string& r, const std::string& w) { c.eval_timeout_seconds = static_cast<int>(parse_int(r, w)); }},
        {"prompts_dir", [](Config& c, const std::string& r, const std::string& w) { c.prompts_dir = unquote(r, w); }},
        {"jobs", [](Config& c, const std::string& r, const std::string& w) { c.jobs = static_cast<int>(parse_int(r, w)); }},
    };
    return table;
}

} // namespace

Config load_config_file(const std::string& path, Config base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string text = trim(strip_comment(line));
        if (text.empty()) continue;
        const std::string where = path + ":" + std::to_string(line_no);
        std::size_t eq = text.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(where + ": expected 'key = value', got '" + text + "'");
        }
        std::string key = trim(text.substr(0, eq));
        std::string value = trim(text.substr(eq + 1));
        auto it = setters().find(key);
        if (it == setters().end()) {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
        it->second(base, value, where);
    }
    return base;
}

Config apply_env(Config base) {
    for (const auto& [key, setter] : setters()) {
        std::string env_name = "CODEGRAPH_";
        for (char c : key) {
            env_name += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        }
        if (const char* value = std::getenv(env_name.c_str())) {
            setter(base, value, "$" + env_name);
        }
    }
    return base;
}

void validate_config(const Config& config) {
    if (config.hops < 0) throw ConfigError("hops must be >= 0");
    if (config.jobs < 0) throw ConfigError("jobs must be >= 0");
    if (config.embedding_dim == 0) throw ConfigError("embedding_dim must be >= 1");
    if (config.context_budget == 0) throw ConfigError("context_budget must be >= 1");
    if (config.eval_timeout_seconds <= 0) throw ConfigError("eval_timeout_seconds must be >= 1");
    if (!std::isfinite(config.fulltext_threshold)) throw ConfigError("fulltext_threshold must be finite");
    if (!std::isfinite(config.vector_threshold)) throw ConfigError("vector_threshold must be finite");
    if (config.llm_temperature < 0.0 || !std::isfinite(config.llm_temperature)) {
        throw ConfigError("llm_temperature must be >= 0");
    }
    if (config.embedder_mode != "default" && config.embedder_mode != "remote") {
        throw ConfigError("embedder_mode must be 'default' or 'remote', got '" +
                          config.embedder_mode + "'");
    }
    if (config.embedder_mode == "remote" && config.embedder_base_url.empty()) {
        throw ConfigError("embedder_mode = remote needs embedder_base_url");
    }
    if (config.llm_mode != "mock" && config.llm_mode != "mock:echo-reference" &&
        config.llm_mode != "mock:always-pass-keyword" && config.llm_mode != "remote") {
        throw ConfigError("llm_mode must be one of mock, mock:echo-reference, "
                          "mock:always-pass-keyword, remote; got '" +
                          config.llm_mode + "'");
    }
    if (config.llm_mode == "remote" && config.llm_base_url.empty()) {
        throw ConfigError("llm_mode = remote needs llm_base_url");
    }
    if (config.include.empty()) throw ConfigError("include cannot be empty");
}

std::unique_ptr<Embedder> make_embedder(const Config& config) {
    if (config.embedder_mode == "remote") {
        return std::make_unique<RemoteEmbedder>(config.embedder_base_url, config.embedder_model,
                                                config.embedding_dim);
    }
    return std::make_unique<HashingEmbedder>(config.embedding_dim);
}

std::unique_ptr<LlmClient> make_llm_client(const Config& config) {
    if (config.llm_mode == "remote") {
        return std::make_unique<RemoteLlmClient>(config.llm_base_url);
    }
    if (config.llm_mode == "mock:echo-reference") {
        return std::make_unique<MockLlmClient>(MockLlmClient::Mode::EchoReference);
    }
    if (config.llm_mode == "mock:always-pass-keyword") {
        return std::make_unique<MockLlmClient>(MockLlmClient::Mode::AlwaysPassKeyword);
    }
    auto mock = std::make_unique<MockLlmClient>(MockLlmClient::Mode::Canned);
    if (!config.llm_mock_response.empty()) mock->set_default_response(config.llm_mock_response);
    return mock;
}

RetrievalConfig retrieval_config(const Config& config) {
    RetrievalConfig rc;
    rc.seed_k = config.seed_k;
    rc.hops = config.hops;
    rc.filter_k = config.filter_k;
    rc.fulltext_threshold = config.fulltext_threshold;
    rc.vector_threshold = config.vector_threshold;
    return rc;
}

EvalConfig eval_config(const Config& config) {
    EvalConfig ec;
    ec.retrieval = retrieval_config(config);
    ec.context_budget = config.context_budget;
    ec.timeout_seconds = config.eval_timeout_seconds;
    ec.embedding_dim = config.embedding_dim;
    ec.model = config.llm_model;
    ec.temperature = config.llm_temperature;
    return ec;
}

} // namespace codegraph
