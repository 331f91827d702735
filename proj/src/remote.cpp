// SPDX-License-Identifier: Apache-2.0
// HTTP clients for the chat-completion and embedding endpoints.
#include <chrono>
#include <cstdlib>
#include <memory>
#include <string>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "codegraph/embedding.hpp"
#include "codegraph/errors.hpp"
#include "codegraph/llm.hpp"

namespace codegraph {

namespace {

using nlohmann::json;

/// Splits "http://host:1234/v1" into the origin httplib wants and the
/// path prefix to prepend to endpoint paths.
void split_base_url(const std::string& base_url, std::string& origin, std::string& prefix) {
    std::size_t scheme = base_url.find("://");
    std::size_t path_start =
        base_url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (path_start == std::string::npos) {
        origin = base_url;
        prefix = "";
    } else {
        origin = base_url.substr(0, path_start);
        prefix = base_url.substr(path_start);
    }
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
}

json post_json(const std::string& base_url, const std::string& path, const json& payload,
               int timeout_seconds) {
    std::string origin, prefix;
    split_base_url(base_url, origin, prefix);
    httplib::Client client(origin);
    client.set_connection_timeout(timeout_seconds, 0);
    client.set_read_timeout(timeout_seconds, 0);
    client.set_write_timeout(timeout_seconds, 0);

    httplib::Headers headers;
    if (const char* key = std::getenv("CODEGRAPH_LLM_KEY")) {
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    auto res = client.Post(prefix + path, headers, payload.dump(), "application/json");
    if (!res) {
        throw TransportError("POST " + base_url + path + " failed: " +
                             httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw TransportError("POST " + base_url + path + " returned status " +
                             std::to_string(res->status) + ": " + res->body.substr(0, 512));
    }
    try {
        return json::parse(res->body);
    } catch (const json::parse_error& e) {
        throw TransportError("POST " + base_url + path + " returned unparseable JSON: " +
                             std::string(e.what()));
    }
}

} // namespace

RemoteLlmClient::RemoteLlmClient(std::string base_url, int timeout_seconds)
    : base_url_(std::move(base_url)), timeout_seconds_(timeout_seconds) {}

LlmExchange RemoteLlmClient::chat(const ChatRequest& request) {
    if (request.messages.empty()) throw TransportError("chat request carries no messages");

    json payload;
    payload["model"] = request.model;
    payload["temperature"] = request.temperature;
    json messages = json::array();
    for (const ChatMessage& m : request.messages) {
        messages.push_back({{"role", m.role}, {"content", m.content}});
    }
    payload["messages"] = std::move(messages);

    auto start = std::chrono::steady_clock::now();
    json reply = post_json(base_url_, "/chat/completions", payload, timeout_seconds_);
    auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);

    if (!reply.contains("choices") || !reply["choices"].is_array() || reply["choices"].empty()) {
        throw TransportError("chat response carries no choices");
    }
    const json& first = reply["choices"][0];
    if (!first.contains("message") || !first["message"].contains("content") ||
        !first["message"]["content"].is_string()) {
        throw TransportError("chat response carries no message content");
    }

    LlmExchange ex;
    ex.request = request;
    ex.response_text = first["message"]["content"].get<std::string>();
    ex.latency_seconds = elapsed.count();
    ex.origin = "remote";
    return ex;
}

RemoteEmbedder::RemoteEmbedder(std::string base_url, std::string model, std::size_t dim,
                               int timeout_seconds)
    : base_url_(std::move(base_url)), model_(std::move(model)), dim_(dim),
      timeout_seconds_(timeout_seconds) {}

std::vector<double> RemoteEmbedder::embed(const std::string& text) {
    json payload;
    payload["model"] = model_;
    payload["input"] = json::array({text});

    json reply = post_json(base_url_, "/embeddings", payload, timeout_seconds_);
    if (!reply.contains("data") || !reply["data"].is_array() || reply["data"].empty() ||
        !reply["data"][0].contains("embedding") || !reply["data"][0]["embedding"].is_array()) {
        throw TransportError("embedding response carries no data[0].embedding");
    }
    std::vector<double> vec;
    for (const json& v : reply["data"][0]["embedding"]) {
        if (!v.is_number()) throw TransportError("embedding vector holds a non-number");
        vec.push_back(v.get<double>());
    }
    if (vec.size() != dim_) {
        throw TransportError("embedding dimension " + std::to_string(vec.size()) +
                             " does not match configured dimension " + std::to_string(dim_));
    }
    return vec;
}

} // namespace codegraph
