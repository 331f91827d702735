// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

namespace codegraph {

struct ChatMessage {
    std::string role; // "system", "user", "assistant"
    std::string content;
};

struct ChatRequest {
    std::vector<ChatMessage> messages; // first message carries the system role
    std::string model;
    double temperature = 0.0;
};

struct LlmExchange {
    ChatRequest request;
    std::string response_text;
    double latency_seconds = 0.0;
    std::string origin; // "remote" or "mock"
};

/// Chat completion contract. Implementations raise TransportError on
/// infrastructure failure; response content interpretation is the caller's.
class LlmClient {
  public:
    virtual ~LlmClient() = default;
    virtual LlmExchange chat(const ChatRequest& request) = 0;
};

/// Offline stand-in used by tests and the eval harness.
///
/// Modes:
///  - Canned: answers from a fingerprint-keyed table, falling back to a
///    default response.
///  - EchoReference: replies with the reference body (set per call site)
///    inside a Python fence.
///  - AlwaysPassKeyword: replies with a fenced `pass`.
class MockLlmClient final : public LlmClient {
  public:
    enum class Mode { Canned, EchoReference, AlwaysPassKeyword };

    explicit MockLlmClient(Mode mode = Mode::Canned) : mode_(mode) {}

    /// Stable key of a request: FNV-1a over messages, model and temperature.
    static std::string fingerprint(const ChatRequest& request);

    void set_response(const std::string& fingerprint, std::string response);
    void set_default_response(std::string response);
    /// EchoReference mode: the body the next chat() call should echo.
    void set_reference_body(std::string body);

    Mode mode() const { return mode_; }
    LlmExchange chat(const ChatRequest& request) override;

  private:
    Mode mode_;
    std::map<std::string, std::string> canned_;
    std::string default_response_;
    std::string reference_body_;
};

/// HTTP client for an OpenAI-style chat completion endpoint.
/// POSTs to <base_url>/chat/completions and reads
/// choices[0].message.content. The API key comes from the environment
/// variable CODEGRAPH_LLM_KEY when present.
class RemoteLlmClient final : public LlmClient {
  public:
    RemoteLlmClient(std::string base_url, int timeout_seconds = 60);
    LlmExchange chat(const ChatRequest& request) override;

  private:
    std::string base_url_;
    int timeout_seconds_;
};

} // namespace codegraph
