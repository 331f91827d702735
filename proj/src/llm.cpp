// SPDX-License-Identifier: Apache-2.0
#include "codegraph/llm.hpp"

#include <sstream>

#include "codegraph/embedding.hpp"
#include "codegraph/errors.hpp"

namespace codegraph {

std::string MockLlmClient::fingerprint(const ChatRequest& request) {
    std::ostringstream os;
    for (const ChatMessage& m : request.messages) {
        os << m.role << '\x1f' << m.content << '\x1e';
    }
    os << request.model << '\x1f' << request.temperature;
    std::ostringstream hex;
    hex << std::hex << fnv1a64(os.str());
    return hex.str();
}

void MockLlmClient::set_response(const std::string& fingerprint, std::string response) {
    canned_[fingerprint] = std::move(response);
}

void MockLlmClient::set_default_response(std::string response) {
    default_response_ = std::move(response);
}

void MockLlmClient::set_reference_body(std::string body) {
    reference_body_ = std::move(body);
}

LlmExchange MockLlmClient::chat(const ChatRequest& request) {
    if (request.messages.empty()) throw TransportError("empty message list");
    LlmExchange ex;
    ex.request = request;
    ex.origin = "mock";
    switch (mode_) {
        case Mode::Canned: {
            auto it = canned_.find(fingerprint(request));
            ex.response_text = it != canned_.end() ? it->second : default_response_;
            break;
        }
        case Mode::EchoReference:
            ex.response_text = "```python\n" + reference_body_ + "\n```";
            break;
        case Mode::AlwaysPassKeyword:
            ex.response_text = "```python\npass\n```";
            break;
    }
    return ex;
}

} // namespace codegraph
