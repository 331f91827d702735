// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace codegraph {

/// Base class for all fatal errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration: unknown mode strings, out-of-range values,
/// missing prompt templates.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Broken inputs that cannot degrade to diagnostics: missing repository
/// root, malformed graph files, duplicate qualified names.
class InputError : public Error {
public:
    using Error::Error;
};

/// Graph-level contract violations (unknown seed ids, dangling doc nodes).
class GraphError : public Error {
public:
    using Error::Error;
};

/// Remote LLM / embedding service failures, carrying the transport cause.
class TransportError : public Error {
public:
    using Error::Error;
};

/// The model response contained no extractable code. Carries the raw
/// response so callers can save it for inspection.
class ExtractionError : public Error {
public:
    explicit ExtractionError(const std::string& what, std::string raw_response = "")
        : Error(what), raw_response_(std::move(raw_response)) {}

    const std::string& raw_response() const { return raw_response_; }

private:
    std::string raw_response_;
};

} // namespace codegraph
