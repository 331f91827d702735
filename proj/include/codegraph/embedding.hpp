// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace codegraph {

/// Text embedding contract. Implementations must be deterministic for
/// identical input or raise TransportError on remote failure.
class Embedder {
  public:
    virtual ~Embedder() = default;
    virtual std::size_t dimension() const = 0;
    virtual std::vector<double> embed(const std::string& text) = 0;
};

/// Deterministic offline embedder: signed feature hashing of identifier
/// tokens into a fixed-dimension vector, L2 normalized. An empty token
/// list maps to the zero vector.
class HashingEmbedder final : public Embedder {
  public:
    explicit HashingEmbedder(std::size_t dim = 256) : dim_(dim) {}
    std::size_t dimension() const override { return dim_; }
    std::vector<double> embed(const std::string& text) override;

  private:
    std::size_t dim_;
};

/// HTTP client for an OpenAI-style embeddings endpoint: POST
/// <base_url>/embeddings with {"model","input":[text]} and read
/// data[0].embedding. The declared dimension is enforced on every reply;
/// protocol or transport trouble raises TransportError.
class RemoteEmbedder final : public Embedder {
  public:
    RemoteEmbedder(std::string base_url, std::string model, std::size_t dim,
                   int timeout_seconds = 60);
    std::size_t dimension() const override { return dim_; }
    std::vector<double> embed(const std::string& text) override;

  private:
    std::string base_url_;
    std::string model_;
    std::size_t dim_;
    int timeout_seconds_;
};

/// Cosine similarity; any zero-norm operand yields 0.
double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

double l2_norm(const std::vector<double>& v);

/// FNV-1a 64-bit hash, the bucket/sign source for HashingEmbedder.
std::uint64_t fnv1a64(const std::string& data);

} // namespace codegraph
