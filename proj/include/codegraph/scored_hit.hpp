// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

namespace codegraph {

enum class HitSource { Fulltext, Vector };

/// One search result. For vector hits the id is already reverse-mapped to
/// the owning code node.
struct ScoredHit {
    std::string node_id;
    double score = 0.0;
    HitSource source = HitSource::Fulltext;
};

} // namespace codegraph
