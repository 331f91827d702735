// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace codegraph {

/// Matches a forward-slash relative path against a glob pattern.
/// `*` and `?` match within one path segment; `**` spans segments.
bool glob_match(const std::string& pattern, const std::string& path);

/// True when `path` matches any pattern in `patterns`.
bool glob_match_any(const std::vector<std::string>& patterns, const std::string& path);

} // namespace codegraph
