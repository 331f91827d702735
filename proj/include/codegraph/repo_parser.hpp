// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "codegraph/entities.hpp"

namespace codegraph {

struct ParserOptions {
    std::vector<std::string> include = {"**/*.py"};
    std::vector<std::string> exclude;
    /// Worker threads for per-file parsing; 0 means hardware concurrency.
    unsigned jobs = 0;
};

/// Result of parsing a whole repository.
struct RepoParse {
    std::vector<FileParse> files;        // ordered by path
    std::vector<UsageRef> usages;        // resolved cross references
    std::vector<std::string> diagnostics; // unresolved names, odd files
};

struct ScannedFile {
    std::string path; // repo relative, forward slashes
    std::string source;
};

struct ScanResult {
    std::vector<ScannedFile> files; // sorted by path
    std::vector<std::string> diagnostics;
};

/// Reads files under `root` matching the include patterns and not matching
/// any exclude pattern, sorted by path. Unreadable and non-UTF8 files are
/// skipped with a diagnostic. Throws InputError when `root` is not a
/// readable directory.
ScanResult scan_repository(const std::string& root, const ParserOptions& opts);

/// Parses one file's source text. `rel_path` uses forward slashes and is
/// the basis of the module's qualified-name prefix.
FileParse parse_file(const std::string& rel_path, const std::string& source);

/// Resolves dotted-name references across a set of parsed files into
/// usage edges. Unresolvable references become diagnostics.
void resolve_usages(RepoParse& parse);

/// Full pipeline: scan, parse (in parallel), resolve.
RepoParse parse_repository(const std::string& root, const ParserOptions& opts = {});

/// Module qualified name for a repo-relative path:
/// "pkg/mod.py" -> "pkg.mod", "pkg/__init__.py" -> "pkg".
std::string module_name(const std::string& rel_path);

} // namespace codegraph
