// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <tuple>
#include <vector>

namespace codegraph {

/// A contiguous region of one source file.
///
/// Lines are 1-based and inclusive on both ends; columns are 0-based with
/// an inclusive start and an exclusive end (so an empty span has
/// start == end). Paths always use forward slashes relative to the scanned
/// repository root.
struct SourceSpan {
    std::string file_path;
    int start_line = 1;
    int start_col = 0;
    int end_line = 1;
    int end_col = 0;

    friend bool operator==(const SourceSpan& a, const SourceSpan& b) {
        return std::tie(a.file_path, a.start_line, a.start_col, a.end_line, a.end_col) ==
               std::tie(b.file_path, b.start_line, b.start_col, b.end_line, b.end_col);
    }
    friend bool operator<(const SourceSpan& a, const SourceSpan& b) {
        return std::tie(a.file_path, a.start_line, a.start_col, a.end_line, a.end_col) <
               std::tie(b.file_path, b.start_line, b.start_col, b.end_line, b.end_col);
    }
};

/// Byte offsets of the first character of every physical line.
/// "a\nb\n" has three lines: "a", "b" and a final empty line.
std::vector<std::size_t> line_starts(const std::string& text);

/// Extract the exact bytes covered by a span. The span's positions must be
/// valid for the given text (callers get spans from the parser, which
/// guarantees this).
std::string slice(const std::string& text, const SourceSpan& span);

/// True when `outer` covers `inner` and the two differ (proper containment).
bool strictly_contains(const SourceSpan& outer, const SourceSpan& inner);

} // namespace codegraph
