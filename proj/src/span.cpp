// SPDX-License-Identifier: Apache-2.0
#include "codegraph/span.hpp"

namespace codegraph {

std::vector<std::size_t> line_starts(const std::string& text) {
    std::vector<std::size_t> starts{0};
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\n') starts.push_back(i + 1);
    }
    return starts;
}

std::string slice(const std::string& text, const SourceSpan& span) {
    std::vector<std::size_t> starts = line_starts(text);
    auto offset = [&](int line, int col) -> std::size_t {
        if (line < 1) return 0;
        std::size_t li = static_cast<std::size_t>(line - 1);
        if (li >= starts.size()) return text.size();
        std::size_t off = starts[li] + static_cast<std::size_t>(col);
        return off > text.size() ? text.size() : off;
    };
    std::size_t b = offset(span.start_line, span.start_col);
    std::size_t e = offset(span.end_line, span.end_col);
    if (e < b) e = b;
    return text.substr(b, e - b);
}

bool strictly_contains(const SourceSpan& outer, const SourceSpan& inner) {
    if (outer.file_path != inner.file_path) return false;
    bool starts_before = outer.start_line < inner.start_line ||
                         (outer.start_line == inner.start_line && outer.start_col <= inner.start_col);
    bool ends_after = outer.end_line > inner.end_line ||
                      (outer.end_line == inner.end_line && outer.end_col >= inner.end_col);
    bool equal = outer.start_line == inner.start_line && outer.start_col == inner.start_col &&
                 outer.end_line == inner.end_line && outer.end_col == inner.end_col;
    return starts_before && ends_after && !equal;
}

} // namespace codegraph
