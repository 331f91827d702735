// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "codegraph/span.hpp"

namespace codegraph {

/// One logical line of Python source: a physical line plus any continuation
/// lines joined to it by open brackets, backslashes or unterminated
/// triple-quoted strings.
struct LogicalLine {
    int start_line = 0; // 1-based physical line numbers, inclusive
    int end_line = 0;
    /// Leading whitespace of the first physical line.
    std::string indent;
    /// Joined text with the indent stripped; continuation newlines kept.
    std::string text;
    /// True when the line is blank or a comment only.
    bool blank = false;
};

/// Splits source into logical lines. Tracks bracket depth, backslash
/// continuations and single/triple-quoted strings (with r/b/u/f prefixes)
/// so that `(`, `#` and newlines inside strings do not confuse the split.
/// When `unterminated` is non-null it reports whether the file ended inside
/// an open bracket or triple-quoted string.
std::vector<LogicalLine> logical_lines(const std::string& source, bool* unterminated = nullptr);

/// A dotted name chain observed in code, e.g. `os.path.join(x)` yields
/// parts {os, path, join} with is_call=true. `self.radius` yields
/// {self, radius} with is_call=false.
struct NameChain {
    std::vector<std::string> parts;
    bool is_call = false;
    /// True when the chain is immediately followed by a bare `=`
    /// (an assignment target, not a usage).
    bool assigned = false;
    int line = 0; // 1-based physical line of the first part
    int col = 0;  // 0-based column of the first part
};

/// Scans a code fragment for dotted name chains, skipping string literals
/// and comments. `first_line` is the physical line number of the first
/// character of `text`; `base_col` the column where that line starts.
std::vector<NameChain> scan_name_chains(const std::string& text, int first_line, int base_col);

/// Parsed pieces of a `def` header.
struct DefHeader {
    std::string name;
    std::vector<std::string> params; // bare names, defaults/annotations stripped
    bool valid = false;
};

/// Parses `def name(params) -> ret:` headers, tolerating multi-line
/// parameter lists and annotations.
DefHeader parse_def_header(const std::string& logical_text);

/// Parsed pieces of a `class` header.
struct ClassHeader {
    std::string name;
    std::vector<std::string> bases;
    bool valid = false;
};

ClassHeader parse_class_header(const std::string& logical_text);

/// Strips quotes/prefix from a string literal logical line if the line is
/// exactly one string literal (a docstring candidate). Returns false when
/// the line is not a lone string literal.
bool docstring_literal(const std::string& logical_text, std::string& out);

/// True when the logical line begins a string literal (used to detect
/// docstring statements without unquoting them).
bool starts_with_string_literal(const std::string& logical_text);

/// Names called from a code fragment, in first-occurrence order without
/// duplicates. For attribute calls like `obj.area()` only the final
/// attribute name is kept. Lines that are def/class headers, decorators
/// or imports are skipped.
std::vector<std::string> callee_names(const std::string& entity_source);

/// First def/class logical line of an entity's source text, skipping
/// decorators. Empty when the source has no such line.
std::string entity_header_line(const std::string& entity_source);

/// Docstring of the entity's own block: the lone string literal standing
/// as the first statement after the header. Empty when absent.
std::string entity_docstring(const std::string& entity_source);

/// Module docstring: the lone string literal standing as the file's first
/// statement. Empty when absent.
std::string module_docstring(const std::string& source);

/// Replaces string-literal interiors and comments with spaces (quote marks
/// kept) so lexical scans can ignore their content. Multi-line strings are
/// tracked across lines.
std::string blank_strings_and_comments(const std::string& source);

} // namespace codegraph
