// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "codegraph/span.hpp"

namespace codegraph {

enum class EntityKind {
    File,
    Class,
    Method,
    Function,
    Attribute,
};

const char* to_string(EntityKind kind);

/// One extracted code element: file, class, method, function or attribute.
struct CodeEntity {
    EntityKind kind = EntityKind::File;
    std::string name;
    std::string qualified_name;
    SourceSpan span;
    /// Text of the def/class header line(s); empty for files and attributes.
    std::string signature;
    std::string docstring;
    /// Exact source slice at `span`.
    std::string source_text;
    /// Qualified name of the lexically enclosing scope; empty for files.
    std::string parent_qualified_name;
};

/// A resolved call or attribute-access site: `used` is referenced inside
/// the body of `user`.
struct UsageRef {
    std::string used_qualified_name;
    std::string user_qualified_name;
    SourceSpan span;

    friend bool operator==(const UsageRef& a, const UsageRef& b) {
        return std::tie(a.used_qualified_name, a.user_qualified_name, a.span) ==
               std::tie(b.used_qualified_name, b.user_qualified_name, b.span);
    }
    friend bool operator<(const UsageRef& a, const UsageRef& b) {
        return std::tie(a.user_qualified_name, a.used_qualified_name, a.span) <
               std::tie(b.user_qualified_name, b.used_qualified_name, b.span);
    }
};

struct CommentRecord {
    SourceSpan span;
    std::string text;
};

/// An unresolved dotted-name reference observed in an entity body.
/// Candidates are call chains of any length and dotted reads of length
/// two or more; bare name reads stay out to keep diagnostics quiet.
struct NameRef {
    std::vector<std::string> parts;
    bool is_call = false;
    int line = 0; // 1-based
    int col = 0;  // 0-based
    /// Innermost enclosing file/class/function scope.
    std::string user_qualified_name;
};

/// import binding: `local_alias` names `imported_qualified_name` inside the
/// importing module.
struct ImportBinding {
    std::string local_alias;
    std::string imported_qualified_name;
};

/// Layout of a function/method body, used by the eval harness to blank and
/// splice bodies along statement boundaries.
struct DefBodyLayout {
    std::string qualified_name;
    /// Last physical line of the header (the line carrying the colon).
    int header_end_line = 0;
    /// Physical line range of a leading docstring statement, 0/0 when absent.
    int docstring_start_line = 0;
    int docstring_end_line = 0;
    /// Physical line range of the body statements after any docstring.
    int body_start_line = 0;
    int body_end_line = 0;
    /// Raw leading whitespace of the first body statement.
    std::string body_indent;
    /// True for `def f(): stmt` one-liners, which have no blankable block.
    bool inline_body = false;
};

/// Everything extracted from one file.
struct FileParse {
    CodeEntity file;
    std::vector<CodeEntity> entities; // in source order, parents before children
    std::vector<CommentRecord> comments;
    std::vector<ImportBinding> imports;
    std::vector<NameRef> refs;
    std::vector<std::string> diagnostics;
    /// Body layouts for every def in the file, keyed by qualified name.
    std::vector<DefBodyLayout> body_layouts;
};

} // namespace codegraph
