// SPDX-License-Identifier: Apache-2.0
#include "codegraph/pysource.hpp"

#include <cctype>

namespace codegraph {

namespace {

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

/// Recognizes string prefixes like r, b, rb, f, u (any case) directly
/// before a quote character. Returns the prefix length, 0 when absent.
std::size_t string_prefix_len(const std::string& s, std::size_t quote_pos) {
    std::size_t n = 0;
    while (n < 2 && quote_pos >= n + 1) {
        char c = static_cast<char>(std::tolower(static_cast<unsigned char>(s[quote_pos - n - 1])));
        if (c == 'r' || c == 'b' || c == 'u' || c == 'f') {
            ++n;
        } else {
            break;
        }
    }
    // A prefix must not be the tail of a longer identifier: `var = 5` has
    // an `r` before no quote, but `xr"..."` is a name followed by a string
    // only if `x` is not an identifier character.
    if (n > 0 && quote_pos >= n + 1) {
        if (is_ident_char(s[quote_pos - n - 1])) return 0;
    }
    return n;
}

struct StringState {
    bool active = false;
    char quote = '\0';
    bool triple = false;
    bool raw = false;
};

/// Advances through `line` updating bracket depth and string state.
/// When `strip` is non-null, characters inside strings and comments are
/// replaced with spaces there (quotes kept) so later scans can ignore them.
void scan_physical_line(const std::string& line, int& depth, StringState& str,
                        bool& backslash, bool& saw_comment, std::string* strip) {
    saw_comment = false;
    backslash = false;
    std::size_t i = 0;
    const std::size_t n = line.size();
    while (i < n) {
        char c = line[i];
        if (str.active) {
            if (c == '\\' && !str.raw && i + 1 < n) {
                if (strip) {
                    (*strip)[i] = ' ';
                    (*strip)[i + 1] = ' ';
                }
                i += 2;
                continue;
            }
            if (c == str.quote) {
                if (str.triple) {
                    if (i + 2 < n && line[i + 1] == str.quote && line[i + 2] == str.quote) {
                        str.active = false;
                        i += 3;
                        continue;
                    }
                } else {
                    str.active = false;
                    ++i;
                    continue;
                }
            }
            if (strip) (*strip)[i] = ' ';
            ++i;
            continue;
        }
        if (c == '#') {
            saw_comment = true;
            if (strip) {
                for (std::size_t j = i; j < n; ++j) (*strip)[j] = ' ';
            }
            return;
        }
        if (c == '\'' || c == '"') {
            str.active = true;
            str.quote = c;
            str.triple = false;
            str.raw = false;
            std::size_t plen = string_prefix_len(line, i);
            for (std::size_t k = 0; k < plen; ++k) {
                char p = static_cast<char>(std::tolower(static_cast<unsigned char>(line[i - 1 - k])));
                if (p == 'r') str.raw = true;
            }
            if (i + 2 < n && line[i + 1] == c && line[i + 2] == c) {
                str.triple = true;
                i += 3;
            } else {
                ++i;
            }
            continue;
        }
        if (c == '(' || c == '[' || c == '{') ++depth;
        if (c == ')' || c == ']' || c == '}') {
            if (depth > 0) --depth;
        }
        if (c == '\\' && i + 1 == n) {
            backslash = true;
            if (strip) (*strip)[i] = ' ';
            ++i;
            continue;
        }
        ++i;
    }
    // An unterminated single-quoted string at end of line is a syntax
    // error in real Python; treat it as closed so scanning can recover.
    if (str.active && !str.triple) str.active = false;
}

std::vector<std::string> split_physical(const std::string& source) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : source) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    lines.push_back(cur);
    return lines;
}

std::string leading_ws(const std::string& s) {
    std::size_t i = 0;
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    return s.substr(0, i);
}

bool only_ws(const std::string& s) {
    for (char c : s) {
        if (c != ' ' && c != '\t' && c != '\r') return false;
    }
    return true;
}

} // namespace

std::vector<LogicalLine> logical_lines(const std::string& source, bool* unterminated) {
    std::vector<std::string> phys = split_physical(source);
    // A trailing newline produces one final empty physical line; it is not
    // a logical line of its own.
    if (unterminated) *unterminated = false;
    std::vector<LogicalLine> out;
    std::size_t i = 0;
    while (i < phys.size()) {
        const std::string& first = phys[i];
        if (i + 1 == phys.size() && first.empty() && !out.empty()) break;

        // Comment-only and blank physical lines stand alone.
        std::string trimmed = first;
        std::size_t w = 0;
        while (w < trimmed.size() && (trimmed[w] == ' ' || trimmed[w] == '\t')) ++w;
        if (only_ws(first) || (w < first.size() && first[w] == '#')) {
            LogicalLine ll;
            ll.start_line = static_cast<int>(i) + 1;
            ll.end_line = ll.start_line;
            ll.indent = leading_ws(first);
            ll.text = first.substr(ll.indent.size());
            ll.blank = true;
            out.push_back(std::move(ll));
            ++i;
            continue;
        }

        LogicalLine ll;
        ll.start_line = static_cast<int>(i) + 1;
        ll.indent = leading_ws(first);
        int depth = 0;
        StringState str;
        std::string text;
        std::size_t j = i;
        while (j < phys.size()) {
            bool backslash = false;
            bool comment = false;
            scan_physical_line(phys[j], depth, str, backslash, comment, nullptr);
            std::string part = phys[j];
            if (!part.empty() && part.back() == '\r') part.pop_back();
            if (j == i) part = part.substr(ll.indent.size());
            if (backslash && !part.empty()) part.pop_back();
            if (!text.empty()) text += "\n";
            text += part;
            bool continues = str.active || depth > 0 || backslash;
            if (!continues) break;
            ++j;
            if (j >= phys.size() && unterminated) *unterminated = true;
        }
        if (j >= phys.size()) j = phys.size() - 1;
        ll.end_line = static_cast<int>(j) + 1;
        ll.text = std::move(text);
        ll.blank = false;
        out.push_back(std::move(ll));
        i = j + 1;
    }
    return out;
}

std::vector<NameChain> scan_name_chains(const std::string& text, int first_line, int base_col) {
    // Blank out strings and comments, then walk identifiers.
    std::vector<std::string> phys = split_physical(text);
    std::vector<std::string> clean = phys;
    {
        int depth = 0;
        StringState str;
        for (std::size_t li = 0; li < phys.size(); ++li) {
            bool bs = false, cm = false;
            clean[li] = phys[li];
            scan_physical_line(phys[li], depth, str, bs, cm, &clean[li]);
        }
    }

    std::vector<NameChain> chains;
    const char* keywords[] = {"if",     "elif",  "else",   "for",    "while", "return",
                              "yield",  "import", "from",  "as",     "def",   "class",
                              "pass",   "break",  "continue", "raise", "try", "except",
                              "finally", "with",  "lambda", "not",    "and",   "or",
                              "in",     "is",     "None",   "True",   "False", "del",
                              "global", "nonlocal", "assert", "await", "async"};
    auto is_keyword = [&](const std::string& s) {
        for (const char* k : keywords) {
            if (s == k) return true;
        }
        return false;
    };

    for (std::size_t li = 0; li < clean.size(); ++li) {
        const std::string& line = clean[li];
        std::size_t i = 0;
        const std::size_t n = line.size();
        while (i < n) {
            if (!is_ident_start(line[i])) {
                ++i;
                continue;
            }
            // Skip identifiers glued to a preceding dot handled below, and
            // ones preceded by an identifier char (cannot happen here).
            std::size_t start = i;
            bool after_dot = start > 0 && line[start - 1] == '.';
            NameChain chain;
            chain.line = first_line + static_cast<int>(li);
            chain.col = static_cast<int>(start) + (li == 0 ? base_col : 0);
            while (i < n && is_ident_start(line[i])) {
                std::size_t b = i;
                while (i < n && is_ident_char(line[i])) ++i;
                chain.parts.push_back(line.substr(b, i - b));
                // Allow whitespace around the dot? Python allows `a . b`;
                // keep it simple and require the dot adjacent.
                if (i < n && line[i] == '.') {
                    ++i;
                    if (i < n && is_ident_start(line[i])) continue;
                    break;
                }
                break;
            }
            if (after_dot) {
                // Part of a chain that started with a non-name (e.g. a call
                // result: `f().x`); record the tail as its own chain so the
                // attribute read is still visible, but such dangling tails
                // start mid-expression and are dropped for simplicity.
                chain.parts.clear();
            }
            if (chain.parts.empty()) continue;
            if (chain.parts.size() == 1 && is_keyword(chain.parts[0])) continue;
            if (is_keyword(chain.parts[0])) continue;
            // Look ahead past whitespace for `(` or `=`.
            std::size_t k = i;
            while (k < n && (line[k] == ' ' || line[k] == '\t')) ++k;
            if (k < n && line[k] == '(') {
                chain.is_call = true;
            } else if (k < n && line[k] == '=' && (k + 1 >= n || line[k + 1] != '=')) {
                chain.assigned = true;
            }
            chains.push_back(std::move(chain));
        }
    }
    return chains;
}

DefHeader parse_def_header(const std::string& logical_text) {
    DefHeader h;
    std::string t = logical_text;
    std::size_t p = 0;
    // Skip decorator lines inside a multi-line logical text? Decorators are
    // separate logical lines, so `t` starts at `def` or `async def`.
    auto skip_ws = [&]() {
        while (p < t.size() && (t[p] == ' ' || t[p] == '\t' || t[p] == '\n')) ++p;
    };
    skip_ws();
    if (t.compare(p, 6, "async ") == 0) {
        p += 6;
        skip_ws();
    }
    if (t.compare(p, 4, "def ") != 0 && t.compare(p, 4, "def\t") != 0) return h;
    p += 4;
    skip_ws();
    std::size_t b = p;
    while (p < t.size() && is_ident_char(t[p])) ++p;
    if (p == b) return h;
    h.name = t.substr(b, p - b);
    skip_ws();
    if (p >= t.size() || t[p] != '(') return h;
    ++p;
    // Walk the parameter list: split on commas at depth 1, take the leading
    // identifier of each piece, drop annotations/defaults/star markers.
    int depth = 1;
    std::string piece;
    auto flush = [&]() {
        std::size_t q = 0;
        while (q < piece.size() &&
               (piece[q] == ' ' || piece[q] == '\t' || piece[q] == '\n' || piece[q] == '*')) {
            ++q;
        }
        std::size_t e = q;
        while (e < piece.size() && is_ident_char(piece[e])) ++e;
        if (e > q) h.params.push_back(piece.substr(q, e - q));
        piece.clear();
    };
    while (p < t.size() && depth > 0) {
        char c = t[p];
        if (c == '(' || c == '[' || c == '{') {
            ++depth;
            piece.push_back(c);
        } else if (c == ')' || c == ']' || c == '}') {
            --depth;
            if (depth == 0) break;
            piece.push_back(c);
        } else if (c == ',' && depth == 1) {
            flush();
        } else if (c == '\'' || c == '"') {
            // Default values can be strings; skip to the matching quote.
            char q = c;
            piece.push_back(c);
            ++p;
            while (p < t.size() && t[p] != q) {
                if (t[p] == '\\') ++p;
                if (p < t.size()) piece.push_back(t[p]);
                ++p;
            }
            if (p < t.size()) piece.push_back(t[p]);
        } else {
            piece.push_back(c);
        }
        ++p;
    }
    flush();
    h.valid = true;
    return h;
}

ClassHeader parse_class_header(const std::string& logical_text) {
    ClassHeader h;
    std::string t = logical_text;
    std::size_t p = 0;
    auto skip_ws = [&]() {
        while (p < t.size() && (t[p] == ' ' || t[p] == '\t' || t[p] == '\n')) ++p;
    };
    skip_ws();
    if (t.compare(p, 6, "class ") != 0 && t.compare(p, 6, "class\t") != 0) return h;
    p += 6;
    skip_ws();
    std::size_t b = p;
    while (p < t.size() && is_ident_char(t[p])) ++p;
    if (p == b) return h;
    h.name = t.substr(b, p - b);
    skip_ws();
    if (p < t.size() && t[p] == '(') {
        ++p;
        int depth = 1;
        std::string piece;
        auto flush = [&]() {
            std::size_t q = 0;
            while (q < piece.size() && (piece[q] == ' ' || piece[q] == '\t' || piece[q] == '\n')) ++q;
            std::size_t e = piece.size();
            while (e > q && (piece[e - 1] == ' ' || piece[e - 1] == '\t' || piece[e - 1] == '\n')) --e;
            if (e > q) h.bases.push_back(piece.substr(q, e - q));
            piece.clear();
        };
        while (p < t.size() && depth > 0) {
            char c = t[p];
            if (c == '(' || c == '[' || c == '{') {
                ++depth;
                piece.push_back(c);
            } else if (c == ')' || c == ']' || c == '}') {
                --depth;
                if (depth == 0) break;
                piece.push_back(c);
            } else if (c == ',' && depth == 1) {
                flush();
            } else {
                piece.push_back(c);
            }
            ++p;
        }
        flush();
    }
    h.valid = true;
    return h;
}

bool starts_with_string_literal(const std::string& logical_text) {
    std::size_t p = 0;
    while (p < logical_text.size() && (logical_text[p] == ' ' || logical_text[p] == '\t')) ++p;
    std::size_t q = p;
    std::size_t prefix = 0;
    while (q < logical_text.size() && prefix < 2) {
        char c = static_cast<char>(std::tolower(static_cast<unsigned char>(logical_text[q])));
        if (c == 'r' || c == 'b' || c == 'u' || c == 'f') {
            ++q;
            ++prefix;
        } else {
            break;
        }
    }
    return q < logical_text.size() && (logical_text[q] == '"' || logical_text[q] == '\'');
}

std::vector<std::string> callee_names(const std::string& entity_source) {
    std::vector<std::string> names;
    auto seen = [&](const std::string& n) {
        for (const auto& s : names) {
            if (s == n) return true;
        }
        return false;
    };
    for (const LogicalLine& ll : logical_lines(entity_source)) {
        if (ll.blank) continue;
        const std::string& t = ll.text;
        if (t.rfind("def ", 0) == 0 || t.rfind("async def ", 0) == 0 ||
            t.rfind("class ", 0) == 0 || t.rfind("@", 0) == 0 ||
            t.rfind("import ", 0) == 0 || t.rfind("from ", 0) == 0) {
            continue;
        }
        for (const NameChain& c : scan_name_chains(t, ll.start_line, 0)) {
            if (!c.is_call || c.parts.empty()) continue;
            const std::string& callee = c.parts.back();
            if (!seen(callee)) names.push_back(callee);
        }
    }
    return names;
}

bool docstring_literal(const std::string& logical_text, std::string& out) {
    std::string t = logical_text;
    // Trim surrounding whitespace.
    std::size_t b = 0;
    while (b < t.size() && (t[b] == ' ' || t[b] == '\t')) ++b;
    std::size_t e = t.size();
    while (e > b && (t[e - 1] == ' ' || t[e - 1] == '\t' || t[e - 1] == '\n' || t[e - 1] == '\r')) --e;
    t = t.substr(b, e - b);
    std::size_t p = 0;
    std::size_t prefix = 0;
    while (p < t.size() && prefix < 2) {
        char c = static_cast<char>(std::tolower(static_cast<unsigned char>(t[p])));
        if (c == 'r' || c == 'b' || c == 'u' || c == 'f') {
            ++p;
            ++prefix;
        } else {
            break;
        }
    }
    if (p >= t.size() || (t[p] != '"' && t[p] != '\'')) return false;
    char q = t[p];
    bool triple = t.size() >= p + 6 && t[p + 1] == q && t[p + 2] == q;
    std::size_t open = triple ? 3 : 1;
    std::string closer(open, q);
    if (t.size() < p + 2 * open) return false;
    // Walk to where the literal actually closes; anything after it means the
    // statement is an expression (`'a' + 'b'`), not a lone docstring.
    const std::size_t body_begin = p + open;
    std::size_t i = body_begin;
    std::size_t close_at = std::string::npos;
    while (i + open <= t.size()) {
        if (t[i] == '\\') {
            i += 2;
            continue;
        }
        if (t.compare(i, open, closer) == 0) {
            close_at = i;
            break;
        }
        ++i;
    }
    if (close_at != t.size() - open) return false;
    out = t.substr(body_begin, close_at - body_begin);
    return true;
}

std::string entity_header_line(const std::string& entity_source) {
    for (const LogicalLine& ll : logical_lines(entity_source)) {
        if (ll.blank) continue;
        if (!ll.text.empty() && ll.text[0] == '@') continue;
        return ll.text;
    }
    return "";
}

std::string entity_docstring(const std::string& entity_source) {
    bool past_header = false;
    for (const LogicalLine& ll : logical_lines(entity_source)) {
        if (ll.blank) continue;
        if (!past_header) {
            if (!ll.text.empty() && ll.text[0] == '@') continue;
            past_header = true;
            continue;
        }
        std::string doc;
        if (docstring_literal(ll.text, doc)) return doc;
        return "";
    }
    return "";
}

std::string module_docstring(const std::string& source) {
    for (const LogicalLine& ll : logical_lines(source)) {
        if (ll.blank) continue;
        std::string doc;
        if (docstring_literal(ll.text, doc)) return doc;
        return "";
    }
    return "";
}

std::string blank_strings_and_comments(const std::string& source) {
    std::vector<std::string> phys = split_physical(source);
    int depth = 0;
    StringState str;
    std::string out;
    for (std::size_t li = 0; li < phys.size(); ++li) {
        bool bs = false, cm = false;
        std::string clean = phys[li];
        scan_physical_line(phys[li], depth, str, bs, cm, &clean);
        if (li) out += '\n';
        out += clean;
    }
    return out;
}

} // namespace codegraph
