// SPDX-License-Identifier: Apache-2.0
#include "codegraph/repo_parser.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "codegraph/errors.hpp"
#include "codegraph/pysource.hpp"
#include "codegraph/glob.hpp"

namespace fs = std::filesystem;

namespace codegraph {

namespace {

std::string join_qn(const std::string& parent, const std::string& name) {
    if (parent.empty()) return name;
    return parent + "." + name;
}

std::string basename_of(const std::string& rel_path) {
    std::size_t slash = rel_path.find_last_of('/');
    return slash == std::string::npos ? rel_path : rel_path.substr(slash + 1);
}

/// Splits a dotted module path into parts.
std::vector<std::string> split_dotted(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == '.') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

std::string strip_ws(const std::string& s) {
    std::size_t b = 0;
    while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    std::size_t e = s.size();
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool is_ident(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    }
    return true;
}

/// Parses `import a.b as c, d` and `from .mod import x as y, z` lines into
/// alias bindings. `module` is the importing module, `is_pkg_init` true for
/// package __init__ files (relative imports resolve against the package
/// itself rather than its parent).
void parse_import(const std::string& logical_text, const std::string& module, bool is_pkg_init,
                  std::vector<ImportBinding>& out) {
    std::string t;
    t.reserve(logical_text.size());
    for (char c : logical_text) t.push_back(c == '\n' ? ' ' : c);
    // Strip wrapping parens from `from m import (a, b)`.
    std::string cleaned;
    for (char c : t) {
        if (c == '(' || c == ')') continue;
        cleaned.push_back(c);
    }
    t = cleaned;

    auto split_csv = [](const std::string& s) {
        std::vector<std::string> items;
        std::string cur;
        for (char c : s) {
            if (c == ',') {
                items.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        items.push_back(cur);
        return items;
    };
    auto parse_as = [](const std::string& item, std::string& name, std::string& alias) {
        std::istringstream is(item);
        std::string a, kw, b;
        is >> a >> kw >> b;
        name = a;
        alias = (kw == "as" && !b.empty()) ? b : a;
    };

    if (t.rfind("import ", 0) == 0) {
        for (const std::string& item : split_csv(t.substr(7))) {
            std::string trimmed = strip_ws(item);
            if (trimmed.empty()) continue;
            std::string name, alias;
            parse_as(trimmed, name, alias);
            if (alias == name) {
                // `import a.b.c` binds the top-level package name.
                std::size_t dot = name.find('.');
                std::string top = dot == std::string::npos ? name : name.substr(0, dot);
                out.push_back({top, top});
            } else {
                out.push_back({alias, name});
            }
        }
        return;
    }
    if (t.rfind("from ", 0) != 0) return;
    std::size_t imp = t.find(" import ");
    if (imp == std::string::npos) return;
    std::string source = strip_ws(t.substr(5, imp - 5));
    std::string names = t.substr(imp + 8);

    // Resolve leading dots against the current package.
    std::size_t dots = 0;
    while (dots < source.size() && source[dots] == '.') ++dots;
    std::string base;
    if (dots > 0) {
        std::vector<std::string> parts = split_dotted(module);
        std::size_t keep = parts.size();
        if (!is_pkg_init && keep > 0) --keep;           // current package
        for (std::size_t i = 1; i < dots && keep > 0; ++i) --keep;
        std::string pkg;
        for (std::size_t i = 0; i < keep; ++i) {
            if (!pkg.empty()) pkg += ".";
            pkg += parts[i];
        }
        std::string rest = source.substr(dots);
        base = pkg;
        if (!rest.empty()) base = base.empty() ? rest : base + "." + rest;
    } else {
        base = source;
    }

    for (const std::string& item : split_csv(names)) {
        std::string trimmed = strip_ws(item);
        if (trimmed.empty() || trimmed == "*") continue;
        std::string name, alias;
        parse_as(trimmed, name, alias);
        out.push_back({alias, base.empty() ? name : base + "." + name});
    }
}

/// Finds the header-terminating colon of a def logical line and reports
/// whether statements follow it on the same logical line.
bool def_has_inline_body(const std::string& logical_text) {
    int depth = 0;
    char quote = '\0';
    std::size_t colon = std::string::npos;
    for (std::size_t i = 0; i < logical_text.size(); ++i) {
        char c = logical_text[i];
        if (quote) {
            if (c == '\\') {
                ++i;
            } else if (c == quote) {
                quote = '\0';
            }
            continue;
        }
        if (c == '\'' || c == '"') {
            quote = c;
            continue;
        }
        if (c == '(' || c == '[' || c == '{') ++depth;
        if (c == ')' || c == ']' || c == '}') --depth;
        if (c == ':' && depth == 0) colon = i;
    }
    if (colon == std::string::npos) return false;
    for (std::size_t i = colon + 1; i < logical_text.size(); ++i) {
        char c = logical_text[i];
        if (c != ' ' && c != '\t' && c != '#') return c != '#';
        if (c == '#') return false;
    }
    return false;
}

/// Class-level `name = value` / `name: type [= value]` attribute statement.
bool class_attribute_name(const std::string& logical_text, std::string& name) {
    std::size_t i = 0;
    const std::size_t n = logical_text.size();
    std::size_t b = i;
    while (i < n && (std::isalnum(static_cast<unsigned char>(logical_text[i])) || logical_text[i] == '_')) ++i;
    if (i == b) return false;
    std::string candidate = logical_text.substr(b, i - b);
    if (!is_ident(candidate)) return false;
    while (i < n && (logical_text[i] == ' ' || logical_text[i] == '\t')) ++i;
    if (i < n && logical_text[i] == ':') {
        // Bare or assigning annotation: `x: int` / `x: int = 0`.
        name = candidate;
        return true;
    }
    if (i < n && logical_text[i] == '=' && (i + 1 >= n || logical_text[i + 1] != '=')) {
        name = candidate;
        return true;
    }
    return false;
}

/// `self.name = value` / `self.name: type = value` inside a method body.
bool self_attribute_name(const std::string& logical_text, std::string& name) {
    if (logical_text.rfind("self.", 0) != 0) return false;
    std::size_t i = 5;
    const std::size_t n = logical_text.size();
    std::size_t b = i;
    while (i < n && (std::isalnum(static_cast<unsigned char>(logical_text[i])) || logical_text[i] == '_')) ++i;
    if (i == b) return false;
    std::string candidate = logical_text.substr(b, i - b);
    while (i < n && (logical_text[i] == ' ' || logical_text[i] == '\t')) ++i;
    if (i < n && logical_text[i] == ':') {
        std::size_t eq = logical_text.find('=', i);
        if (eq == std::string::npos) return false;
        name = candidate;
        return true;
    }
    if (i < n && logical_text[i] == '=' && (i + 1 >= n || logical_text[i + 1] != '=')) {
        name = candidate;
        return true;
    }
    return false;
}

} // namespace

std::string module_name(const std::string& rel_path) {
    std::string p = rel_path;
    if (p.size() > 3 && p.compare(p.size() - 3, 3, ".py") == 0) p = p.substr(0, p.size() - 3);
    for (char& c : p) {
        if (c == '/') c = '.';
    }
    const std::string init = "__init__";
    if (p == init) return "";
    if (p.size() > init.size() + 1 && p.compare(p.size() - init.size() - 1, init.size() + 1, "." + init) == 0) {
        p = p.substr(0, p.size() - init.size() - 1);
    }
    return p;
}

namespace {

bool utf8_valid(const std::string& s) {
    std::size_t i = 0;
    const std::size_t n = s.size();
    while (i < n) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        std::size_t len;
        if (c < 0x80) {
            len = 1;
        } else if ((c & 0xE0) == 0xC0) {
            len = 2;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
        } else {
            return false;
        }
        if (i + len > n) return false;
        for (std::size_t k = 1; k < len; ++k) {
            if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return false;
        }
        i += len;
    }
    return true;
}

} // namespace

ScanResult scan_repository(const std::string& root, const ParserOptions& opts) {
    fs::path rootp(root);
    std::error_code ec;
    if (!fs::is_directory(rootp, ec)) {
        throw InputError("repository root is not a directory: " + root);
    }
    std::vector<std::string> paths;
    for (fs::recursive_directory_iterator it(rootp, fs::directory_options::skip_permission_denied), end;
         it != end; ++it) {
        if (!it->is_regular_file(ec)) continue;
        std::string rel = it->path().lexically_relative(rootp).generic_string();
        if (!glob_match_any(opts.include, rel)) continue;
        if (!opts.exclude.empty() && glob_match_any(opts.exclude, rel)) continue;
        paths.push_back(rel);
    }
    std::sort(paths.begin(), paths.end());

    ScanResult out;
    for (const std::string& rel : paths) {
        std::ifstream in(rootp / rel, std::ios::binary);
        if (!in) {
            out.diagnostics.push_back(rel + ": unreadable, skipped");
            continue;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        std::string source = buf.str();
        if (!utf8_valid(source)) {
            out.diagnostics.push_back(rel + ": not valid UTF-8, skipped");
            continue;
        }
        out.files.push_back({rel, std::move(source)});
    }
    return out;
}

FileParse parse_file(const std::string& rel_path, const std::string& source) {
    FileParse fp;
    bool unterminated = false;
    std::vector<LogicalLine> lls = logical_lines(source, &unterminated);
    if (unterminated) {
        fp.diagnostics.push_back(rel_path + ": file ends inside an open bracket or string");
    }
    std::vector<std::size_t> starts = line_starts(source);
    const int total_lines = static_cast<int>(starts.size());

    auto phys_len = [&](int line) -> int {
        if (line < 1 || line > total_lines) return 0;
        std::size_t b = starts[static_cast<std::size_t>(line - 1)];
        std::size_t e = static_cast<std::size_t>(line) < starts.size()
                            ? starts[static_cast<std::size_t>(line)] - 1
                            : source.size();
        return static_cast<int>(e - b);
    };

    const std::string mod = module_name(rel_path);
    const bool is_pkg_init = basename_of(rel_path) == "__init__.py";
    std::vector<std::string> mod_parts = split_dotted(mod);
    fp.file.kind = EntityKind::File;
    fp.file.name = mod_parts.back();
    fp.file.qualified_name = mod;
    fp.file.span = {rel_path, 1, 0, total_lines, phys_len(total_lines)};
    fp.file.source_text = source;

    struct Scope {
        EntityKind kind;
        std::string qn;
        std::size_t entity_index; // SIZE_MAX for the file scope
        int header_indent;
        int last_content;
        bool awaiting_docstring;
        bool need_body_start;
        std::size_t layout_index; // SIZE_MAX when not a def
    };
    std::vector<Scope> stack;
    stack.push_back({EntityKind::File, mod, SIZE_MAX, -1, 0, true, false, SIZE_MAX});

    std::vector<std::pair<int, int>> skip_ranges; // headers, decorators, imports
    std::map<std::string, std::size_t> attr_index; // attribute qn -> entity index
    int pending_decorator_start = 0;

    auto finalize = [&](const Scope& sc) {
        if (sc.entity_index == SIZE_MAX) return;
        CodeEntity& e = fp.entities[sc.entity_index];
        e.span.end_line = sc.last_content;
        e.span.end_col = phys_len(sc.last_content);
        e.source_text = slice(source, e.span);
        if (sc.layout_index != SIZE_MAX) {
            DefBodyLayout& lay = fp.body_layouts[sc.layout_index];
            lay.body_end_line = sc.last_content;
            if (lay.body_start_line == 0) lay.body_end_line = 0;
        }
    };

    for (const LogicalLine& ll : lls) {
        if (ll.blank) {
            if (!ll.text.empty() && ll.text[0] == '#') {
                SourceSpan sp{rel_path, ll.start_line, static_cast<int>(ll.indent.size()),
                              ll.end_line, phys_len(ll.end_line)};
                fp.comments.push_back({sp, ll.text});
            }
            continue;
        }
        const int ind = static_cast<int>(ll.indent.size());
        while (stack.size() > 1 && ind <= stack.back().header_indent) {
            Scope done = stack.back();
            stack.pop_back();
            finalize(done);
            stack.back().last_content = std::max(stack.back().last_content, done.last_content);
        }
        Scope& top = stack.back();

        // First statement of a block: docstring or start of the real body.
        if (top.awaiting_docstring) {
            top.awaiting_docstring = false;
            std::string doc;
            if (docstring_literal(ll.text, doc)) {
                if (top.entity_index == SIZE_MAX) {
                    fp.file.docstring = doc;
                } else {
                    fp.entities[top.entity_index].docstring = doc;
                }
                if (top.layout_index != SIZE_MAX) {
                    DefBodyLayout& lay = fp.body_layouts[top.layout_index];
                    lay.docstring_start_line = ll.start_line;
                    lay.docstring_end_line = ll.end_line;
                }
                top.need_body_start = true;
                top.last_content = std::max(top.last_content, ll.end_line);
                continue;
            }
            top.need_body_start = true;
        }
        if (top.need_body_start) {
            top.need_body_start = false;
            if (top.layout_index != SIZE_MAX) {
                DefBodyLayout& lay = fp.body_layouts[top.layout_index];
                lay.body_start_line = ll.start_line;
                lay.body_indent = ll.indent;
            }
        }
        top.last_content = std::max(top.last_content, ll.end_line);

        if (ll.text[0] == '@') {
            if (pending_decorator_start == 0) pending_decorator_start = ll.start_line;
            skip_ranges.emplace_back(ll.start_line, ll.end_line);
            continue;
        }

        if (ll.text.rfind("import ", 0) == 0 || ll.text.rfind("from ", 0) == 0) {
            parse_import(ll.text, mod, is_pkg_init, fp.imports);
            skip_ranges.emplace_back(ll.start_line, ll.end_line);
            pending_decorator_start = 0;
            continue;
        }

        ClassHeader ch = parse_class_header(ll.text);
        if (ch.valid) {
            CodeEntity e;
            e.kind = EntityKind::Class;
            e.name = ch.name;
            e.qualified_name = join_qn(top.qn, ch.name);
            e.parent_qualified_name = top.qn;
            int start = pending_decorator_start ? pending_decorator_start : ll.start_line;
            e.span = {rel_path, start, ind, ll.end_line, phys_len(ll.end_line)};
            e.signature = ll.text;
            fp.entities.push_back(std::move(e));
            skip_ranges.emplace_back(ll.start_line, ll.end_line);
            pending_decorator_start = 0;
            stack.push_back({EntityKind::Class, fp.entities.back().qualified_name,
                             fp.entities.size() - 1, ind, ll.end_line, true, false, SIZE_MAX});
            continue;
        }

        DefHeader dh = parse_def_header(ll.text);
        if (dh.valid) {
            CodeEntity e;
            e.kind = top.kind == EntityKind::Class ? EntityKind::Method : EntityKind::Function;
            e.name = dh.name;
            e.qualified_name = join_qn(top.qn, dh.name);
            e.parent_qualified_name = top.qn;
            int start = pending_decorator_start ? pending_decorator_start : ll.start_line;
            e.span = {rel_path, start, ind, ll.end_line, phys_len(ll.end_line)};
            e.signature = ll.text;
            fp.entities.push_back(std::move(e));
            skip_ranges.emplace_back(ll.start_line, ll.end_line);
            pending_decorator_start = 0;

            DefBodyLayout lay;
            lay.qualified_name = fp.entities.back().qualified_name;
            lay.header_end_line = ll.end_line;
            if (def_has_inline_body(ll.text)) {
                lay.inline_body = true;
                fp.body_layouts.push_back(std::move(lay));
                // One-liner: no block to push; the entity is complete.
                fp.entities.back().source_text = slice(source, fp.entities.back().span);
                continue;
            }
            fp.body_layouts.push_back(std::move(lay));
            stack.push_back({e.kind, fp.entities.back().qualified_name, fp.entities.size() - 1,
                             ind, ll.end_line, true, false, fp.body_layouts.size() - 1});
            continue;
        }
        pending_decorator_start = 0;

        if (top.kind == EntityKind::Class) {
            std::string attr;
            if (class_attribute_name(ll.text, attr)) {
                std::string qn = join_qn(top.qn, attr);
                if (attr_index.find(qn) == attr_index.end()) {
                    CodeEntity e;
                    e.kind = EntityKind::Attribute;
                    e.name = attr;
                    e.qualified_name = qn;
                    e.parent_qualified_name = top.qn;
                    e.span = {rel_path, ll.start_line, ind, ll.end_line, phys_len(ll.end_line)};
                    e.source_text = slice(source, e.span);
                    attr_index[qn] = fp.entities.size();
                    fp.entities.push_back(std::move(e));
                }
                continue;
            }
        }
        if (top.kind == EntityKind::Method && top.entity_index != SIZE_MAX &&
            fp.entities[top.entity_index].name == "__init__") {
            std::string attr;
            if (self_attribute_name(ll.text, attr)) {
                // Find the class the method belongs to.
                std::string class_qn;
                for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
                    if (it->kind == EntityKind::Class) {
                        class_qn = it->qn;
                        break;
                    }
                }
                if (!class_qn.empty()) {
                    std::string qn = join_qn(class_qn, attr);
                    if (attr_index.find(qn) == attr_index.end()) {
                        CodeEntity e;
                        e.kind = EntityKind::Attribute;
                        e.name = attr;
                        e.qualified_name = qn;
                        e.parent_qualified_name = class_qn;
                        e.span = {rel_path, ll.start_line, ind, ll.end_line, phys_len(ll.end_line)};
                        e.source_text = slice(source, e.span);
                        attr_index[qn] = fp.entities.size();
                        fp.entities.push_back(std::move(e));
                    }
                }
                // No continue: the right-hand side may reference entities.
            }
        }
    }
    while (stack.size() > 1) {
        Scope done = stack.back();
        stack.pop_back();
        finalize(done);
        stack.back().last_content = std::max(stack.back().last_content, done.last_content);
    }

    // Name references: scan the whole file once with strings and comments
    // blanked, then drop chains on header/decorator/import lines and
    // assignment targets, and attach the rest to their innermost scope.
    std::vector<NameChain> chains = scan_name_chains(source, 1, 0);
    auto in_skip = [&](int line) {
        for (const auto& r : skip_ranges) {
            if (line >= r.first && line <= r.second) return true;
        }
        return false;
    };
    for (const NameChain& c : chains) {
        if (c.parts.empty() || c.assigned || in_skip(c.line)) continue;
        if (!c.is_call && c.parts.size() < 2) continue;
        // Innermost containing class/function scope; file otherwise.
        std::string user = mod;
        int best_start = 0;
        for (const CodeEntity& e : fp.entities) {
            if (e.kind == EntityKind::Attribute) continue;
            if (e.span.start_line <= c.line && c.line <= e.span.end_line &&
                e.span.start_line >= best_start) {
                best_start = e.span.start_line;
                user = e.qualified_name;
            }
        }
        NameRef ref;
        ref.parts = c.parts;
        ref.is_call = c.is_call;
        ref.line = c.line;
        ref.col = c.col;
        ref.user_qualified_name = user;
        fp.refs.push_back(std::move(ref));
    }
    return fp;
}

void resolve_usages(RepoParse& parse) {
    // Entity and module lookup tables across all files.
    std::set<std::string> entity_qns;
    std::map<std::string, const CodeEntity*> entity_by_qn;
    for (const FileParse& fp : parse.files) {
        for (const CodeEntity& e : fp.entities) {
            entity_qns.insert(e.qualified_name);
            entity_by_qn[e.qualified_name] = &e;
        }
    }

    auto enclosing_class = [&](const std::string& user_qn) -> std::string {
        const CodeEntity* cur = nullptr;
        auto it = entity_by_qn.find(user_qn);
        if (it != entity_by_qn.end()) cur = it->second;
        while (cur) {
            if (cur->kind == EntityKind::Class) return cur->qualified_name;
            auto pit = entity_by_qn.find(cur->parent_qualified_name);
            cur = pit == entity_by_qn.end() ? nullptr : pit->second;
        }
        return "";
    };

    for (const FileParse& fp : parse.files) {
        const std::string mod = fp.file.qualified_name;
        std::map<std::string, std::string> aliases;
        for (const ImportBinding& b : fp.imports) aliases[b.local_alias] = b.imported_qualified_name;

        for (const NameRef& ref : fp.refs) {
            std::string dotted;
            for (const std::string& p : ref.parts) {
                if (!dotted.empty()) dotted += ".";
                dotted += p;
            }
            std::string resolved;
            bool skip = false;

            if (ref.parts[0] == "self") {
                if (ref.parts.size() < 2) {
                    skip = true;
                } else {
                    std::string cls = enclosing_class(ref.user_qualified_name);
                    if (!cls.empty()) {
                        std::string qn = cls;
                        for (std::size_t i = 1; i < ref.parts.size(); ++i) qn += "." + ref.parts[i];
                        if (entity_qns.count(qn)) resolved = qn;
                    }
                }
            } else {
                auto ait = aliases.find(ref.parts[0]);
                if (ait != aliases.end()) {
                    std::string qn = ait->second;
                    for (std::size_t i = 1; i < ref.parts.size(); ++i) qn += "." + ref.parts[i];
                    if (entity_qns.count(qn)) resolved = qn;
                } else {
                    std::string qn = mod.empty() ? dotted : mod + "." + dotted;
                    if (entity_qns.count(qn)) resolved = qn;
                }
            }
            if (skip) continue;
            if (resolved.empty()) {
                std::ostringstream os;
                os << fp.file.span.file_path << ":" << ref.line << ": unresolved reference '"
                   << dotted << "' in " << (ref.user_qualified_name.empty() ? "<module>" : ref.user_qualified_name);
                parse.diagnostics.push_back(os.str());
                continue;
            }
            if (resolved == ref.user_qualified_name) continue;
            int len = static_cast<int>(dotted.size());
            UsageRef u;
            u.used_qualified_name = resolved;
            u.user_qualified_name = ref.user_qualified_name;
            u.span = {fp.file.span.file_path, ref.line, ref.col, ref.line, ref.col + len};
            parse.usages.push_back(std::move(u));
        }
    }
    std::sort(parse.usages.begin(), parse.usages.end());
}

RepoParse parse_repository(const std::string& root, const ParserOptions& opts) {
    ScanResult scan = scan_repository(root, opts);
    RepoParse out;
    out.diagnostics = scan.diagnostics;
    out.files.resize(scan.files.size());

    unsigned jobs = opts.jobs ? opts.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, scan.files.empty() ? 1u : static_cast<unsigned>(scan.files.size()));

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= scan.files.size()) break;
            out.files[i] = parse_file(scan.files[i].path, scan.files[i].source);
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(jobs);
        for (unsigned t = 0; t < jobs; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }

    for (const FileParse& fp : out.files) {
        for (const std::string& d : fp.diagnostics) out.diagnostics.push_back(d);
    }
    resolve_usages(out);
    return out;
}

} // namespace codegraph
