// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <codegraph/errors.hpp>
#include <codegraph/glob.hpp>
#include <codegraph/repo_parser.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

using namespace codegraph;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = std::string(CODEGRAPH_REPO_ROOT) + "/tests/fixtures";

struct TempTree {
    fs::path root;
    TempTree() {
        root = fs::temp_directory_path() / ("cg-parser-" + std::to_string(::getpid()));
        fs::remove_all(root);
        fs::create_directories(root);
    }
    ~TempTree() { fs::remove_all(root); }
    void put(const std::string& rel, const std::string& text) {
        fs::path p = root / rel;
        fs::create_directories(p.parent_path());
        std::ofstream(p, std::ios::binary) << text;
    }
};

const CodeEntity* find_entity(const FileParse& fp, const std::string& qn) {
    for (const CodeEntity& e : fp.entities) {
        if (e.qualified_name == qn) return &e;
    }
    return nullptr;
}

} // namespace

TEST_CASE("module names derive from relative paths") {
    CHECK(module_name("util.py") == "util");
    CHECK(module_name("pkg/mod.py") == "pkg.mod");
    CHECK(module_name("pkg/__init__.py") == "pkg");
    CHECK(module_name("a/b/c.py") == "a.b.c");
}

TEST_CASE("glob patterns cover the usual shapes") {
    CHECK(glob_match("**/*.py", "a/b/c.py"));
    CHECK(glob_match("**/*.py", "top.py"));
    CHECK_FALSE(glob_match("**/*.py", "a/b/c.txt"));
    CHECK(glob_match("tests/*.py", "tests/x.py"));
    CHECK_FALSE(glob_match("tests/*.py", "tests/sub/x.py"));
    CHECK(glob_match("ve?sion.py", "version.py"));
    CHECK(glob_match_any({"*.txt", "**/*.py"}, "pkg/m.py"));
    CHECK_FALSE(glob_match_any({}, "pkg/m.py"));
}

TEST_CASE("scan respects include and exclude patterns") {
    TempTree t;
    t.put("keep.py", "x = 1\n");
    t.put("skip.txt", "nope\n");
    t.put("vendor/dep.py", "y = 2\n");
    ParserOptions opts;
    opts.exclude = {"vendor/**"};
    ScanResult sr = scan_repository(t.root.string(), opts);
    REQUIRE(sr.files.size() == 1);
    CHECK(sr.files[0].path == "keep.py");
}

TEST_CASE("scan skips non-UTF8 files with a diagnostic") {
    TempTree t;
    t.put("ok.py", "x = 1\n");
    t.put("bad.py", std::string("x = '\xff\xfe'\n"));
    ScanResult sr = scan_repository(t.root.string(), {});
    REQUIRE(sr.files.size() == 1);
    CHECK(sr.files[0].path == "ok.py");
    REQUIRE(sr.diagnostics.size() == 1);
    CHECK(sr.diagnostics[0].find("bad.py") != std::string::npos);
}

TEST_CASE("scan of a missing root is an input error") {
    CHECK_THROWS_AS(scan_repository("/nonexistent/cg-missing", {}), InputError);
}

TEST_CASE("parse_file extracts nested entities with parents") {
    const std::string src =
        "\"\"\"Module doc.\"\"\"\n"
        "\n"
        "class Box:\n"
        "    \"\"\"Holds one value.\"\"\"\n"
        "\n"
        "    def __init__(self, value):\n"
        "        self.value = value\n"
        "\n"
        "    def get(self):\n"
        "        return self.value\n"
        "\n"
        "def outer():\n"
        "    def inner():\n"
        "        return 1\n"
        "    return inner()\n";
    FileParse fp = parse_file("pkg/box.py", src);
    CHECK(fp.file.qualified_name == "pkg.box");
    CHECK(fp.file.docstring == "Module doc.");

    const CodeEntity* box = find_entity(fp, "pkg.box.Box");
    REQUIRE(box != nullptr);
    CHECK(box->kind == EntityKind::Class);
    CHECK(box->docstring == "Holds one value.");
    CHECK(box->parent_qualified_name == "pkg.box");

    const CodeEntity* value = find_entity(fp, "pkg.box.Box.value");
    REQUIRE(value != nullptr);
    CHECK(value->kind == EntityKind::Attribute);
    CHECK(value->parent_qualified_name == "pkg.box.Box");

    const CodeEntity* get = find_entity(fp, "pkg.box.Box.get");
    REQUIRE(get != nullptr);
    CHECK(get->kind == EntityKind::Method);

    const CodeEntity* inner = find_entity(fp, "pkg.box.outer.inner");
    REQUIRE(inner != nullptr);
    CHECK(inner->kind == EntityKind::Function);
    CHECK(inner->parent_qualified_name == "pkg.box.outer");
}

TEST_CASE("attribute discovery is limited to __init__ assignments") {
    const std::string src =
        "class C:\n"
        "    def __init__(self):\n"
        "        self.a = 1\n"
        "        self.b, other = 2, 3\n"
        "    def later(self):\n"
        "        self.c = 4\n";
    FileParse fp = parse_file("c.py", src);
    CHECK(find_entity(fp, "c.C.a") != nullptr);
    CHECK(find_entity(fp, "c.C.c") == nullptr);
}

TEST_CASE("decorated defs span from the first decorator") {
    const std::string src =
        "import functools\n"
        "\n"
        "@functools.cache\n"
        "def slow(n):\n"
        "    return n\n";
    FileParse fp = parse_file("m.py", src);
    const CodeEntity* slow = find_entity(fp, "m.slow");
    REQUIRE(slow != nullptr);
    CHECK(slow->span.start_line == 3);
    CHECK(slow->span.end_line == 5);
    CHECK(slow->source_text.rfind("@functools.cache", 0) == 0);
}

TEST_CASE("def body layouts locate the blankable region") {
    const std::string src =
        "def f(a):\n"
        "    \"\"\"doc\n"
        "    more\"\"\"\n"
        "    x = a + 1\n"
        "    return x\n";
    FileParse fp = parse_file("m.py", src);
    REQUIRE(fp.body_layouts.size() == 1);
    const DefBodyLayout& lay = fp.body_layouts[0];
    CHECK(lay.qualified_name == "m.f");
    CHECK(lay.header_end_line == 1);
    CHECK(lay.docstring_start_line == 2);
    CHECK(lay.docstring_end_line == 3);
    CHECK(lay.body_start_line == 4);
    CHECK(lay.body_end_line == 5);
    CHECK(lay.body_indent == "    ");
    CHECK_FALSE(lay.inline_body);
}

TEST_CASE("one-liner defs are marked inline") {
    FileParse fp = parse_file("m.py", "def f(): return 1\n");
    REQUIRE(fp.body_layouts.size() == 1);
    CHECK(fp.body_layouts[0].inline_body);
}

TEST_CASE("usages resolve within and across modules") {
    RepoParse parse = parse_repository(kFixtures + "/mini_repo");
    REQUIRE(parse.files.size() == 3);

    auto has_usage = [&](const std::string& used, const std::string& user) {
        for (const UsageRef& u : parse.usages) {
            if (u.used_qualified_name == used && u.user_qualified_name == user) return true;
        }
        return false;
    };
    CHECK(has_usage("util.add", "app.main"));
    CHECK(has_usage("util.add", "util.sub"));
    CHECK(has_usage("shapes.Circle.radius", "shapes.Circle.area"));
    CHECK(has_usage("shapes.Circle.radius", "shapes.Circle.perimeter"));

    // One call in app.py targets a local variable's method; it stays a
    // diagnostic rather than a guessed edge.
    REQUIRE(parse.diagnostics.size() == 1);
    CHECK(parse.diagnostics[0].find("circle.area") != std::string::npos);
}

TEST_CASE("usage resolution is deterministic across job counts") {
    ParserOptions serial;
    serial.jobs = 1;
    ParserOptions parallel;
    parallel.jobs = 4;
    RepoParse a = parse_repository(kFixtures + "/mini_repo", serial);
    RepoParse b = parse_repository(kFixtures + "/mini_repo", parallel);
    REQUIRE(a.usages.size() == b.usages.size());
    for (std::size_t i = 0; i < a.usages.size(); ++i) {
        CHECK(a.usages[i].used_qualified_name == b.usages[i].used_qualified_name);
        CHECK(a.usages[i].user_qualified_name == b.usages[i].user_qualified_name);
    }
    CHECK(a.diagnostics == b.diagnostics);
}
