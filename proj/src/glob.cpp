// SPDX-License-Identifier: Apache-2.0
#include "codegraph/glob.hpp"

#include <regex>

namespace codegraph {

namespace {

std::string to_regex(const std::string& pattern) {
    std::string re;
    std::size_t i = 0;
    const std::size_t n = pattern.size();
    while (i < n) {
        char c = pattern[i];
        if (c == '*') {
            if (i + 1 < n && pattern[i + 1] == '*') {
                // `**/` at a segment boundary may match zero segments.
                if (i + 2 < n && pattern[i + 2] == '/') {
                    re += "(?:[^/]+/)*";
                    i += 3;
                } else {
                    re += ".*";
                    i += 2;
                }
                continue;
            }
            re += "[^/]*";
            ++i;
            continue;
        }
        if (c == '?') {
            re += "[^/]";
            ++i;
            continue;
        }
        static const std::string special = "\\^$.|+()[]{}";
        if (special.find(c) != std::string::npos) re += '\\';
        re += c;
        ++i;
    }
    return re;
}

} // namespace

bool glob_match(const std::string& pattern, const std::string& path) {
    std::regex re(to_regex(pattern));
    return std::regex_match(path, re);
}

bool glob_match_any(const std::vector<std::string>& patterns, const std::string& path) {
    for (const auto& p : patterns) {
        if (glob_match(p, path)) return true;
    }
    return false;
}

} // namespace codegraph
