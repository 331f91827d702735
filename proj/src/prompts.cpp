// SPDX-License-Identifier: Apache-2.0
#include "codegraph/prompts.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "codegraph/errors.hpp"

namespace codegraph {

namespace {

const char* kTemplateNames[] = {"describe", "generate_system", "generate_user", "extract_entities"};

} // namespace

PromptCatalog PromptCatalog::load(const std::string& dir) {
    PromptCatalog catalog;
    for (const char* name : kTemplateNames) {
        std::filesystem::path p = std::filesystem::path(dir) / (std::string(name) + ".txt");
        std::ifstream in(p, std::ios::binary);
        if (!in) {
            throw ConfigError("missing prompt template: " + p.generic_string());
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        catalog.templates_[name] = buf.str();
    }
    return catalog;
}

std::string PromptCatalog::render(const std::string& name,
                                  const std::map<std::string, std::string>& values) const {
    auto it = templates_.find(name);
    if (it == templates_.end()) throw ConfigError("unknown prompt template: " + name);
    std::string out = it->second;
    for (const auto& [key, value] : values) {
        const std::string needle = "{" + key + "}";
        std::size_t pos = 0;
        while ((pos = out.find(needle, pos)) != std::string::npos) {
            out.replace(pos, needle.size(), value);
            pos += value.size();
        }
    }
    return out;
}

} // namespace codegraph
