// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>

namespace codegraph {

/// Plain-text prompt templates loaded from a directory, one file per
/// template, with `{placeholder}` substitution.
class PromptCatalog {
  public:
    /// Reads every required template. Missing files raise ConfigError.
    static PromptCatalog load(const std::string& dir);

    /// Renders `name` (e.g. "describe") substituting each `{key}` from
    /// `values`. Unknown placeholders stay untouched so literal braces in
    /// templates survive. Unknown template name raises ConfigError.
    std::string render(const std::string& name,
                       const std::map<std::string, std::string>& values) const;

    bool has(const std::string& name) const { return templates_.count(name) != 0; }

  private:
    std::map<std::string, std::string> templates_;
};

} // namespace codegraph
