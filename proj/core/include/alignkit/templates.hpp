#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "alignkit/dataset.hpp"

namespace alignkit {

// Prompt/target template pair for one scenario. Placeholders are written
// {question}, {options}, {response}, {source_language}, {target_language}
// and must all be bound at render time; rendering never leaves a residual
// marker behind.
struct Template {
    std::string prompt;
    std::string target;
};

using Bindings = std::map<std::string, std::string>;

// Versioned template collection, one entry per scenario. The wording is
// data, not code: the default set is pinned at version "1" and also shipped
// as data/templates.json so downstream trainers and the eval harness render
// the exact same strings.
class TemplateSet {
  public:
    static TemplateSet builtin();
    static TemplateSet load(const std::filesystem::path& path);

    const std::string& version() const { return version_; }
    const Template& for_scenario(Scenario s) const;

    std::string render_prompt(Scenario s, const Bindings& bindings) const;
    std::string render_target(Scenario s, const Bindings& bindings) const;

    // Recovers the {question} binding from a rendered prompt given the other
    // bindings. Inverse of render_prompt on its image; throws Error when the
    // rendered string cannot have come from this template.
    std::string invert_question(Scenario s, const std::string& rendered,
                                const Bindings& other) const;

  private:
    std::string version_;
    std::map<Scenario, Template> templates_;
};

// Renders a single template string; throws Error on unbound placeholders.
std::string render_template(const std::string& tmpl, const Bindings& bindings);

}  // namespace alignkit
