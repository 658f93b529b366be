#include "alignkit/templates.hpp"

#include <fstream>

#include "alignkit/error.hpp"
#include "alignkit/jsonl.hpp"

namespace alignkit {

namespace {

const char* kAlpacaHeader =
    "Below is an instruction that describes a task. "
    "Write a response that appropriately completes the request.";

constexpr const char* kQuestionSentinel = "\x01Q\x01";

}  // namespace

std::string render_template(const std::string& tmpl, const Bindings& bindings) {
    std::string out;
    out.reserve(tmpl.size() + 64);
    size_t pos = 0;
    while (pos < tmpl.size()) {
        size_t open = tmpl.find('{', pos);
        if (open == std::string::npos) {
            out.append(tmpl, pos, std::string::npos);
            break;
        }
        size_t close = tmpl.find('}', open);
        if (close == std::string::npos) {
            throw Error("template has unterminated placeholder near \"" +
                        tmpl.substr(open, 16) + "\"");
        }
        out.append(tmpl, pos, open - pos);
        std::string key = tmpl.substr(open + 1, close - open - 1);
        auto it = bindings.find(key);
        if (it == bindings.end()) {
            throw Error("unbound template placeholder {" + key + "}");
        }
        out += it->second;
        pos = close + 1;
    }
    return out;
}

TemplateSet TemplateSet::builtin() {
    TemplateSet set;
    set.version_ = "1";

    std::string alpaca_prompt = std::string(kAlpacaHeader) +
                                "\n\n### Instruction:\n{question}\n\n### Response:";
    std::string alpaca_prompt_options =
        std::string(kAlpacaHeader) +
        "\n\n### Instruction:\n{question}\n{options}\n\n### Response:";

    set.templates_[Scenario::cot] = {alpaca_prompt, "{response}"};
    set.templates_[Scenario::pot] = {alpaca_prompt, "{response}"};
    set.templates_[Scenario::no_thought] = {alpaca_prompt_options, "{response}"};
    set.templates_[Scenario::translation] = {
        "Translate the following sentences from {source_language} to "
        "{target_language}.\n{question}",
        "{response}"};
    return set;
}

TemplateSet TemplateSet::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open templates file " + path.string());
    }
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw Error("malformed templates file " + path.string());
    }
    TemplateSet set;
    if (!doc.contains("version") || !doc["version"].is_string()) {
        throw Error(path.string() + ": missing \"version\"");
    }
    set.version_ = doc["version"].get<std::string>();
    if (!doc.contains("templates") || !doc["templates"].is_object()) {
        throw Error(path.string() + ": missing \"templates\" object");
    }
    for (const auto& [key, value] : doc["templates"].items()) {
        Scenario s = parse_scenario(key);
        if (!value.contains("prompt") || !value.contains("target")) {
            throw Error(path.string() + ": scenario \"" + key +
                        "\" needs prompt and target strings");
        }
        set.templates_[s] = {value["prompt"].get<std::string>(),
                             value["target"].get<std::string>()};
    }
    for (Scenario s : {Scenario::cot, Scenario::pot, Scenario::no_thought,
                       Scenario::translation}) {
        if (!set.templates_.count(s)) {
            throw Error(path.string() + ": missing scenario \"" +
                        scenario_name(s) + "\"");
        }
    }
    return set;
}

const Template& TemplateSet::for_scenario(Scenario s) const {
    auto it = templates_.find(s);
    if (it == templates_.end()) {
        throw Error(std::string("no template for scenario ") + scenario_name(s));
    }
    return it->second;
}

std::string TemplateSet::render_prompt(Scenario s, const Bindings& bindings) const {
    return render_template(for_scenario(s).prompt, bindings);
}

std::string TemplateSet::render_target(Scenario s, const Bindings& bindings) const {
    return render_template(for_scenario(s).target, bindings);
}

std::string TemplateSet::invert_question(Scenario s, const std::string& rendered,
                                         const Bindings& other) const {
    Bindings sentinel = other;
    sentinel["question"] = kQuestionSentinel;
    std::string pattern = render_template(for_scenario(s).prompt, sentinel);
    size_t at = pattern.find(kQuestionSentinel);
    if (at == std::string::npos) {
        throw Error("prompt template has no {question} placeholder");
    }
    std::string prefix = pattern.substr(0, at);
    std::string suffix = pattern.substr(at + std::string(kQuestionSentinel).size());
    if (rendered.size() < prefix.size() + suffix.size() ||
        rendered.compare(0, prefix.size(), prefix) != 0 ||
        rendered.compare(rendered.size() - suffix.size(), suffix.size(), suffix) != 0) {
        throw Error("rendered prompt does not match the template");
    }
    return rendered.substr(prefix.size(),
                           rendered.size() - prefix.size() - suffix.size());
}

}  // namespace alignkit
