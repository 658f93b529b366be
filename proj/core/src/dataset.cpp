#include "alignkit/dataset.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "alignkit/error.hpp"
#include "alignkit/jsonl.hpp"
#include "alignkit/rng.hpp"

namespace alignkit {

namespace {

std::string trimmed(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

const char* role_name(DatasetRole role) {
    switch (role) {
        case DatasetRole::question_translation: return "question_translation";
        case DatasetRole::general_translation: return "general_translation";
        case DatasetRole::english_instruction: return "english_instruction";
        case DatasetRole::evaluation: return "evaluation";
    }
    return "?";
}

DatasetRole parse_role(std::string_view name) {
    if (name == "question_translation") return DatasetRole::question_translation;
    if (name == "general_translation") return DatasetRole::general_translation;
    if (name == "english_instruction") return DatasetRole::english_instruction;
    if (name == "evaluation") return DatasetRole::evaluation;
    throw Error("unknown dataset role \"" + std::string(name) + "\"");
}

bool is_translation_role(DatasetRole role) {
    return role == DatasetRole::question_translation ||
           role == DatasetRole::general_translation;
}

const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::cot: return "cot";
        case Scenario::pot: return "pot";
        case Scenario::no_thought: return "no_thought";
        case Scenario::translation: return "translation";
    }
    return "?";
}

Scenario parse_scenario(std::string_view name) {
    if (name == "cot") return Scenario::cot;
    if (name == "pot") return Scenario::pot;
    if (name == "no_thought") return Scenario::no_thought;
    if (name == "translation") return Scenario::translation;
    throw Error("unknown scenario \"" + std::string(name) + "\"");
}

void Dataset::add_pair(QuestionPair pair) {
    if (!is_translation_role(role_)) {
        throw Error("dataset \"" + name_ + "\" has role " + role_name(role_) +
                    ", cannot hold translation pairs");
    }
    if (trimmed(pair.source_text).empty() || trimmed(pair.target_text).empty()) {
        throw Error("pair \"" + pair.id + "\": empty text side");
    }
    languages_.insert(pair.source_lang);
    pairs_.push_back(std::move(pair));
}

void Dataset::add_sample(SupervisedSample sample) {
    if (is_translation_role(role_)) {
        throw Error("dataset \"" + name_ + "\" has role " + role_name(role_) +
                    ", cannot hold supervised samples");
    }
    if (sample.scenario == Scenario::translation) {
        throw Error("sample \"" + sample.id +
                    "\": scenario \"translation\" is not valid for samples");
    }
    if (trimmed(sample.question).empty()) {
        throw Error("sample \"" + sample.id + "\": empty question");
    }
    languages_.insert(sample.language);
    samples_.push_back(std::move(sample));
}

Dataset load_dataset(const std::filesystem::path& path, DatasetRole role) {
    if (!std::filesystem::exists(path)) {
        throw Error("no such file: " + path.string());
    }
    Dataset ds(role, path.stem().string());
    std::unordered_set<std::string> seen_ids;
    const bool pairs = is_translation_role(role);

    for_each_jsonl(path, [&](size_t line, const json& obj) {
        std::string id = require_string(obj, "id", line);
        if (!seen_ids.insert(id).second) {
            throw Error(path.string() + ":" + std::to_string(line) +
                        ": duplicate id \"" + id + "\"");
        }
        std::string code = require_string(obj, "lang", line);
        auto lang = Lang::try_parse(code);
        if (!lang) {
            throw Error(path.string() + ":" + std::to_string(line) +
                        ": unknown language code \"" + code + "\"");
        }
        try {
            if (pairs) {
                if (!obj.contains("src") || !obj.contains("tgt_en")) {
                    throw Error("schema mismatch for role " +
                                std::string(role_name(role)) +
                                " (expected fields id, lang, src, tgt_en)");
                }
                QuestionPair p;
                p.id = std::move(id);
                p.source_lang = *lang;
                p.source_text = require_string(obj, "src", line);
                p.target_text = require_string(obj, "tgt_en", line);
                ds.add_pair(std::move(p));
            } else {
                if (!obj.contains("question") || !obj.contains("scenario")) {
                    throw Error("schema mismatch for role " +
                                std::string(role_name(role)) +
                                " (expected fields id, lang, scenario, question)");
                }
                SupervisedSample s;
                s.id = std::move(id);
                s.language = *lang;
                s.scenario = parse_scenario(require_string(obj, "scenario", line));
                s.question = require_string(obj, "question", line);
                if (obj.contains("response") && obj["response"].is_string()) {
                    s.response = obj["response"].get<std::string>();
                }
                if (obj.contains("gold") && obj["gold"].is_string()) {
                    s.gold = obj["gold"].get<std::string>();
                }
                if (obj.contains("options") && obj["options"].is_array()) {
                    for (const auto& opt : obj["options"]) {
                        s.options.push_back(opt.get<std::string>());
                    }
                }
                if (role == DatasetRole::english_instruction && !s.response) {
                    throw Error("training sample without a response");
                }
                if (role == DatasetRole::evaluation && !s.gold) {
                    throw Error("evaluation sample without a gold answer");
                }
                ds.add_sample(std::move(s));
            }
        } catch (const Error& e) {
            throw Error(path.string() + ":" + std::to_string(line) + ": " +
                        e.what());
        }
    });

    if (ds.size() == 0) {
        throw Error(path.string() + ": empty dataset");
    }
    return ds;
}

void write_dataset_jsonl(const Dataset& ds, const std::filesystem::path& path) {
    JsonlWriter out(path);
    if (is_translation_role(ds.role())) {
        for (const auto& p : ds.pairs()) {
            out.write(json{{"id", p.id},
                           {"lang", p.source_lang.code()},
                           {"src", p.source_text},
                           {"tgt_en", p.target_text}});
        }
    } else {
        for (const auto& s : ds.samples()) {
            json obj{{"id", s.id},
                     {"lang", s.language.code()},
                     {"scenario", scenario_name(s.scenario)},
                     {"question", s.question}};
            if (s.response) obj["response"] = *s.response;
            if (s.gold) obj["gold"] = *s.gold;
            if (!s.options.empty()) obj["options"] = s.options;
            out.write(obj);
        }
    }
    out.close();
}

StatsReport dataset_stats(const Dataset& ds) {
    StatsReport r;
    r.name = ds.name();
    r.role = ds.role();
    r.n_samples = ds.size();
    if (is_translation_role(ds.role())) {
        r.has_question = true;
        r.has_response = false;  // bitext pairs carry no task response
        for (const auto& p : ds.pairs()) r.per_language[p.source_lang]++;
    } else {
        r.has_question = true;
        bool all = !ds.samples().empty();
        for (const auto& s : ds.samples()) {
            bool answered = s.response.has_value() ||
                            (ds.role() == DatasetRole::evaluation && s.gold.has_value());
            all = all && answered;
            r.per_language[s.language]++;
        }
        r.has_response = all;
    }
    r.n_languages = r.per_language.size();
    return r;
}

const std::map<std::string, KnownDataset>& known_dataset_totals() {
    static const std::map<std::string, KnownDataset> table = {
        {"MetaMathQA", {1, 395000}},
        {"OpenMathInstruct", {1, 1343849}},
        {"GSM8KInstruct", {10, 73559}},
        {"mGSM", {10, 2500}},
        {"mSVAMP", {10, 10000}},
        {"XCSQA-train", {1, 8888}},
        {"XCSQA-test", {15, 17184}},
        {"XCSQA-dev", {15, 16000}},
        {"MultiNLI", {1, 392702}},
        {"XNLI-dev", {15, 34860}},
        {"XNLI-test", {15, 75150}},
    };
    return table;
}

Dataset downsample_per_language(const Dataset& ds, size_t cap, uint64_t seed) {
    if (cap < 1) {
        throw Error("downsample cap must be >= 1");
    }
    // Group record indices by language, then draw per language with a seed
    // derived from (seed, language code). Sorted indices keep relative order.
    std::map<Lang, std::vector<size_t>> by_lang;
    const size_t total = ds.size();
    for (size_t i = 0; i < total; ++i) {
        Lang l = is_translation_role(ds.role()) ? ds.pairs()[i].source_lang
                                                : ds.samples()[i].language;
        by_lang[l].push_back(i);
    }

    std::vector<bool> keep(total, false);
    for (const auto& [lang, indices] : by_lang) {
        if (indices.size() <= cap) {
            for (size_t i : indices) keep[i] = true;
            continue;
        }
        Rng rng(mix_seed(seed, lang.code()));
        for (size_t pos : rng.sample_indices(indices.size(), cap)) {
            keep[indices[pos]] = true;
        }
    }

    Dataset out(ds.role(), ds.name());
    for (size_t i = 0; i < total; ++i) {
        if (!keep[i]) continue;
        if (is_translation_role(ds.role())) {
            out.add_pair(ds.pairs()[i]);
        } else {
            out.add_sample(ds.samples()[i]);
        }
    }
    return out;
}

}  // namespace alignkit
