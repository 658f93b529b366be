#include "alignkit/records.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "alignkit/error.hpp"
#include "alignkit/extract.hpp"
#include "alignkit/jsonl.hpp"
#include "alignkit/rng.hpp"

namespace alignkit {

namespace {

InstructionRecord qalign_record(const QuestionPair& pair,
                                const TemplateSet& templates) {
    if (!pair.target_lang.is_english()) {
        throw Error("pair \"" + pair.id +
                    "\": direction mismatch (target language " +
                    pair.target_lang.code() + ", expected en)");
    }
    InstructionRecord rec;
    rec.prompt = templates.render_prompt(
        Scenario::translation, {{"question", pair.source_text},
                                {"source_language", pair.source_lang.name()},
                                {"target_language", "English"}});
    rec.target = templates.render_target(Scenario::translation,
                                         {{"response", pair.target_text}});
    rec.stage = Stage::qalign;
    rec.language = pair.source_lang;
    rec.scenario = Scenario::translation;
    rec.source_id = pair.id;
    return rec;
}

std::string trimmed(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Resolves a multiple-choice answer to its letter. Accepts "A", "(a)", "B)",
// or the exact option text.
std::optional<char> resolve_choice_letter(const std::string& answer,
                                          const std::vector<std::string>& options) {
    std::string t = trimmed(answer);
    if (t.size() >= 1 && t.size() <= 3) {
        std::string bare = t;
        if (bare.front() == '(') bare.erase(0, 1);
        if (!bare.empty() && bare.back() == ')') bare.pop_back();
        if (bare.size() == 1) {
            char upper = static_cast<char>(
                std::toupper(static_cast<unsigned char>(bare[0])));
            if (upper >= 'A' && upper <= 'E') return upper;
        }
    }
    for (size_t i = 0; i < options.size() && i < 5; ++i) {
        if (trimmed(options[i]) == t) return static_cast<char>('A' + i);
    }
    return std::nullopt;
}

// Puts a pot response into the tagged form. Tagged responses pass through
// once they carry an output block; otherwise the output is spliced from
// gold. Untagged responses are treated as bare code.
std::string normalize_pot_target(const SupervisedSample& sample) {
    const std::string& response = *sample.response;
    auto scan = extract_code_block(response);
    if (scan.unclosed) {
        throw Error("sample \"" + sample.id + "\": unclosed llm-code block");
    }
    if (scan.block) {
        size_t after = scan.block->end + std::string(kCodeCloseTag).size();
        if (response.find(kOutputOpenTag, after) != std::string::npos) {
            return response;
        }
        if (!sample.gold) {
            throw Error("sample \"" + sample.id +
                        "\": pot response has no execution output and the "
                        "sample has no gold value to splice");
        }
        return splice_code_output(response, trimmed(*sample.gold));
    }
    if (!sample.gold) {
        throw Error("sample \"" + sample.id +
                    "\": untagged pot response needs a gold value for the "
                    "output block");
    }
    std::string code = response;
    if (!code.empty() && code.back() == '\n') code.pop_back();
    std::string tagged =
        std::string(kCodeOpenTag) + "\n" + code + "\n" + kCodeCloseTag;
    return splice_code_output(tagged, trimmed(*sample.gold));
}

}  // namespace

const char* stage_name(Stage s) {
    return s == Stage::qalign ? "qalign" : "ralign";
}

Stage parse_stage(std::string_view name) {
    if (name == "qalign") return Stage::qalign;
    if (name == "ralign") return Stage::ralign;
    throw Error("unknown stage \"" + std::string(name) + "\"");
}

std::vector<InstructionRecord> build_qalign_records(const Dataset& pairs,
                                                    const TemplateSet& templates) {
    if (!is_translation_role(pairs.role())) {
        throw Error("build_qalign_records: dataset \"" + pairs.name() +
                    "\" has role " + role_name(pairs.role()) +
                    ", expected a translation role");
    }
    std::vector<InstructionRecord> out;
    out.reserve(pairs.pairs().size());
    for (const auto& pair : pairs.pairs()) {
        if (pair.source_lang.is_english()) continue;  // nothing to align
        out.push_back(qalign_record(pair, templates));
    }
    return out;
}

std::vector<InstructionRecord> build_ralign_records(const Dataset& ds,
                                                    Scenario scenario,
                                                    const TemplateSet& templates) {
    if (ds.role() != DatasetRole::english_instruction) {
        throw Error("build_ralign_records: dataset \"" + ds.name() +
                    "\" has role " + role_name(ds.role()) +
                    ", expected english_instruction");
    }
    if (scenario == Scenario::translation) {
        throw Error("build_ralign_records: scenario must be cot/pot/no_thought");
    }
    std::vector<InstructionRecord> out;
    out.reserve(ds.samples().size());
    for (const auto& sample : ds.samples()) {
        if (sample.scenario != scenario) {
            throw Error("sample \"" + sample.id + "\": scenario " +
                        scenario_name(sample.scenario) +
                        " does not match requested " + scenario_name(scenario));
        }
        if (!sample.response || trimmed(*sample.response).empty()) {
            throw Error("sample \"" + sample.id + "\": missing response");
        }

        Bindings prompt_bindings{{"question", sample.question}};
        std::string target_text;
        switch (scenario) {
            case Scenario::cot:
                target_text = *sample.response;
                break;
            case Scenario::pot:
                target_text = normalize_pot_target(sample);
                break;
            case Scenario::no_thought: {
                prompt_bindings["options"] = serialize_options(sample.options);
                auto letter = resolve_choice_letter(*sample.response, sample.options);
                if (letter) {
                    if (sample.options.empty()) {
                        throw Error("sample \"" + sample.id +
                                    "\": label answer without options");
                    }
                    target_text = std::string("(") + *letter + ")";
                } else {
                    // Label-free answers (e.g. nli datasets) pass through.
                    target_text = *sample.response;
                }
                break;
            }
            case Scenario::translation:
                break;  // unreachable, rejected above
        }

        InstructionRecord rec;
        rec.prompt = templates.render_prompt(scenario, prompt_bindings);
        rec.target =
            templates.render_target(scenario, {{"response", target_text}});
        rec.stage = Stage::ralign;
        rec.language = sample.language;
        rec.scenario = scenario;
        rec.source_id = sample.id;
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<InstructionRecord> combine_question_alignment(
    const Dataset& question, const Dataset& general,
    const TemplateSet& templates) {
    if (question.role() != DatasetRole::question_translation) {
        throw Error("combine_question_alignment: first dataset must have role "
                    "question_translation");
    }
    if (general.role() != DatasetRole::general_translation) {
        throw Error("combine_question_alignment: second dataset must have role "
                    "general_translation");
    }
    auto q_records = build_qalign_records(question, templates);
    auto g_records = build_qalign_records(general, templates);

    std::unordered_set<std::string> q_ids, g_ids;
    for (const auto& r : q_records) q_ids.insert(r.source_id);
    for (const auto& r : g_records) g_ids.insert(r.source_id);
    for (auto& r : q_records) {
        if (g_ids.count(r.source_id)) r.source_id = question.name() + ":" + r.source_id;
    }
    for (auto& r : g_records) {
        if (q_ids.count(r.source_id)) r.source_id = general.name() + ":" + r.source_id;
    }

    std::vector<InstructionRecord> out = std::move(q_records);
    out.insert(out.end(), std::make_move_iterator(g_records.begin()),
               std::make_move_iterator(g_records.end()));
    return out;
}

std::vector<InstructionRecord> mix_en_x(std::vector<InstructionRecord> ralign,
                                        const Dataset& enx, uint64_t seed,
                                        const TemplateSet& templates,
                                        double ratio) {
    if (!is_translation_role(enx.role())) {
        throw Error("mix_en_x: translation dataset required");
    }
    if (!(ratio > 0.0) || ratio > 1.0) {
        throw Error("mix_en_x: ratio must be in (0, 1]");
    }

    std::vector<const QuestionPair*> pool;
    pool.reserve(enx.pairs().size());
    for (const auto& pair : enx.pairs()) {
        if (pair.source_lang.is_english()) {
            throw Error("pair \"" + pair.id +
                        "\": wrong direction for En-X mixing (no non-English "
                        "side)");
        }
        pool.push_back(&pair);
    }

    if (ratio < 1.0) {
        size_t keep = static_cast<size_t>(
            std::llround(ratio * static_cast<double>(pool.size())));
        Rng rng(mix_seed(seed, "mix_ratio"));
        auto chosen = rng.sample_indices(pool.size(), keep);
        std::vector<const QuestionPair*> subset;
        subset.reserve(chosen.size());
        for (size_t idx : chosen) subset.push_back(pool[idx]);
        pool = std::move(subset);
    }

    for (const QuestionPair* pair : pool) {
        InstructionRecord rec;
        rec.prompt = templates.render_prompt(
            Scenario::translation,
            {{"question", pair->target_text},
             {"source_language", "English"},
             {"target_language", pair->source_lang.name()}});
        rec.target = templates.render_target(Scenario::translation,
                                             {{"response", pair->source_text}});
        rec.stage = Stage::ralign;
        rec.language = pair->source_lang;
        rec.scenario = Scenario::translation;
        rec.source_id = pair->id;
        ralign.push_back(std::move(rec));
    }

    Rng rng(mix_seed(seed, "mix_en_x"));
    rng.shuffle(ralign);
    return ralign;
}

void emit_jsonl(const std::vector<InstructionRecord>& records,
                const std::filesystem::path& path) {
    if (records.empty()) {
        throw Error("emit_jsonl: refusing to write an empty record file");
    }
    JsonlWriter out(path);
    for (const auto& rec : records) {
        out.write(json{{"prompt", rec.prompt},
                       {"target", rec.target},
                       {"stage", stage_name(rec.stage)},
                       {"lang", rec.language.code()},
                       {"scenario", scenario_name(rec.scenario)},
                       {"source_id", rec.source_id}});
    }
    out.close();
}

std::vector<InstructionRecord> load_records(const std::filesystem::path& path) {
    std::vector<InstructionRecord> out;
    for_each_jsonl(path, [&](size_t line, const json& obj) {
        InstructionRecord rec;
        rec.prompt = require_string(obj, "prompt", line);
        rec.target = require_string(obj, "target", line);
        rec.stage = parse_stage(require_string(obj, "stage", line));
        rec.language = Lang::parse(require_string(obj, "lang", line));
        rec.scenario = parse_scenario(require_string(obj, "scenario", line));
        rec.source_id = require_string(obj, "source_id", line);
        out.push_back(std::move(rec));
    });
    return out;
}

std::string serialize_options(const std::vector<std::string>& options) {
    if (options.size() > 5) {
        throw Error("at most five answer options (A..E) are supported");
    }
    std::string out;
    for (size_t i = 0; i < options.size(); ++i) {
        if (i) out += ' ';
        out += '(';
        out += static_cast<char>('A' + i);
        out += ") ";
        out += options[i];
    }
    return out;
}

}  // namespace alignkit
