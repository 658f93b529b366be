#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "alignkit/dataset.hpp"
#include "alignkit/templates.hpp"

namespace alignkit {

enum class Stage { qalign, ralign };

const char* stage_name(Stage s);
Stage parse_stage(std::string_view name);

// One trainer-ready prompt/target pair. Stage-one (qalign) records always
// target English text; nothing ever mixes the two stages inside one record.
struct InstructionRecord {
    std::string prompt;
    std::string target;
    Stage stage = Stage::qalign;
    Lang language;       // language of the prompt's question
    Scenario scenario = Scenario::translation;
    std::string source_id;

    bool operator==(const InstructionRecord&) const = default;
};

// Stage-one records from X->En bitext: prompt wraps the non-English side in
// the translation template, target is the English side verbatim. Pairs whose
// source language is English are excluded. Accepts question_translation and
// general_translation datasets.
std::vector<InstructionRecord> build_qalign_records(const Dataset& pairs,
                                                    const TemplateSet& templates);

// Stage-two records for one scenario. Every sample needs a response and must
// carry the requested scenario. Scenario-specific target handling:
//   cot        response verbatim
//   pot        response normalized to the tagged form: code inside
//              <llm-code>...</llm-code> followed by
//              <llm-code-output>value</llm-code-output>; untagged responses
//              are treated as code and the sample's gold as the output
//   no_thought multiple-choice answers rendered as the bracketed label
//              "(A)"; options are serialized "(A) ... (B) ..." into the
//              prompt; label answers without options are an error
std::vector<InstructionRecord> build_ralign_records(const Dataset& ds,
                                                    Scenario scenario,
                                                    const TemplateSet& templates);

// Union of qalign records over question-translation and general-domain
// translation data, question records first. Ids colliding across the two
// datasets are disambiguated with a "<dataset name>:" prefix on both sides.
std::vector<InstructionRecord> combine_question_alignment(
    const Dataset& question, const Dataset& general, const TemplateSet& templates);

// Appends one En->X translation record per pair (prompt wraps the English
// side, target is the non-English side) to the stage-two records, then
// shuffles deterministically. ratio in (0,1] subsamples the translation side
// before mixing. A pair without a non-English side is a direction error.
std::vector<InstructionRecord> mix_en_x(std::vector<InstructionRecord> ralign,
                                        const Dataset& enx, uint64_t seed,
                                        const TemplateSet& templates,
                                        double ratio = 1.0);

// One JSON object per record: {"prompt","target","stage","lang","scenario",
// "source_id"}. Empty record lists are rejected.
void emit_jsonl(const std::vector<InstructionRecord>& records,
                const std::filesystem::path& path);

std::vector<InstructionRecord> load_records(const std::filesystem::path& path);

// "(A) first (B) second ..." in option order; at most five options (A..E).
std::string serialize_options(const std::vector<std::string>& options);

}  // namespace alignkit
