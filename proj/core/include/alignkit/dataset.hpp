#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "alignkit/lang.hpp"

namespace alignkit {

enum class DatasetRole {
    question_translation,
    general_translation,
    english_instruction,
    evaluation,
};

const char* role_name(DatasetRole role);
DatasetRole parse_role(std::string_view name);
bool is_translation_role(DatasetRole role);

enum class Scenario {
    cot,
    pot,
    no_thought,
    translation,  // instruction records only, never a sample scenario
};

const char* scenario_name(Scenario s);
Scenario parse_scenario(std::string_view name);

// One bitext pair. The non-English side is tagged by source_lang; the other
// side is English (target_lang is always "en" for pairs read from disk, and
// is validated wherever a pair crosses an operation boundary). Operations
// impose the direction: question alignment consumes pairs X->En, En-X mixing
// consumes the same pairs reversed.
struct QuestionPair {
    std::string id;
    Lang source_lang;
    std::string source_text;
    std::string target_text;
    Lang target_lang = Lang::english();
};

struct SupervisedSample {
    std::string id;
    Lang language;
    Scenario scenario = Scenario::cot;
    std::string question;
    std::optional<std::string> response;
    std::optional<std::string> gold;
    std::vector<std::string> options;  // multiple-choice samples only
};

// Immutable after load; safe to share across threads.
class Dataset {
  public:
    Dataset(DatasetRole role, std::string name) : role_(role), name_(std::move(name)) {}

    DatasetRole role() const { return role_; }
    const std::string& name() const { return name_; }
    const std::vector<QuestionPair>& pairs() const { return pairs_; }
    const std::vector<SupervisedSample>& samples() const { return samples_; }
    const std::set<Lang>& languages() const { return languages_; }

    size_t size() const {
        return is_translation_role(role_) ? pairs_.size() : samples_.size();
    }

    // Construction helpers; validate invariants and keep languages() in sync.
    void add_pair(QuestionPair pair);
    void add_sample(SupervisedSample sample);

  private:
    DatasetRole role_;
    std::string name_;
    std::vector<QuestionPair> pairs_;
    std::vector<SupervisedSample> samples_;
    std::set<Lang> languages_;
};

// Line schemas (UTF-8 JSONL, no BOM):
//   translation pair: {"id","lang","src","tgt_en"}
//   instruction/evaluation: {"id","lang","scenario","question","response"?,
//                            "gold"?,"options"?}
// Errors carry the file path and 1-based line number. Duplicate ids, codes
// outside the registry, schema/role mismatches and empty files are rejected.
Dataset load_dataset(const std::filesystem::path& path, DatasetRole role);

// Writes the normalized form (sorted keys, one object per line). Reload of
// the output compares equal field-for-field with the source dataset.
void write_dataset_jsonl(const Dataset& ds, const std::filesystem::path& path);

struct StatsReport {
    std::string name;
    DatasetRole role;
    size_t n_languages = 0;
    size_t n_samples = 0;
    bool has_question = false;   // every record carries a question/source text
    bool has_response = false;   // every record carries a response (or gold,
                                 // for evaluation datasets)
    std::map<Lang, size_t> per_language;
};

StatsReport dataset_stats(const Dataset& ds);

// Published totals for the datasets this pipeline is normally fed with,
// keyed by canonical name. Lets `stats --expect NAME` validate a converted
// file against the known (#languages, #samples) totals.
struct KnownDataset {
    size_t n_languages;
    size_t n_samples;
};
const std::map<std::string, KnownDataset>& known_dataset_totals();

// Per-language uniform downsampling without replacement. Keeps
// min(cap, count(lang)) samples per language, preserving relative order.
// Selection for a language depends only on (its sample count, cap, seed,
// language code), so runs are reproducible across platforms.
Dataset downsample_per_language(const Dataset& ds, size_t cap, uint64_t seed);

}  // namespace alignkit
