#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "alignkit/dataset.hpp"
#include "alignkit/exec.hpp"
#include "alignkit/extract.hpp"
#include "alignkit/proxy.hpp"
#include "alignkit/templates.hpp"

#include <nlohmann/json.hpp>

namespace alignkit {

// Backend selection: either one spec string, or the proxy triple.
struct BackendChoice {
    std::string single;
    std::string base, expert, anti;

    bool is_proxy() const { return single.empty(); }
    void validate() const;
};

struct EvalConfig {
    std::filesystem::path dataset_path;
    Scenario scenario = Scenario::cot;
    BackendChoice backend;
    DecodeParams decode;
    ExecutorConfig executor;
    bool executor_configured = false;  // required for pot
    size_t workers = 1;
    std::filesystem::path run_dir;  // config.json / predictions.jsonl /
                                    // report.json / report.txt
    TemplateSet templates = TemplateSet::builtin();
};

struct Prediction {
    std::string id;
    Lang lang;
    std::string response;
    std::optional<std::string> extracted;  // normal-form answer, if any
    bool correct = false;
    bool failed = false;  // decode failure; always scored wrong
};

struct LangScore {
    size_t total = 0;
    size_t correct = 0;
    double accuracy() const {
        return total == 0 ? 0.0 : static_cast<double>(correct) / total;
    }
};

struct EvalRun {
    std::string dataset_name;
    Scenario scenario = Scenario::cot;
    std::vector<Prediction> predictions;  // sorted by id
    std::map<Lang, LangScore> per_language;
    double macro_average = 0.0;  // over languages present
    // Over non-English mGSM languages present, when any.
    std::optional<double> non_english_average;
};

// Zero-shot greedy evaluation: render prompt, decode (single backend or
// proxy ensemble), pot-execute when configured, extract, score against gold.
// Every sample yields exactly one prediction, decode failures score wrong.
// When run_dir holds predictions from an earlier partial run, those ids are
// skipped and the merged result equals an uninterrupted run.
EvalRun run_eval(const EvalConfig& cfg);

nlohmann::json report_json(const EvalRun& run);
std::string report_text(const EvalRun& run);

// Writes config.json, predictions.jsonl, report.json and report.txt.
// Deterministic byte-for-byte for identical runs.
void write_run_dir(const EvalConfig& cfg, const EvalRun& run);

// The extractor used for a sample: number for cot/pot; for no_thought the
// gold decides between choice labels and nli labels.
ExtractedAnswer extract_answer(Scenario scenario, const std::string& gold,
                               const std::string& response);

}  // namespace alignkit
