#include "alignkit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "alignkit/error.hpp"
#include "alignkit/jsonl.hpp"
#include "alignkit/metrics.hpp"
#include "alignkit/records.hpp"

namespace alignkit {

namespace {

std::string trimmed(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool gold_is_choice_label(const std::string& gold) {
    std::string g = trimmed(gold);
    if (!g.empty() && g.front() == '(') g.erase(0, 1);
    if (!g.empty() && g.back() == ')') g.pop_back();
    if (g.size() != 1) return false;
    char c = static_cast<char>(std::toupper(static_cast<unsigned char>(g[0])));
    return c >= 'A' && c <= 'E';
}

// One decoding endpoint per worker; replay/mock are cheap to re-create and
// external backends must not share a connection across threads.
struct WorkerBackends {
    BackendPtr single;
    std::optional<ProxyEnsemble> ensemble;

    explicit WorkerBackends(const BackendChoice& choice) {
        if (choice.is_proxy()) {
            ensemble.emplace(make_backend(choice.base), make_backend(choice.expert),
                             make_backend(choice.anti));
        } else {
            single = make_backend(choice.single);
        }
    }

    DecodeResult decode(const std::string& prompt, const DecodeParams& params) {
        if (ensemble) return proxy_decode(*ensemble, prompt, params);
        return greedy_decode(*single, prompt, params);
    }
};

json prediction_to_json(const Prediction& p) {
    json obj{{"id", p.id},
             {"lang", p.lang.code()},
             {"response", p.response},
             {"extracted", p.extracted ? json(*p.extracted) : json(nullptr)},
             {"correct", p.correct}};
    if (p.failed) obj["failed"] = true;
    return obj;
}

Prediction prediction_from_json(const json& obj, size_t line) {
    Prediction p;
    p.id = require_string(obj, "id", line);
    p.lang = Lang::parse(require_string(obj, "lang", line));
    p.response = require_string(obj, "response", line);
    if (obj.contains("extracted") && obj["extracted"].is_string()) {
        p.extracted = obj["extracted"].get<std::string>();
    }
    p.correct = obj.value("correct", false);
    p.failed = obj.value("failed", false);
    return p;
}

void write_predictions(const std::vector<Prediction>& predictions,
                       const std::filesystem::path& path) {
    JsonlWriter out(path);
    for (const auto& p : predictions) out.write(prediction_to_json(p));
    out.close();
}

json config_to_json(const EvalConfig& cfg) {
    json backend;
    if (cfg.backend.is_proxy()) {
        backend = json{{"base", cfg.backend.base},
                       {"expert", cfg.backend.expert},
                       {"anti", cfg.backend.anti}};
    } else {
        backend = json{{"single", cfg.backend.single}};
    }
    json executor;
    if (cfg.executor_configured) {
        executor = json{{"command", cfg.executor.command},
                        {"timeout_secs", cfg.executor.timeout_secs},
                        {"max_output_bytes", cfg.executor.max_output_bytes}};
    }
    return json{{"dataset", cfg.dataset_path.string()},
                {"scenario", scenario_name(cfg.scenario)},
                {"backend", backend},
                {"max_new_tokens", cfg.decode.max_new_tokens},
                {"stop_strings", cfg.decode.stop_strings},
                {"smoothing_epsilon", cfg.decode.smoothing_epsilon},
                {"workers", cfg.workers},
                {"executor", executor},
                {"templates_version", cfg.templates.version()}};
}

}  // namespace

void BackendChoice::validate() const {
    bool proxy_parts = !base.empty() || !expert.empty() || !anti.empty();
    if (!single.empty() && proxy_parts) {
        throw Error("choose either one backend or a proxy triple, not both");
    }
    if (single.empty()) {
        if (base.empty() || expert.empty() || anti.empty()) {
            throw Error("proxy decoding needs base, expert and anti backends");
        }
    }
}

ExtractedAnswer extract_answer(Scenario scenario, const std::string& gold,
                               const std::string& response) {
    switch (scenario) {
        case Scenario::cot:
        case Scenario::pot:
            return extract_last_number(response);
        case Scenario::no_thought:
            if (gold_is_choice_label(gold)) {
                return extract_choice_label(response);
            }
            return extract_nli_label(response);
        case Scenario::translation:
            break;
    }
    throw Error("no extractor for scenario translation");
}

EvalRun run_eval(const EvalConfig& cfg) {
    cfg.backend.validate();
    cfg.decode.validate();
    if (cfg.scenario == Scenario::translation) {
        throw Error("run_eval: evaluation scenario must be cot/pot/no_thought");
    }
    if (cfg.scenario == Scenario::pot && !cfg.executor_configured) {
        throw Error("run_eval: pot evaluation needs an executor "
                    "(--executor-cmd)");
    }

    Dataset ds = load_dataset(cfg.dataset_path, DatasetRole::evaluation);
    for (const auto& sample : ds.samples()) {
        if (!sample.gold) {
            throw Error("sample \"" + sample.id + "\": evaluation sample "
                        "without a gold answer");
        }
    }

    // Resume: accept prediction records from a previous partial run.
    std::map<std::string, Prediction> done;
    auto predictions_path = cfg.run_dir / "predictions.jsonl";
    if (!cfg.run_dir.empty() && std::filesystem::exists(predictions_path)) {
        for_each_jsonl(predictions_path, [&](size_t line, const json& obj) {
            Prediction p = prediction_from_json(obj, line);
            done[p.id] = std::move(p);
        });
    }

    std::vector<size_t> todo;
    for (size_t i = 0; i < ds.samples().size(); ++i) {
        if (!done.count(ds.samples()[i].id)) todo.push_back(i);
    }

    std::vector<Prediction> fresh(todo.size());
    std::atomic<size_t> cursor{0};
    std::atomic<bool> aborted{false};
    std::string abort_reason;
    std::mutex abort_mutex;

    size_t n_workers = std::max<size_t>(1, std::min(cfg.workers, todo.size()));
    auto worker = [&]() {
        std::optional<WorkerBackends> backends;
        try {
            backends.emplace(cfg.backend);
        } catch (const Error& e) {
            std::lock_guard<std::mutex> lock(abort_mutex);
            aborted = true;
            abort_reason = e.what();
            return;
        }
        for (;;) {
            size_t slot = cursor.fetch_add(1);
            if (slot >= todo.size() || aborted) break;
            const SupervisedSample& sample = ds.samples()[todo[slot]];

            Bindings bindings{{"question", sample.question}};
            if (cfg.scenario == Scenario::no_thought) {
                bindings["options"] = serialize_options(sample.options);
            }
            std::string prompt;
            Prediction p;
            p.id = sample.id;
            p.lang = sample.language;
            try {
                prompt = cfg.templates.render_prompt(cfg.scenario, bindings);
            } catch (const Error& e) {
                p.failed = true;
                p.response = std::string("prompt error: ") + e.what();
                fresh[slot] = std::move(p);
                continue;
            }

            DecodeResult decoded = backends->decode(prompt, cfg.decode);
            p.response = decoded.text;
            if (decoded.finish == FinishReason::backend_error) {
                p.failed = true;
                fresh[slot] = std::move(p);
                continue;
            }

            std::string scored_text = decoded.text;
            if (cfg.scenario == Scenario::pot) {
                auto scan = extract_code_block(scored_text);
                if (scan.block) {
                    ExecutionResult exec = run_program(*scan.block, cfg.executor);
                    if (exec.status == ExecStatus::ok) {
                        scored_text = splice_code_output(scored_text, exec.value);
                        p.response = scored_text;
                    }
                }
            }

            ExtractedAnswer answer =
                extract_answer(cfg.scenario, *sample.gold, scored_text);
            if (answer.kind != AnswerKind::none) p.extracted = answer.value;
            p.correct = answer_matches_gold(answer, *sample.gold);
            fresh[slot] = std::move(p);
        }
    };

    std::vector<std::thread> threads;
    for (size_t i = 0; i < n_workers; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();

    if (aborted) {
        // Persist the partial result before giving up so a later run can
        // resume from it.
        if (!cfg.run_dir.empty()) {
            std::filesystem::create_directories(cfg.run_dir);
            std::vector<Prediction> partial;
            for (auto& [id, p] : done) partial.push_back(p);
            for (auto& p : fresh) {
                if (!p.id.empty()) partial.push_back(p);
            }
            std::sort(partial.begin(), partial.end(),
                      [](const Prediction& a, const Prediction& b) {
                          return a.id < b.id;
                      });
            write_predictions(partial, predictions_path);
        }
        throw Error("run aborted, backend unavailable: " + abort_reason);
    }

    EvalRun run;
    run.dataset_name = ds.name();
    run.scenario = cfg.scenario;
    for (auto& [id, p] : done) run.predictions.push_back(std::move(p));
    for (auto& p : fresh) run.predictions.push_back(std::move(p));
    std::sort(run.predictions.begin(), run.predictions.end(),
              [](const Prediction& a, const Prediction& b) { return a.id < b.id; });

    for (const auto& p : run.predictions) {
        auto& score = run.per_language[p.lang];
        score.total++;
        if (p.correct) score.correct++;
    }
    double sum = 0.0;
    double non_en_sum = 0.0;
    size_t non_en_count = 0;
    for (const auto& [lang, score] : run.per_language) {
        sum += score.accuracy();
        if (!lang.is_english() && lang.in_mgsm_set()) {
            non_en_sum += score.accuracy();
            ++non_en_count;
        }
    }
    run.macro_average =
        run.per_language.empty() ? 0.0 : sum / run.per_language.size();
    if (non_en_count > 0) {
        run.non_english_average = non_en_sum / non_en_count;
    }

    if (!cfg.run_dir.empty()) {
        write_run_dir(cfg, run);
    }
    return run;
}

json report_json(const EvalRun& run) {
    json per_lang = json::object();
    for (const auto& [lang, score] : run.per_language) {
        per_lang[lang.code()] = json{{"total", score.total},
                                     {"correct", score.correct},
                                     {"accuracy", score.accuracy()}};
    }
    json out{{"dataset", run.dataset_name},
             {"scenario", scenario_name(run.scenario)},
             {"n_samples", run.predictions.size()},
             {"per_lang", per_lang},
             {"avg", run.macro_average}};
    if (run.non_english_average) {
        out["non_en_avg"] = *run.non_english_average;
    }
    return out;
}

std::string report_text(const EvalRun& run) {
    // Column order follows the registry, which puts the mGSM languages in
    // the canonical Bn..En order first.
    std::vector<Lang> columns;
    for (Lang lang : Lang::registry()) {
        if (run.per_language.count(lang)) columns.push_back(lang);
    }
    auto pct = [](double v) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%.1f", v * 100.0);
        return std::string(buf);
    };

    std::string header = "Lang  ";
    std::string row = "Acc   ";
    auto pad = [](std::string s, size_t w) {
        while (s.size() < w) s = " " + s;
        return s;
    };
    for (Lang lang : columns) {
        std::string code = lang.code();
        code[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(code[0])));
        header += pad(code, 7);
        row += pad(pct(run.per_language.at(lang).accuracy()), 7);
    }
    header += pad("Avg.", 8);
    row += pad(pct(run.macro_average), 8);
    if (run.non_english_average) {
        header += pad("Non-En", 8);
        row += pad(pct(*run.non_english_average), 8);
    }
    return header + "\n" + row + "\n";
}

void write_run_dir(const EvalConfig& cfg, const EvalRun& run) {
    std::filesystem::create_directories(cfg.run_dir);
    {
        std::ofstream out(cfg.run_dir / "config.json", std::ios::binary);
        out << config_to_json(cfg).dump(2) << '\n';
    }
    write_predictions(run.predictions, cfg.run_dir / "predictions.jsonl");
    {
        std::ofstream out(cfg.run_dir / "report.json", std::ios::binary);
        out << report_json(run).dump(2) << '\n';
    }
    {
        std::ofstream out(cfg.run_dir / "report.txt", std::ios::binary);
        out << report_text(run);
    }
}

}  // namespace alignkit
