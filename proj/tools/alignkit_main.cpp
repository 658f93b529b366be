// alignkit: dataset, decoding and metric pipeline in one binary.
//
// Subcommands: stats, build-data, downsample, proxy-decode, eval,
// consistency, lang-consistency, compactness. Data goes to stdout or the
// declared output paths, diagnostics to stderr. Exit codes: 0 success,
// 1 domain error, 2 usage error.

#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "alignkit/dataset.hpp"
#include "alignkit/error.hpp"
#include "alignkit/harness.hpp"
#include "alignkit/jsonl.hpp"
#include "alignkit/lid.hpp"
#include "alignkit/metrics.hpp"
#include "alignkit/proxy.hpp"
#include "alignkit/records.hpp"

namespace ak = alignkit;
using ak::json;

namespace {

struct CommonOptions {
    bool pretty = false;
};

std::vector<std::string> split_command_words(const std::string& command) {
    std::vector<std::string> argv;
    std::istringstream is(command);
    std::string word;
    while (is >> word) argv.push_back(word);
    return argv;
}

ak::TemplateSet load_templates(const std::string& path) {
    if (path.empty()) return ak::TemplateSet::builtin();
    return ak::TemplateSet::load(path);
}

void emit_json(const json& doc) { std::cout << doc.dump() << "\n"; }

// ---------------------------------------------------------------- stats --

int cmd_stats(const std::string& in, const std::string& role_str,
              const std::string& expect, const CommonOptions& common) {
    ak::Dataset ds = ak::load_dataset(in, ak::parse_role(role_str));
    ak::StatsReport stats = ak::dataset_stats(ds);

    if (!expect.empty()) {
        const auto& table = ak::known_dataset_totals();
        auto it = table.find(expect);
        if (it == table.end()) {
            throw ak::Error("no published totals for dataset \"" + expect + "\"");
        }
        if (it->second.n_languages != stats.n_languages ||
            it->second.n_samples != stats.n_samples) {
            throw ak::Error(
                "totals mismatch for " + expect + ": expected " +
                std::to_string(it->second.n_languages) + " languages / " +
                std::to_string(it->second.n_samples) + " samples, found " +
                std::to_string(stats.n_languages) + " / " +
                std::to_string(stats.n_samples));
        }
    }

    json per_lang = json::object();
    for (const auto& [lang, count] : stats.per_language) {
        per_lang[lang.code()] = count;
    }
    json doc{{"name", stats.name},
             {"role", ak::role_name(stats.role)},
             {"n_lang", stats.n_languages},
             {"n_sample", stats.n_samples},
             {"question", stats.has_question},
             {"response", stats.has_response},
             {"per_lang", per_lang}};
    if (common.pretty) {
        std::printf("%-24s %7s %10s %-22s %-9s %-9s\n", "Dataset", "#Lang",
                    "#Sample", "Usage", "Question", "Response");
        std::printf("%-24s %7zu %10zu %-22s %-9s %-9s\n", stats.name.c_str(),
                    stats.n_languages, stats.n_samples, ak::role_name(stats.role),
                    stats.has_question ? "yes" : "no",
                    stats.has_response ? "yes" : "no");
        for (const auto& [lang, count] : stats.per_language) {
            std::printf("  %-6s %10zu\n", lang.code().c_str(), count);
        }
    } else {
        emit_json(doc);
    }
    return 0;
}

// ----------------------------------------------------------- build-data --

int cmd_build_data(const std::string& stage, const std::string& questions,
                   const std::string& general, const std::string& in,
                   const std::string& scenario_str, const std::string& mix_enx,
                   double ratio, uint64_t seed, const std::string& templates_path,
                   const std::string& out) {
    ak::TemplateSet templates = load_templates(templates_path);
    std::vector<ak::InstructionRecord> records;

    if (stage == "qalign") {
        if (questions.empty()) {
            throw CLI::ValidationError("--questions is required for --stage qalign");
        }
        ak::Dataset q =
            ak::load_dataset(questions, ak::DatasetRole::question_translation);
        if (!general.empty()) {
            ak::Dataset g =
                ak::load_dataset(general, ak::DatasetRole::general_translation);
            records = ak::combine_question_alignment(q, g, templates);
        } else {
            records = ak::build_qalign_records(q, templates);
        }
    } else {  // ralign
        if (in.empty()) {
            throw CLI::ValidationError("--in is required for --stage ralign");
        }
        ak::Scenario scenario = ak::parse_scenario(scenario_str);
        ak::Dataset ds = ak::load_dataset(in, ak::DatasetRole::english_instruction);
        records = ak::build_ralign_records(ds, scenario, templates);
        if (!mix_enx.empty()) {
            ak::Dataset enx =
                ak::load_dataset(mix_enx, ak::DatasetRole::general_translation);
            records = ak::mix_en_x(std::move(records), enx, seed, templates, ratio);
        }
    }

    ak::emit_jsonl(records, out);
    emit_json(json{{"stage", stage}, {"records", records.size()}, {"out", out}});
    return 0;
}

// ----------------------------------------------------------- downsample --

int cmd_downsample(const std::string& in, const std::string& role_str, size_t cap,
                   uint64_t seed, const std::string& out) {
    ak::Dataset ds = ak::load_dataset(in, ak::parse_role(role_str));
    ak::Dataset sampled = ak::downsample_per_language(ds, cap, seed);
    ak::write_dataset_jsonl(sampled, out);
    emit_json(json{{"in", ds.size()}, {"kept", sampled.size()}, {"out", out}});
    return 0;
}

// --------------------------------------------------------- proxy-decode --

int cmd_proxy_decode(const std::string& base, const std::string& expert,
                     const std::string& anti, const std::string& in,
                     const std::string& prompt, const std::string& out,
                     const std::string& audit, size_t max_new_tokens,
                     const std::vector<std::string>& stops, double eps) {
    if (in.empty() && prompt.empty()) {
        throw CLI::ValidationError("proxy-decode needs --in or --prompt");
    }
    ak::ProxyEnsemble ensemble(ak::make_backend(base), ak::make_backend(expert),
                               ak::make_backend(anti));
    ak::DecodeParams params;
    params.max_new_tokens = max_new_tokens;
    params.stop_strings = stops;
    params.smoothing_epsilon = eps;
    params.validate();

    struct Job {
        std::string id;
        std::string prompt;
    };
    std::vector<Job> jobs;
    if (!in.empty()) {
        ak::for_each_jsonl(in, [&](size_t line, const json& obj) {
            jobs.push_back(Job{ak::require_string(obj, "id", line),
                               ak::require_string(obj, "prompt", line)});
        });
    } else {
        jobs.push_back(Job{"prompt-0", prompt});
    }

    std::unique_ptr<ak::JsonlWriter> out_file;
    if (!out.empty()) out_file = std::make_unique<ak::JsonlWriter>(out);
    std::unique_ptr<ak::JsonlWriter> audit_file;
    if (!audit.empty()) audit_file = std::make_unique<ak::JsonlWriter>(audit);

    for (const auto& job : jobs) {
        ak::DecodeResult result = ak::proxy_decode(ensemble, job.prompt, params);
        json line{{"id", job.id},
                  {"text", result.text},
                  {"n_tokens", result.tokens.size()},
                  {"finish", ak::finish_reason_name(result.finish)}};
        if (!result.error.empty()) line["error"] = result.error;
        if (out_file) {
            out_file->write(line);
        } else {
            emit_json(line);
        }
        if (audit_file) {
            json steps = json::array();
            for (const auto& step : result.steps) {
                json s{{"token", step.token}, {"base", step.base_logprob}};
                if (step.expert_logprob) s["expert"] = *step.expert_logprob;
                if (step.anti_logprob) s["anti"] = *step.anti_logprob;
                steps.push_back(std::move(s));
            }
            audit_file->write(json{{"id", job.id}, {"steps", steps}});
        }
    }
    if (out_file) out_file->close();
    if (audit_file) audit_file->close();
    return 0;
}

// ------------------------------------------------------------------ eval --

int cmd_eval(const std::string& in, const std::string& scenario_str,
             const std::string& backend, const std::string& base,
             const std::string& expert, const std::string& anti,
             const std::string& out_dir, size_t max_new_tokens,
             const std::vector<std::string>& stops, double eps,
             const std::string& executor_cmd, double timeout, size_t workers,
             const std::string& templates_path, const CommonOptions& common) {
    if (backend.empty() && base.empty()) {
        throw CLI::ValidationError(
            "eval needs --backend or the --base/--expert/--anti triple");
    }
    ak::EvalConfig cfg;
    cfg.dataset_path = in;
    cfg.scenario = ak::parse_scenario(scenario_str);
    cfg.backend.single = backend;
    cfg.backend.base = base;
    cfg.backend.expert = expert;
    cfg.backend.anti = anti;
    cfg.decode.max_new_tokens = max_new_tokens;
    cfg.decode.stop_strings = stops;
    cfg.decode.smoothing_epsilon = eps;
    cfg.workers = workers;
    cfg.run_dir = out_dir;
    cfg.templates = load_templates(templates_path);
    if (!executor_cmd.empty()) {
        cfg.executor.command = split_command_words(executor_cmd);
        cfg.executor.timeout_secs = timeout;
        cfg.executor_configured = true;
    }

    ak::EvalRun run = ak::run_eval(cfg);
    if (common.pretty) {
        std::cout << ak::report_text(run);
    } else {
        emit_json(ak::report_json(run));
    }
    return 0;
}

// ----------------------------------------------------------- consistency --

// Lines {"id","lang","response"}: id is the question key shared across
// languages. Ids that end in their own language code (separated by one of
// "-_:") are grouped by the stripped key, so eval predictions with ids like
// "q12-de" align naturally.
int cmd_consistency(const std::string& in, const CommonOptions& common) {
    std::map<ak::Lang, std::map<std::string, ak::StepAnswerList>> responses;
    ak::for_each_jsonl(in, [&](size_t line, const json& obj) {
        std::string id = ak::require_string(obj, "id", line);
        ak::Lang lang = ak::Lang::parse(ak::require_string(obj, "lang", line));
        std::string response = ak::require_string(obj, "response", line);

        std::string suffix = lang.code();
        if (id.size() > suffix.size() + 1) {
            size_t at = id.size() - suffix.size() - 1;
            char sep = id[at];
            if ((sep == '-' || sep == '_' || sep == ':') &&
                id.compare(at + 1, suffix.size(), suffix) == 0) {
                id = id.substr(0, at);
            }
        }
        ak::StepAnswerList steps;
        steps.values = ak::extract_step_answers(response);
        if (!responses[lang].emplace(id, std::move(steps)).second) {
            throw ak::Error(in + ":" + std::to_string(line) +
                            ": duplicate (id, lang) after grouping: " + id +
                            ", " + lang.code());
        }
    });

    ak::ConsistencyMatrix matrix = ak::consistency_matrix(responses);
    json langs = json::array();
    for (ak::Lang lang : matrix.languages) langs.push_back(lang.code());
    json doc{{"languages", langs}, {"cells", matrix.cells}};
    if (common.pretty) {
        std::printf("%6s", "");
        for (ak::Lang lang : matrix.languages) {
            std::printf("%8s", lang.code().c_str());
        }
        std::printf("\n");
        for (size_t i = 0; i < matrix.languages.size(); ++i) {
            std::printf("%6s", matrix.languages[i].code().c_str());
            for (size_t j = 0; j < matrix.languages.size(); ++j) {
                std::printf("%8.1f", matrix.cells[i][j] * 100.0);
            }
            std::printf("\n");
        }
    } else {
        emit_json(doc);
    }
    return 0;
}

// ------------------------------------------------------ lang-consistency --

int cmd_lang_consistency(const std::string& questions_path,
                         const std::string& responses_path, size_t profile_len,
                         const CommonOptions& common) {
    ak::Dataset questions =
        ak::load_dataset(questions_path, ak::DatasetRole::evaluation);

    std::map<std::string, std::string> responses;
    ak::for_each_jsonl(responses_path, [&](size_t line, const json& obj) {
        responses[ak::require_string(obj, "id", line)] =
            ak::require_string(obj, "response", line);
    });

    std::vector<std::pair<std::string, ak::Lang>> q;
    std::vector<std::string> r;
    for (const auto& sample : questions.samples()) {
        auto it = responses.find(sample.id);
        if (it == responses.end()) {
            throw ak::Error("no response for question id \"" + sample.id + "\"");
        }
        q.emplace_back(sample.question, sample.language);
        r.push_back(it->second);
    }
    if (q.size() != responses.size()) {
        throw ak::Error("responses cover ids outside the question set");
    }

    const std::vector<ak::LidProfile>* profiles = &ak::builtin_lid_profiles();
    std::vector<ak::LidProfile> custom;
    if (profile_len != ak::kDefaultProfileLen) {
        custom = ak::train_lid_profiles(ak::lid_seed_corpus(), profile_len);
        profiles = &custom;
    }

    ak::LanguageConsistencyReport report =
        ak::language_consistency(q, r, *profiles);
    json per_lang = json::object();
    for (const auto& [lang, frac] : report.per_language) {
        per_lang[lang.code()] = frac;
    }
    json doc{{"per_lang", per_lang}, {"avg", report.macro_average}};
    if (common.pretty) {
        for (const auto& [lang, frac] : report.per_language) {
            std::printf("%-6s %6.1f\n", lang.code().c_str(), frac * 100.0);
        }
        std::printf("%-6s %6.1f\n", "avg", report.macro_average * 100.0);
    } else {
        emit_json(doc);
    }
    return 0;
}

// ------------------------------------------------------------ compactness --

int cmd_compactness(const std::string& in, const CommonOptions& common) {
    std::map<ak::Lang, std::map<std::string, std::vector<double>>> vectors;
    ak::for_each_jsonl(in, [&](size_t line, const json& obj) {
        std::string id = ak::require_string(obj, "id", line);
        ak::Lang lang = ak::Lang::parse(ak::require_string(obj, "lang", line));
        if (!obj.contains("vector") || !obj["vector"].is_array()) {
            throw ak::Error(in + ":" + std::to_string(line) +
                            ": missing \"vector\" array");
        }
        vectors[lang][id] = obj["vector"].get<std::vector<double>>();
    });
    double ratio = ak::representation_compactness(vectors);
    size_t n_questions = vectors.empty() ? 0 : vectors.begin()->second.size();
    json doc{{"ratio", ratio},
             {"n_langs", vectors.size()},
             {"n_questions", n_questions}};
    if (common.pretty) {
        std::printf("compactness ratio: %.4f (%zu languages, %zu questions)\n",
                    ratio, vectors.size(), n_questions);
    } else {
        emit_json(doc);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multilingual reasoning data, decoding and metrics toolkit"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    CommonOptions common;

    // stats
    auto* stats = app.add_subcommand("stats", "dataset statistics and validation");
    std::string stats_in, stats_role = "evaluation", stats_expect;
    stats->add_option("--in", stats_in, "input JSONL file")->required();
    stats->add_option("--role", stats_role,
                      "dataset role (question_translation, general_translation, "
                      "english_instruction, evaluation)");
    stats->add_option("--expect", stats_expect,
                      "validate totals against a published dataset name");
    stats->add_flag("--pretty", common.pretty, "human-readable table");

    // build-data
    auto* build = app.add_subcommand("build-data",
                                     "construct stage-one/stage-two training records");
    std::string bd_stage, bd_questions, bd_general, bd_in, bd_scenario = "cot";
    std::string bd_mix_enx, bd_templates, bd_out;
    double bd_ratio = 1.0;
    uint64_t bd_seed = 0;
    build->add_option("--stage", bd_stage, "qalign or ralign")
        ->required()
        ->check(CLI::IsMember({"qalign", "ralign"}));
    build->add_option("--questions", bd_questions,
                      "question translation JSONL (qalign)");
    build->add_option("--general", bd_general,
                      "general-domain translation JSONL to combine (qalign)");
    build->add_option("--in", bd_in, "english instruction JSONL (ralign)");
    build->add_option("--scenario", bd_scenario, "cot, pot or no_thought (ralign)")
        ->check(CLI::IsMember({"cot", "pot", "no_thought"}));
    build->add_option("--mix-enx", bd_mix_enx,
                      "En-X translation JSONL to mix into ralign records");
    build->add_option("--ratio", bd_ratio,
                      "fraction of the En-X side to mix (default all)")
        ->check(CLI::Range(0.0, 1.0));
    build->add_option("--seed", bd_seed, "seed for mixing shuffle/subsample");
    build->add_option("--templates", bd_templates, "templates JSON file");
    build->add_option("--out", bd_out, "output records JSONL")->required();

    // downsample
    auto* down = app.add_subcommand("downsample",
                                    "per-language uniform downsampling");
    std::string ds_in, ds_role = "question_translation", ds_out;
    size_t ds_cap = 0;
    uint64_t ds_seed = 0;
    down->add_option("--in", ds_in, "input JSONL")->required();
    down->add_option("--role", ds_role, "dataset role");
    down->add_option("--cap", ds_cap, "max samples per language")
        ->required()
        ->check(CLI::PositiveNumber);
    down->add_option("--seed", ds_seed, "sampling seed");
    down->add_option("--out", ds_out, "output JSONL")->required();

    // proxy-decode
    auto* proxy = app.add_subcommand("proxy-decode",
                                     "greedy decoding steered by an expert/anti-expert pair");
    std::string px_base, px_expert, px_anti, px_in, px_prompt, px_out, px_audit;
    size_t px_max_tokens = 256;
    std::vector<std::string> px_stops;
    double px_eps = 1e-10;
    proxy->add_option("--base", px_base, "base backend spec")->required();
    proxy->add_option("--expert", px_expert, "expert backend spec")->required();
    proxy->add_option("--anti", px_anti, "anti-expert backend spec")->required();
    auto* px_in_opt = proxy->add_option("--in", px_in,
                                        "prompts JSONL {\"id\",\"prompt\"}");
    proxy->add_option("--prompt", px_prompt, "decode a single prompt")
        ->excludes(px_in_opt);
    proxy->add_option("--out", px_out, "results JSONL (default stdout)");
    proxy->add_option("--audit", px_audit, "per-step audit log JSONL");
    proxy->add_option("--max-new-tokens", px_max_tokens, "generation budget");
    proxy->add_option("--stop", px_stops, "stop string (repeatable)");
    proxy->add_option("--eps", px_eps, "anti-expert smoothing epsilon");

    // eval
    auto* eval = app.add_subcommand("eval", "zero-shot greedy evaluation run");
    std::string ev_in, ev_scenario = "cot", ev_backend, ev_base, ev_expert,
                ev_anti, ev_out_dir, ev_executor, ev_templates;
    size_t ev_max_tokens = 256, ev_workers = 1;
    std::vector<std::string> ev_stops;
    double ev_eps = 1e-10, ev_timeout = 10.0;
    eval->add_option("--in", ev_in, "evaluation dataset JSONL")->required();
    eval->add_option("--scenario", ev_scenario, "cot, pot or no_thought")
        ->check(CLI::IsMember({"cot", "pot", "no_thought"}));
    auto* ev_backend_opt =
        eval->add_option("--backend", ev_backend, "single backend spec");
    auto* ev_base_opt = eval->add_option("--base", ev_base, "proxy base spec");
    auto* ev_expert_opt =
        eval->add_option("--expert", ev_expert, "proxy expert spec");
    auto* ev_anti_opt = eval->add_option("--anti", ev_anti, "proxy anti spec");
    ev_backend_opt->excludes(ev_base_opt)->excludes(ev_expert_opt)
        ->excludes(ev_anti_opt);
    ev_base_opt->needs(ev_expert_opt)->needs(ev_anti_opt);
    ev_expert_opt->needs(ev_base_opt)->needs(ev_anti_opt);
    ev_anti_opt->needs(ev_base_opt)->needs(ev_expert_opt);
    eval->add_option("--out-dir", ev_out_dir, "run directory")->required();
    eval->add_option("--max-new-tokens", ev_max_tokens, "generation budget");
    eval->add_option("--stop", ev_stops, "stop string (repeatable)");
    eval->add_option("--eps", ev_eps, "anti-expert smoothing epsilon");
    eval->add_option("--executor-cmd", ev_executor,
                     "interpreter command for pot code execution");
    eval->add_option("--timeout", ev_timeout, "executor timeout seconds");
    eval->add_option("--workers", ev_workers, "parallel decode workers")
        ->check(CLI::PositiveNumber);
    eval->add_option("--templates", ev_templates, "templates JSON file");
    eval->add_flag("--pretty", common.pretty, "print the text report");

    // consistency
    auto* cons = app.add_subcommand("consistency",
                                    "cross-language reasoning-path consistency matrix");
    std::string cons_in;
    cons->add_option("--in", cons_in,
                     "responses JSONL {\"id\",\"lang\",\"response\"}")
        ->required();
    cons->add_flag("--pretty", common.pretty, "human-readable matrix");

    // lang-consistency
    auto* lc = app.add_subcommand("lang-consistency",
                                  "question-response language consistency");
    std::string lc_questions, lc_responses;
    size_t lc_profile_len = ak::kDefaultProfileLen;
    lc->add_option("--questions", lc_questions, "evaluation dataset JSONL")
        ->required();
    lc->add_option("--responses", lc_responses,
                   "predictions JSONL {\"id\",...,\"response\"}")
        ->required();
    lc->add_option("--profile-len", lc_profile_len,
                   "language profile length")
        ->check(CLI::PositiveNumber);
    lc->add_flag("--pretty", common.pretty, "human-readable table");

    // compactness
    auto* comp = app.add_subcommand("compactness",
                                    "cross-language representation compactness ratio");
    std::string comp_in;
    comp->add_option("--in", comp_in,
                     "vector dump JSONL {\"id\",\"lang\",\"vector\"}")
        ->required();
    comp->add_flag("--pretty", common.pretty, "human-readable summary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (stats->parsed()) {
            return cmd_stats(stats_in, stats_role, stats_expect, common);
        }
        if (build->parsed()) {
            return cmd_build_data(bd_stage, bd_questions, bd_general, bd_in,
                                  bd_scenario, bd_mix_enx, bd_ratio, bd_seed,
                                  bd_templates, bd_out);
        }
        if (down->parsed()) {
            return cmd_downsample(ds_in, ds_role, ds_cap, ds_seed, ds_out);
        }
        if (proxy->parsed()) {
            return cmd_proxy_decode(px_base, px_expert, px_anti, px_in, px_prompt,
                                    px_out, px_audit, px_max_tokens, px_stops,
                                    px_eps);
        }
        if (eval->parsed()) {
            return cmd_eval(ev_in, ev_scenario, ev_backend, ev_base, ev_expert,
                            ev_anti, ev_out_dir, ev_max_tokens, ev_stops, ev_eps,
                            ev_executor, ev_timeout, ev_workers, ev_templates,
                            common);
        }
        if (cons->parsed()) return cmd_consistency(cons_in, common);
        if (lc->parsed()) {
            return cmd_lang_consistency(lc_questions, lc_responses,
                                        lc_profile_len, common);
        }
        if (comp->parsed()) return cmd_compactness(comp_in, common);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ak::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
