#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "alignkit/backend.hpp"
#include "alignkit/dataset.hpp"
#include "alignkit/extract.hpp"
#include "alignkit/lid.hpp"
#include "alignkit/metrics.hpp"
#include "alignkit/proxy.hpp"
#include "alignkit/rng.hpp"

using namespace alignkit;

namespace {

LogProbVector random_logprobs(Rng& rng, size_t v) {
    std::vector<double> probs(v);
    double sum = 0.0;
    for (double& p : probs) {
        p = 0.01 + rng.unit();
        sum += p;
    }
    for (double& p : probs) p /= sum;
    return LogProbVector::from_probs(probs);
}

std::string synthetic_cot(size_t sentences) {
    std::string text;
    for (size_t i = 0; i < sentences; ++i) {
        text += "Step " + std::to_string(i) + " multiplies by 3 and gives " +
                std::to_string(i * 3) + ".\n";
    }
    text += "The answer is: " + std::to_string(sentences * 3);
    return text;
}

}  // namespace

static void BM_proxy_logprobs(benchmark::State& state) {
    const size_t v = static_cast<size_t>(state.range(0));
    Rng rng(1);
    auto base = random_logprobs(rng, v);
    auto expert = random_logprobs(rng, v);
    auto anti = random_logprobs(rng, v);
    for (auto _ : state) {
        benchmark::DoNotOptimize(proxy_logprobs(base, expert, anti, 1e-10));
    }
    state.SetItemsProcessed(state.iterations() * v);
}
BENCHMARK(BM_proxy_logprobs)->Arg(1024)->Arg(32000);

static void BM_extract_step_answers(benchmark::State& state) {
    std::string text = synthetic_cot(static_cast<size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(extract_step_answers(text));
    }
    state.SetBytesProcessed(state.iterations() * text.size());
}
BENCHMARK(BM_extract_step_answers)->Arg(8)->Arg(128);

static void BM_extract_last_number(benchmark::State& state) {
    std::string text = synthetic_cot(64);
    for (auto _ : state) {
        benchmark::DoNotOptimize(extract_last_number(text));
    }
    state.SetBytesProcessed(state.iterations() * text.size());
}
BENCHMARK(BM_extract_last_number);

static void BM_consistency_matrix(benchmark::State& state) {
    Rng rng(2);
    std::map<Lang, std::map<std::string, StepAnswerList>> responses;
    const char* codes[] = {"bn", "de", "ja", "ru", "en"};
    for (const char* code : codes) {
        for (int q = 0; q < static_cast<int>(state.range(0)); ++q) {
            StepAnswerList steps;
            size_t n = 1 + rng.below(5);
            for (size_t i = 0; i < n; ++i) {
                steps.values.push_back(std::to_string(rng.below(50)));
            }
            responses[Lang::parse(code)]["q" + std::to_string(q)] = steps;
        }
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(consistency_matrix(responses));
    }
}
BENCHMARK(BM_consistency_matrix)->Arg(100);

static void BM_identify_language(benchmark::State& state) {
    const auto& profiles = builtin_lid_profiles();
    std::string text = "Wie viele Einhörner gibt es noch auf der Welt?";
    for (auto _ : state) {
        benchmark::DoNotOptimize(identify_language(text, profiles));
    }
}
BENCHMARK(BM_identify_language);

static void BM_train_lid_profiles(benchmark::State& state) {
    const auto& corpus = lid_seed_corpus();
    for (auto _ : state) {
        benchmark::DoNotOptimize(train_lid_profiles(corpus, kDefaultProfileLen));
    }
}
BENCHMARK(BM_train_lid_profiles);

static void BM_downsample(benchmark::State& state) {
    Dataset ds(DatasetRole::question_translation, "bench");
    const char* codes[] = {"bn", "th", "sw", "ja", "zh", "de", "fr", "ru", "es"};
    for (const char* code : codes) {
        for (int i = 0; i < 8000; ++i) {
            QuestionPair p;
            p.id = std::string(code) + "-" + std::to_string(i);
            p.source_lang = Lang::parse(code);
            p.source_text = "frage " + std::to_string(i);
            p.target_text = "question " + std::to_string(i);
            ds.add_pair(std::move(p));
        }
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(downsample_per_language(ds, 1000, 7));
    }
}
BENCHMARK(BM_downsample);

BENCHMARK_MAIN();
