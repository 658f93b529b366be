#include <doctest.h>

#include <cmath>

#include "alignkit/error.hpp"
#include "alignkit/metrics.hpp"
#include "alignkit/rng.hpp"
#include "support/oracles.hpp"

using namespace alignkit;

namespace {

StepAnswerList steps(std::vector<std::string> values) {
    StepAnswerList out;
    out.values = std::move(values);
    return out;
}

ExtractedAnswer number(const std::string& value) {
    ExtractedAnswer a;
    a.kind = AnswerKind::number;
    a.value = value;
    return a;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("jaccard: worked unicorn lists give exactly 1.0") {
    double j = jaccard_consistency(steps({"9", "6", "6", "6"}),
                                   steps({"9", "6", "6", "6"}));
    CHECK(j == 1.0);
}

TEST_CASE("jaccard: disjoint, thirds, empty conventions") {
    CHECK(jaccard_consistency(steps({"1", "2"}), steps({"3", "4"})) == 0.0);
    CHECK(jaccard_consistency(steps({"9", "6"}), steps({"6", "3"})) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(jaccard_consistency(steps({}), steps({})) == 1.0);
    CHECK(jaccard_consistency(steps({}), steps({"1"})) == 0.0);
    CHECK(jaccard_consistency(steps({"1"}), steps({})) == 0.0);
}

TEST_CASE("jaccard: symmetry, duplicate and order invariance, identity") {
    Rng rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        auto draw = [&]() {
            std::vector<std::string> values;
            size_t n = rng.below(6);
            for (size_t i = 0; i < n; ++i) {
                values.push_back(std::to_string(rng.below(8)));
            }
            return values;
        };
        auto a = draw(), b = draw();
        double j1 = jaccard_consistency(steps(a), steps(b));
        double j2 = jaccard_consistency(steps(b), steps(a));
        CHECK(j1 == j2);
        CHECK(j1 == oracle::jaccard(a, b));  // bit-exact vs the oracle

        // Duplicates and order cannot matter.
        auto doubled = a;
        doubled.insert(doubled.end(), a.begin(), a.end());
        std::reverse(doubled.begin(), doubled.end());
        CHECK(jaccard_consistency(steps(doubled), steps(b)) == j1);
    }
}

TEST_CASE("jaccard: numeric normalization inside the metric") {
    CHECK(jaccard_consistency(steps({"6.0"}), steps({"6"})) == 1.0);
    CHECK(jaccard_consistency(steps({"6.00", "9"}), steps({"9.0", "6"})) == 1.0);
}

TEST_CASE("consistency matrix: identical lists give all-ones") {
    std::map<Lang, std::map<std::string, StepAnswerList>> responses;
    for (const char* code : {"de", "fr"}) {
        Lang lang = Lang::parse(code);
        responses[lang]["q1"] = steps({"9", "6"});
        responses[lang]["q2"] = steps({"3"});
        responses[lang]["q3"] = steps({});
    }
    auto m = consistency_matrix(responses);
    for (const auto& row : m.cells) {
        for (double cell : row) CHECK(cell == 1.0);
    }
}

TEST_CASE("consistency matrix: mean over questions") {
    std::map<Lang, std::map<std::string, StepAnswerList>> responses;
    Lang de = Lang::parse("de"), fr = Lang::parse("fr");
    responses[de]["q1"] = steps({"1"});
    responses[fr]["q1"] = steps({"1"});  // J = 1
    responses[de]["q2"] = steps({"2"});
    responses[fr]["q2"] = steps({"3"});  // J = 0
    auto m = consistency_matrix(responses);
    CHECK(m.cell(de, fr) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(m.cell(de, de) == 1.0);
}

TEST_CASE("consistency matrix equals the brute-force double loop") {
    Rng rng(31);
    std::vector<Lang> langs = {Lang::parse("bn"), Lang::parse("de"),
                               Lang::parse("ja"), Lang::parse("ru"),
                               Lang::parse("en")};
    std::map<Lang, std::map<std::string, StepAnswerList>> responses;
    std::vector<std::string> ids;
    for (int q = 0; q < 20; ++q) ids.push_back("q" + std::to_string(q));
    for (Lang lang : langs) {
        for (const auto& id : ids) {
            std::vector<std::string> values;
            size_t n = rng.below(5);
            for (size_t i = 0; i < n; ++i) {
                values.push_back(std::to_string(rng.below(9)));
            }
            responses[lang][id] = steps(values);
        }
    }
    auto m = consistency_matrix(responses);

    for (size_t i = 0; i < m.languages.size(); ++i) {
        for (size_t j = 0; j < m.languages.size(); ++j) {
            double sum = 0.0;
            for (const auto& id : ids) {
                sum += oracle::jaccard(
                    responses.at(m.languages[i]).at(id).values,
                    responses.at(m.languages[j]).at(id).values);
            }
            CHECK(m.cells[i][j] == doctest::Approx(sum / ids.size()).epsilon(1e-12));
            CHECK(m.cells[i][j] == m.cells[j][i]);  // symmetry, exact
        }
    }
}

TEST_CASE("consistency matrix rejects misaligned ids") {
    std::map<Lang, std::map<std::string, StepAnswerList>> responses;
    responses[Lang::parse("de")]["q1"] = steps({"1"});
    responses[Lang::parse("fr")]["q2"] = steps({"1"});
    CHECK_THROWS_AS(consistency_matrix(responses), Error);
}

TEST_CASE("answer accuracy") {
    CHECK(answer_accuracy({number("6")}, {"6"}) == 1.0);
    CHECK(answer_accuracy({ExtractedAnswer::none()}, {"6"}) == 0.0);
    CHECK(answer_accuracy({number("6.0"), number("7")}, {"6", "8"}) == 0.5);
    CHECK_THROWS_AS(answer_accuracy({number("6")}, {"6", "7"}), Error);

    ExtractedAnswer choice;
    choice.kind = AnswerKind::choice_label;
    choice.value = "B";
    CHECK(answer_accuracy({choice}, {"B"}) == 1.0);
    CHECK(answer_accuracy({choice}, {"(B)"}) == 1.0);
    CHECK(answer_accuracy({choice}, {"C"}) == 0.0);

    ExtractedAnswer nli;
    nli.kind = AnswerKind::nli_label;
    nli.value = "neutral";
    CHECK(answer_accuracy({nli}, {"Neutral"}) == 1.0);
    CHECK(answer_accuracy({nli}, {"entailment"}) == 0.0);
}

TEST_CASE("answer accuracy is permutation-equivariant") {
    Rng rng(17);
    std::vector<ExtractedAnswer> preds;
    std::vector<std::string> golds;
    for (int i = 0; i < 40; ++i) {
        preds.push_back(number(std::to_string(rng.below(4))));
        golds.push_back(std::to_string(rng.below(4)));
    }
    double before = answer_accuracy(preds, golds);

    std::vector<size_t> perm(preds.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    rng.shuffle(perm);
    std::vector<ExtractedAnswer> preds2(preds.size());
    std::vector<std::string> golds2(golds.size());
    for (size_t i = 0; i < perm.size(); ++i) {
        preds2[i] = preds[perm[i]];
        golds2[i] = golds[perm[i]];
    }
    CHECK(answer_accuracy(preds2, golds2) == before);
}

TEST_CASE("language consistency counts per language") {
    const auto& profiles = builtin_lid_profiles();
    const auto& corpus = lid_seed_corpus();
    Lang de = Lang::parse("de"), en = Lang::parse("en");

    std::vector<std::pair<std::string, Lang>> questions;
    std::vector<std::string> responses;
    // 10 German questions: 5 answered in German, 5 in English.
    for (int i = 0; i < 10; ++i) {
        questions.emplace_back("Frage " + std::to_string(i), de);
        responses.push_back(i < 5 ? corpus.at(de)[i] : corpus.at(en)[i]);
    }
    // 4 English questions, all answered in English.
    for (int i = 0; i < 4; ++i) {
        questions.emplace_back("question", en);
        responses.push_back(corpus.at(en)[20 + i]);
    }

    auto report = language_consistency(questions, responses, profiles);
    CHECK(report.per_language.at(de) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(report.per_language.at(en) == 1.0);
    CHECK(report.macro_average == doctest::Approx(0.75).epsilon(1e-12));

    // Independent recount.
    size_t de_hits = 0;
    for (size_t i = 0; i < questions.size(); ++i) {
        if (questions[i].second == de &&
            identify_language(responses[i], profiles) == de) {
            ++de_hits;
        }
    }
    CHECK(report.per_language.at(de) ==
          doctest::Approx(de_hits / 10.0).epsilon(1e-12));

    CHECK_THROWS_AS(language_consistency(questions, {}, profiles), Error);
}

TEST_CASE("compactness: identical vectors per question give exactly 0") {
    std::map<Lang, std::map<std::string, std::vector<double>>> vectors;
    Rng rng(3);
    for (int q = 0; q < 10; ++q) {
        std::vector<double> v(8);
        for (double& x : v) x = rng.gaussian();
        vectors[Lang::parse("de")]["q" + std::to_string(q)] = v;
        vectors[Lang::parse("fr")]["q" + std::to_string(q)] = v;
    }
    CHECK(representation_compactness(vectors) == 0.0);
}

TEST_CASE("compactness: iid vectors give a ratio near 1") {
    std::map<Lang, std::map<std::string, std::vector<double>>> vectors;
    Rng rng(12345);
    for (const char* code : {"de", "fr"}) {
        for (int q = 0; q < 500; ++q) {
            std::vector<double> v(8);
            for (double& x : v) x = rng.gaussian();
            vectors[Lang::parse(code)]["q" + std::to_string(q)] = v;
        }
    }
    double ratio = representation_compactness(vectors);
    CAPTURE(ratio);
    CHECK(std::abs(ratio - 1.0) < 0.1);
}

TEST_CASE("compactness: four hand-placed points") {
    // Two languages, two questions, d=1:
    //   q1: de=0, fr=1   q2: de=4, fr=5
    // numerator  = mean(1, 1) = 1
    // denominator = mean over all 6 pairs of |a-b|:
    //   (0,1)=1 (0,4)=4 (0,5)=5 (1,4)=3 (1,5)=4 (4,5)=1  -> 18/6 = 3
    std::map<Lang, std::map<std::string, std::vector<double>>> vectors;
    vectors[Lang::parse("de")]["q1"] = {0.0};
    vectors[Lang::parse("fr")]["q1"] = {1.0};
    vectors[Lang::parse("de")]["q2"] = {4.0};
    vectors[Lang::parse("fr")]["q2"] = {5.0};
    CHECK(representation_compactness(vectors) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("compactness rejects ragged input") {
    std::map<Lang, std::map<std::string, std::vector<double>>> vectors;
    vectors[Lang::parse("de")]["q1"] = {0.0, 1.0};
    vectors[Lang::parse("fr")]["q1"] = {1.0};
    CHECK_THROWS_WITH_AS(representation_compactness(vectors),
                         doctest::Contains("dimension"), Error);

    vectors[Lang::parse("fr")]["q1"] = {1.0, 2.0};
    vectors[Lang::parse("fr")]["q2"] = {1.0, 2.0};
    CHECK_THROWS_AS(representation_compactness(vectors), Error);
}

}  // TEST_SUITE
