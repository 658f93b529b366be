#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <map>

#include "alignkit/error.hpp"
#include "alignkit/records.hpp"
#include "alignkit/subprocess.hpp"

using namespace alignkit;

namespace {

Dataset make_pair_dataset(DatasetRole role, const std::string& name,
                          const std::vector<std::string>& langs, size_t per_lang,
                          const std::string& id_prefix = "") {
    Dataset ds(role, name);
    for (const auto& lang : langs) {
        for (size_t i = 0; i < per_lang; ++i) {
            QuestionPair p;
            p.id = id_prefix + lang + "-" + std::to_string(i);
            p.source_lang = Lang::parse(lang);
            p.source_text = "frage " + lang + " " + std::to_string(i);
            p.target_text = "question " + std::to_string(i);
            ds.add_pair(p);
        }
    }
    return ds;
}

const std::vector<std::string> kNineLangs = {"bn", "th", "sw", "ja", "zh",
                                             "de", "fr", "ru", "es"};

}  // namespace

TEST_SUITE("records") {

TEST_CASE("templates pin version 1 and render without residue") {
    TemplateSet t = TemplateSet::builtin();
    CHECK(t.version() == "1");
    std::string prompt =
        t.render_prompt(Scenario::translation, {{"question", "Frage"},
                                                {"source_language", "German"},
                                                {"target_language", "English"}});
    CHECK(prompt.find('{') == std::string::npos);
    CHECK(prompt.find("Frage") != std::string::npos);
    CHECK(prompt.find("German") != std::string::npos);
    CHECK_THROWS_AS(t.render_prompt(Scenario::translation, {}), Error);
}

TEST_CASE("qalign: one record per non-English pair, targets English") {
    TemplateSet t = TemplateSet::builtin();
    Dataset ds = make_pair_dataset(DatasetRole::question_translation, "q",
                                   kNineLangs, 4);
    auto records = build_qalign_records(ds, t);
    CHECK(records.size() == 9 * 4);
    for (const auto& r : records) {
        CHECK(r.stage == Stage::qalign);
        CHECK(r.scenario == Scenario::translation);
        CHECK(r.target.rfind("question ", 0) == 0);
        CHECK_FALSE(r.language.is_english());
    }
}

TEST_CASE("qalign: en->en pairs are dropped, others kept") {
    TemplateSet t = TemplateSet::builtin();
    Dataset ds = make_pair_dataset(DatasetRole::question_translation, "q",
                                   {"de", "en", "bn"}, 2);
    auto records = build_qalign_records(ds, t);
    CHECK(records.size() == 4);
    for (const auto& r : records) CHECK_FALSE(r.language.is_english());
}

TEST_CASE("qalign rejects non-translation datasets") {
    TemplateSet t = TemplateSet::builtin();
    Dataset ds(DatasetRole::english_instruction, "wrong");
    CHECK_THROWS_WITH_AS(build_qalign_records(ds, t),
                         doctest::Contains("role"), Error);
}

TEST_CASE("qalign rejects direction-violating pairs") {
    TemplateSet t = TemplateSet::builtin();
    Dataset ds(DatasetRole::general_translation, "g");
    QuestionPair p;
    p.id = "bad";
    p.source_lang = Lang::parse("de");
    p.source_text = "frage";
    p.target_text = "pregunta";
    p.target_lang = Lang::parse("es");  // not English
    ds.add_pair(p);
    CHECK_THROWS_WITH_AS(build_qalign_records(ds, t),
                         doctest::Contains("direction"), Error);
}

TEST_CASE("combine: counts add, question records first") {
    TemplateSet t = TemplateSet::builtin();
    Dataset q = make_pair_dataset(DatasetRole::question_translation, "q",
                                  {"de", "bn", "en"}, 3);
    Dataset g = make_pair_dataset(DatasetRole::general_translation, "g",
                                  {"ru", "fr"}, 5, "g");
    auto combined = combine_question_alignment(q, g, t);
    CHECK(combined.size() ==
          build_qalign_records(q, t).size() + build_qalign_records(g, t).size());
    CHECK(combined.size() == 6 + 10);
    CHECK(combined.front().source_id.rfind("de-", 0) == 0);
    CHECK(combined.back().source_id.rfind("gfr-", 0) == 0);
}

TEST_CASE("combine with an empty-ish general side equals plain qalign") {
    TemplateSet t = TemplateSet::builtin();
    Dataset q = make_pair_dataset(DatasetRole::question_translation, "q",
                                  {"de", "bn"}, 3);
    // general with only en->en pairs contributes nothing
    Dataset g = make_pair_dataset(DatasetRole::general_translation, "g",
                                  {"en"}, 2);
    auto combined = combine_question_alignment(q, g, t);
    auto plain = build_qalign_records(q, t);
    CHECK(combined == plain);
}

TEST_CASE("combine: one shared id yields two disambiguated records") {
    TemplateSet t = TemplateSet::builtin();
    Dataset q(DatasetRole::question_translation, "qset");
    Dataset g(DatasetRole::general_translation, "gset");
    QuestionPair p;
    p.id = "shared";
    p.source_lang = Lang::parse("de");
    p.source_text = "frage";
    p.target_text = "question";
    q.add_pair(p);
    p.source_text = "andere frage";
    g.add_pair(p);

    auto combined = combine_question_alignment(q, g, t);
    REQUIRE(combined.size() == 2);
    CHECK(combined[0].source_id == "qset:shared");
    CHECK(combined[1].source_id == "gset:shared");
}

TEST_CASE("ralign cot: target is the response verbatim") {
    TemplateSet t = TemplateSet::builtin();
    Dataset ds(DatasetRole::english_instruction, "meta");
    SupervisedSample s;
    s.id = "s1";
    s.language = Lang::english();
    s.scenario = Scenario::cot;
    s.question = "How many female Scottish unicorns are there?";
    s.response = "There are 27/3 = 9 in the Highlands.\nThe answer is: 6";
    ds.add_sample(s);

    auto records = build_ralign_records(ds, Scenario::cot, t);
    REQUIRE(records.size() == 1);
    CHECK(records[0].stage == Stage::ralign);
    CHECK(records[0].target == *s.response);
    // Target ends exactly like the response.
    CHECK(records[0].target.substr(records[0].target.size() - 16) ==
          "The answer is: 6");
}

TEST_CASE("ralign pot: tagged code with spliced gold output") {
    TemplateSet t = TemplateSet::builtin();
    Dataset ds(DatasetRole::english_instruction, "openmath");
    SupervisedSample s;
    s.id = "p1";
    s.language = Lang::english();
    s.scenario = Scenario::pot;
    s.question = "Compute.";
    s.response = "<llm-code>\na = 27/3\nb = a * 2/3\n</llm-code>";
    s.gold = "6";
    ds.add_sample(s);

    SUBCASE("tagged response gets the output block") {
        auto records = build_ralign_records(ds, Scenario::pot, t);
        REQUIRE(records.size() == 1);
        const std::string& target = records[0].target;
        auto code_at = target.find("<llm-code>");
        auto out_at = target.find("<llm-code-output>6</llm-code-output>");
        REQUIRE(code_at != std::string::npos);
        REQUIRE(out_at != std::string::npos);
        CHECK(code_at < out_at);
    }
    SUBCASE("untagged response is wrapped as code") {
        Dataset raw(DatasetRole::english_instruction, "raw");
        SupervisedSample u = s;
        u.response = "a = 27/3\nb = a * 2/3";
        raw.add_sample(u);
        auto records = build_ralign_records(raw, Scenario::pot, t);
        REQUIRE(records.size() == 1);
        CHECK(records[0].target.find("<llm-code>\na = 27/3") !=
              std::string::npos);
        CHECK(records[0].target.find("<llm-code-output>6</llm-code-output>") !=
              std::string::npos);
    }
    SUBCASE("output-tagged response passes through verbatim") {
        Dataset done(DatasetRole::english_instruction, "done");
        SupervisedSample v = s;
        v.response =
            "<llm-code>\nx = 2\n</llm-code><llm-code-output>2</llm-code-output>";
        done.add_sample(v);
        auto records = build_ralign_records(done, Scenario::pot, t);
        CHECK(records[0].target == *v.response);
    }
}

TEST_CASE("ralign no_thought: lettered options, bracketed label target") {
    TemplateSet t = TemplateSet::builtin();
    Dataset ds(DatasetRole::english_instruction, "csqa");
    SupervisedSample s;
    s.id = "c1";
    s.language = Lang::english();
    s.scenario = Scenario::no_thought;
    s.question = "Where do unicorns live?";
    s.options = {"highlands", "stables", "cities", "forests", "nowhere"};
    s.response = "A";
    s.gold = "A";
    ds.add_sample(s);

    auto records = build_ralign_records(ds, Scenario::no_thought, t);
    REQUIRE(records.size() == 1);
    CHECK(records[0].target == "(A)");
    CHECK(records[0].prompt.find("(A) highlands (B) stables (C) cities "
                                 "(D) forests (E) nowhere") !=
          std::string::npos);
}

TEST_CASE("ralign errors: missing response, missing options, scenario") {
    TemplateSet t = TemplateSet::builtin();

    SUBCASE("missing response") {
        Dataset ds(DatasetRole::english_instruction, "x");
        SupervisedSample s;
        s.id = "nores";
        s.language = Lang::english();
        s.scenario = Scenario::cot;
        s.question = "q";
        ds.add_sample(s);
        CHECK_THROWS_WITH_AS(build_ralign_records(ds, Scenario::cot, t),
                             doctest::Contains("missing response"), Error);
    }
    SUBCASE("label answer without options") {
        Dataset ds(DatasetRole::english_instruction, "x");
        SupervisedSample s;
        s.id = "noopt";
        s.language = Lang::english();
        s.scenario = Scenario::no_thought;
        s.question = "q";
        s.response = "B";
        ds.add_sample(s);
        CHECK_THROWS_WITH_AS(build_ralign_records(ds, Scenario::no_thought, t),
                             doctest::Contains("options"), Error);
    }
    SUBCASE("nli-style label answers need no options") {
        Dataset ds(DatasetRole::english_instruction, "x");
        SupervisedSample s;
        s.id = "nli";
        s.language = Lang::english();
        s.scenario = Scenario::no_thought;
        s.question = "premise/hypothesis";
        s.response = "entailment";
        ds.add_sample(s);
        auto records = build_ralign_records(ds, Scenario::no_thought, t);
        CHECK(records[0].target == "entailment");
    }
    SUBCASE("scenario mismatch") {
        Dataset ds(DatasetRole::english_instruction, "x");
        SupervisedSample s;
        s.id = "mix";
        s.language = Lang::english();
        s.scenario = Scenario::pot;
        s.question = "q";
        s.response = "r";
        ds.add_sample(s);
        CHECK_THROWS_WITH_AS(build_ralign_records(ds, Scenario::cot, t),
                             doctest::Contains("scenario"), Error);
    }
}

TEST_CASE("mix_en_x: counts, direction error, determinism") {
    TemplateSet t = TemplateSet::builtin();
    Dataset ds(DatasetRole::english_instruction, "meta");
    for (int i = 0; i < 100; ++i) {
        SupervisedSample s;
        s.id = "s" + std::to_string(i);
        s.language = Lang::english();
        s.scenario = Scenario::cot;
        s.question = "q" + std::to_string(i);
        s.response = "r" + std::to_string(i);
        ds.add_sample(s);
    }
    auto ralign = build_ralign_records(ds, Scenario::cot, t);
    Dataset enx = make_pair_dataset(DatasetRole::general_translation, "wiki",
                                    {"de", "fr"}, 25);

    auto mixed = mix_en_x(ralign, enx, 42, t);
    CHECK(mixed.size() == 150);
    size_t translation_count = std::count_if(
        mixed.begin(), mixed.end(), [](const InstructionRecord& r) {
            return r.scenario == Scenario::translation;
        });
    CHECK(translation_count == 50);
    for (const auto& r : mixed) CHECK(r.stage == Stage::ralign);

    SUBCASE("translation records flip the direction") {
        auto it = std::find_if(mixed.begin(), mixed.end(),
                               [](const InstructionRecord& r) {
                                   return r.scenario == Scenario::translation;
                               });
        REQUIRE(it != mixed.end());
        CHECK(it->prompt.find("from English to") != std::string::npos);
        CHECK(it->target.rfind("frage ", 0) == 0);
    }
    SUBCASE("same seed twice gives identical order") {
        CHECK(mix_en_x(ralign, enx, 42, t) == mixed);
    }
    SUBCASE("empty-enx mix is a seeded permutation of ralign") {
        Dataset none(DatasetRole::general_translation, "none");
        QuestionPair p;
        p.id = "only";
        p.source_lang = Lang::parse("de");
        p.source_text = "frage";
        p.target_text = "question";
        none.add_pair(p);
        auto shuffled = mix_en_x(ralign, none, 7, t, 1.0);
        CHECK(shuffled.size() == ralign.size() + 1);
    }
    SUBCASE("ratio subsamples the translation side") {
        auto half = mix_en_x(ralign, enx, 42, t, 0.5);
        CHECK(half.size() == 125);
    }
    SUBCASE("en source pair is a direction error") {
        Dataset bad(DatasetRole::general_translation, "bad");
        QuestionPair p;
        p.id = "en0";
        p.source_lang = Lang::english();
        p.source_text = "question";
        p.target_text = "question";
        bad.add_pair(p);
        CHECK_THROWS_WITH_AS(mix_en_x(ralign, bad, 1, t),
                             doctest::Contains("direction"), Error);
    }
}

TEST_CASE("emit_jsonl round-trips and rejects empty input") {
    TempDir tmp("records-");
    TemplateSet t = TemplateSet::builtin();
    Dataset ds = make_pair_dataset(DatasetRole::question_translation, "q",
                                   {"de", "ja"}, 3);
    auto records = build_qalign_records(ds, t);

    auto path = tmp.path() / "records.jsonl";
    emit_jsonl(records, path);
    CHECK(load_records(path) == records);

    // Line count equals the record count, embedded newlines escaped.
    InstructionRecord with_newline = records[0];
    with_newline.target = "line one\nline two";
    emit_jsonl({with_newline, records[1]}, path);
    std::ifstream in(path);
    size_t lines = 0;
    std::string line;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 2);
    auto reloaded = load_records(path);
    CHECK(reloaded[0].target == "line one\nline two");

    CHECK_THROWS_AS(emit_jsonl({}, tmp.path() / "empty.jsonl"), Error);
    CHECK_THROWS_AS(emit_jsonl(records, tmp.path() / "no-dir" / "x.jsonl"),
                    Error);
}

TEST_CASE("emit_jsonl: line count recount oracle at volume") {
    TempDir tmp("records-");
    TemplateSet t = TemplateSet::builtin();
    Dataset ds = make_pair_dataset(DatasetRole::question_translation, "q",
                                   kNineLangs, 2000);
    auto records = build_qalign_records(ds, t);
    REQUIRE(records.size() == 18000);

    auto path = tmp.path() / "bulk.jsonl";
    emit_jsonl(records, path);
    std::ifstream in(path, std::ios::binary);
    size_t newlines = 0;
    char c;
    while (in.get(c)) newlines += c == '\n';
    CHECK(newlines == 18000);
}

TEST_CASE("template inversion recovers the question on every record") {
    TemplateSet t = TemplateSet::builtin();
    Dataset ds = make_pair_dataset(DatasetRole::question_translation, "q",
                                   {"de", "zh", "bn"}, 5);
    for (const auto& pair : ds.pairs()) {
        Bindings other{{"source_language", pair.source_lang.name()},
                       {"target_language", "English"}};
        std::string prompt = t.render_prompt(
            Scenario::translation,
            {{"question", pair.source_text},
             {"source_language", pair.source_lang.name()},
             {"target_language", "English"}});
        CHECK(t.invert_question(Scenario::translation, prompt, other) ==
              pair.source_text);
    }
}

TEST_CASE("stage separation: builders never mix stages") {
    TemplateSet t = TemplateSet::builtin();
    Dataset q = make_pair_dataset(DatasetRole::question_translation, "q",
                                  {"de"}, 3);
    for (const auto& r : build_qalign_records(q, t)) {
        CHECK(r.stage == Stage::qalign);
    }
    Dataset ds(DatasetRole::english_instruction, "e");
    SupervisedSample s;
    s.id = "a";
    s.language = Lang::english();
    s.scenario = Scenario::cot;
    s.question = "q";
    s.response = "r";
    ds.add_sample(s);
    for (const auto& r : build_ralign_records(ds, Scenario::cot, t)) {
        CHECK(r.stage == Stage::ralign);
    }
}

TEST_CASE("templates file loads and matches the builtin wording") {
    TemplateSet from_file = TemplateSet::load(TEMPLATES_JSON_PATH);
    TemplateSet builtin = TemplateSet::builtin();
    CHECK(from_file.version() == builtin.version());
    for (Scenario s : {Scenario::cot, Scenario::pot, Scenario::no_thought,
                       Scenario::translation}) {
        CHECK(from_file.for_scenario(s).prompt == builtin.for_scenario(s).prompt);
        CHECK(from_file.for_scenario(s).target == builtin.for_scenario(s).target);
    }
}

}  // TEST_SUITE
