#pragma once

// Hand-built golden corpus for the answer extractors. Expected values were
// worked out by hand against the pinned grammar; the unit tests and the
// acceptance suite both run every case.

#include <string>
#include <vector>

namespace golden {

struct NumberCase {
    const char* text;
    const char* expected;  // "" means no number
};

inline const std::vector<NumberCase>& number_cases() {
    static const std::vector<NumberCase> cases = {
        {"The answer is: 6", "6"},
        {"no digits here", ""},
        {"costs 1,234.50 then 7", "7"},
        {"27/3 = 9", "9"},
        {"-5 degrees outside", "-5"},
        {"pi is about 3.14159", "3.14159"},
        {"", ""},
        {"version 2.0.1", "1"},
        {"He bought 12 apples and 13 oranges.", "13"},
        {"answer: 6.", "6"},
        {"1,000,000 dollars", "1000000"},
        {"1,23 is not grouped", "23"},
        {"+42", "42"},
        {"3-2", "2"},
        {"x = -0.5", "-0.5"},
        {"0.50", "0.5"},
        {"007", "7"},
        {"the year 2024 was long", "2024"},
        {"twelve", ""},
        {"6,000", "6000"},
        {"1,2345", "2345"},
        {"it is -0", "0"},
        {"2.5% then 3%", "3"},
        {"answer is 1,234", "1234"},
        {"price was 5.60 or 7.80", "7.8"},
        {"これは 42 です", "42"},
        {"10.", "10"},
        {"9 * 2/3 = 6", "6"},
        {"100 - 25 = 75", "75"},
        {".5 leading dot", "5"},
        {"55.5.5", "5"},
        {"-", ""},
        {"7,77", "77"},
        {"The total is 6.00 exactly", "6"},
    };
    return cases;
}

struct StepCase {
    const char* text;
    std::vector<const char*> expected;
};

// Both worked examples from the reasoning-path illustration are included
// verbatim; both must yield [9, 6, 6, 6].
inline const char* kUnicornEnglish =
    "One third of the unicorns are in the Scottish Highlands, so there are "
    "27/3 = 9 unicorns in the Highlands.\n"
    "Two thirds of the unicorns in the Highlands are female, so there are "
    "9 * 2/3 = 6 female unicorns in the Highlands.\n"
    "Therefore, there are 6 female Scottish unicorns.\n"
    "The answer is: 6";

inline const char* kUnicornChineseQuestion =
    "If there are 27 remaining unicorns in the world, and one-third of them "
    "are in the Scottish Highlands, then there are 27/3 = 9 unicorns in the "
    "Scottish Highlands.\n"
    "If two-thirds of the unicorns in the Scottish Highlands are female, "
    "then there are 9 * 2/3 = 6 female unicorns in the Scottish Highlands.\n"
    "Therefore, there are 6 female unicorns in the Scottish Highlands. \n"
    "The answer is: 6";

inline const std::vector<StepCase>& step_cases() {
    static const std::vector<StepCase> cases = {
        {kUnicornEnglish, {"9", "6", "6", "6"}},
        {kUnicornChineseQuestion, {"9", "6", "6", "6"}},
        {"one sentence without digits", {}},
        {"A has 3. B has 4. Total 7.", {"3", "4", "7"}},
        {"First 2 then 3\nnext line has 5", {"3", "5"}},
        {"I bought 12 eggs, broke 2, so 10 left. The answer is 10.",
         {"10", "10"}},
        {"3.5 kg! 2 kg? yes.", {"3.5", "2"}},
        {"价格是100。还剩50。", {"100", "50"}},
        {"Mixed 1.5 at the end", {"1.5"}},
        {"The answer is: 6", {"6"}},
        {"", {}},
        {"5", {"5"}},
        {"a 1, b 2, c 3. next 4.", {"3", "4"}},
        {"half is 0.50. double is 2.", {"0.5", "2"}},
        {"он купил 7 яблок. осталось 2.", {"7", "2"}},
        {"7 then some words\n\n8 after a blank line", {"7", "8"}},
        {"No numbers. Then 9.", {"9"}},
        {"9. start of line", {"9"}},
        {"2+2 = 4. 10-5 = 5.", {"4", "5"}},
        {"total: 1,500. tax: 150.", {"1500", "150"}},
        {"Der Zug kommt um 9. Danach um 12.", {"9", "12"}},
        {"一共有12个。用了5个。还剩7个。", {"12", "5", "7"}},
        {"What is 6? It is 6!", {"6", "6"}},
        {"abc\ndef\n5", {"5"}},
        {"The ratio 27/3 simplifies.", {"3"}},
        {"x = 1. y = 2. z = x + y = 3.", {"1", "2", "3"}},
        {"First step gives 9\nsecond gives 6\nanswer 6", {"9", "6", "6"}},
        {"Ends mid sentence 42", {"42"}},
        {"One. Two. Three.", {}},
        {"Take 8 eggs; boil 3 of them. Eat 2.", {"3", "2"}},
        {"50% of 10 is 5. half of that: 2.5!", {"5", "2.5"}},
        {"答えは 6 です。次は 7 です。", {"6", "7"}},
    };
    return cases;
}

struct LabelCase {
    const char* text;
    const char* expected;  // "" means none
};

inline const std::vector<LabelCase>& choice_cases() {
    static const std::vector<LabelCase> cases = {
        {"so the answer is (B).", "B"},
        {"(A) first guess ... final: (C)", "C"},
        {"(F)", ""},
        {"(a)", "A"},
        {"answer (E)", "E"},
        {"(AB)", ""},
        {"plain A without brackets", ""},
        {"The answer is (D) because it fits.", "D"},
        {"(A) (B) (C)", "C"},
        {"()", ""},
        {"(1)", ""},
        {"nothing here", ""},
        {"", ""},
        {"(e) lowercase late", "E"},
        {"(A)text(B)text", "B"},
        {"(Z) then (C)", "C"},
        {"((A))", "A"},
        {"(A", ""},
        {"A)", ""},
        {"( A )", ""},
        {"answer: (b)", "B"},
        {"first (C), then reconsidered to (A)", "A"},
        {"(D)(D)(D)", "D"},
        {"multi\nline\n(E)\nend", "E"},
        {"【A】 fullwidth brackets", ""},
        {"(C) is wrong, (F) invalid, keep (C)", "C"},
        {"pick (A) or (B) or (C) or (D) or (E)", "E"},
        {"(d). trailing", "D"},
        {"so (B)!", "B"},
        {"(A) then junk (x)", "A"},
        {"the option (C) looks right", "C"},
        {"回答は(B)です", "B"},
    };
    return cases;
}

inline const std::vector<LabelCase>& nli_cases() {
    static const std::vector<LabelCase> cases = {
        {"Entailment", "entailment"},
        {"not contradiction but neutral", "neutral"},
        {"maybe", ""},
        {"CONTRADICTION.", "contradiction"},
        {"It is neutral, no wait, entailment", "entailment"},
        {"entail", ""},
        {"neutrality", "neutral"},
        {"", ""},
        {"The label is Neutral", "neutral"},
        {"contradiction then entailment then contradiction", "contradiction"},
        {"ENTAILMENT!", "entailment"},
        {"This neither entails nor contradicts", ""},
        {"answer: neutral", "neutral"},
        {"I think it is a contradiction", "contradiction"},
        {"eNtAiLmEnT", "entailment"},
        {"the premise entails the hypothesis: entailment", "entailment"},
        {"no relation", ""},
        {"NEUTRAL neutral NEUTRAL", "neutral"},
        {"contradictory", ""},
        {"The correct label is contradiction, not neutral", "neutral"},
        {"entailment\n", "entailment"},
        {"label=neutral", "neutral"},
        {"...entailment...", "entailment"},
        {"neutral or entailment? neutral", "neutral"},
        {"CoNtRaDiCtIoN", "contradiction"},
        {"entailmen", ""},
        {"it is neutral.", "neutral"},
        {"hypothesis contradicts: contradiction", "contradiction"},
        {"both neutral and Contradiction appear", "contradiction"},
        {"nothing to see", ""},
        {"final answer: Entailment", "entailment"},
        {"neutral neutral neutral", "neutral"},
    };
    return cases;
}

struct CodeCase {
    const char* text;
    bool has_block;
    const char* source;  // valid when has_block
    bool warning;        // unclosed open tag
};

inline const std::vector<CodeCase>& code_cases() {
    static const std::vector<CodeCase> cases = {
        {"<llm-code>x = 27/3</llm-code>", true, "x = 27/3", false},
        {"text <llm-code>\na = 1\n</llm-code> more", true, "\na = 1\n", false},
        {"<llm-code>broken", false, "", true},
        {"no tags at all", false, "", false},
        {"<llm-code>first</llm-code><llm-code>second</llm-code>", true, "first",
         false},
        {"<llm-code></llm-code>", true, "", false},
        {"<llm-code>a<llm-code>b</llm-code>", true, "a<llm-code>b", false},
        {"", false, "", false},
        {"</llm-code> close before open <llm-code>x</llm-code>", true, "x",
         false},
        {"prefix<llm-code>y = 2 * 3</llm-code>suffix", true, "y = 2 * 3", false},
        {"<llm-code>\nimport math\nr = math.sqrt(16)\n</llm-code>", true,
         "\nimport math\nr = math.sqrt(16)\n", false},
        {"<llm-CODE>case sensitive</llm-CODE>", false, "", false},
        {"< llm-code>not a tag</llm-code>", false, "", false},
        {"<llm-code>tab\tand spaces  </llm-code>", true, "tab\tand spaces  ",
         false},
        {"<llm-code>unicode \xE2\x82\xAC</llm-code>", true, "unicode \xE2\x82\xAC",
         false},
        {"<llm-code>a=1</llm-code> then <llm-code>unclosed", true, "a=1", false},
        {"<llm-code>while True:\n    pass</llm-code>", true,
         "while True:\n    pass", false},
        {"The code is:\n<llm-code>\nn = 27 // 3\n</llm-code>\ndone", true,
         "\nn = 27 // 3\n", false},
        {"<llm-code>print('</llm-code>')", true, "print('", false},
        {"only close </llm-code>", false, "", false},
        {"<llm-code>x</llm-code><llm-code-output>1</llm-code-output>", true, "x",
         false},
        {"wrapped <llm-code>s = 'text'</llm-code> tail", true, "s = 'text'",
         false},
        {"<llm-code>\n\n\n</llm-code>", true, "\n\n\n", false},
        {"a<llm-code>b</llm-code>c<llm-code>d</llm-code>e", true, "b", false},
        {"<llm-code>x = 1 # comment</llm-code>", true, "x = 1 # comment", false},
        {"llm-code without brackets", false, "", false},
        {"<llm-code>very long " // long body, still one block
         "xxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxx</llm-code>",
         true, "very long xxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxx", false},
        {"<llm-code>a = [1, 2, 3]\nb = sum(a)</llm-code>", true,
         "a = [1, 2, 3]\nb = sum(a)", false},
        {"text then <llm-code>t = 6</llm-code>", true, "t = 6", false},
        {"<llm-code> spaced </llm-code>", true, " spaced ", false},
        {"<llm-code>first</llm-code> and <llm-code>unclosed trailing", true,
         "first", false},
        {"deep <llm-code>nested = {'k': '</llm-code>'}", true, "nested = {'k': '",
         false},
    };
    return cases;
}

}  // namespace golden
