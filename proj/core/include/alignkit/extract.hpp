#pragma once

#include <optional>
#include <string>
#include <vector>

namespace alignkit {

enum class AnswerKind { number, choice_label, nli_label, none };

const char* answer_kind_name(AnswerKind k);

struct ExtractedAnswer {
    AnswerKind kind = AnswerKind::none;
    std::string value;   // normal form: canonical decimal / "A".."E" /
                         // lowercase nli label
    size_t begin = 0;    // character (byte) offsets of the matched span
    size_t end = 0;

    static ExtractedAnswer none() { return {}; }
};

// Canonical decimal form of a numeric literal: thousands separators and a
// leading '+' stripped, redundant zeros removed ("6.00" -> "6",
// "1,234.50" -> "1234.5", "-0.0" -> "0").
std::string normalize_number(const std::string& literal);

// Equality under the shared numeric comparator ("6" == "6.0" == "6.00").
bool numbers_equal(const std::string& a, const std::string& b);

struct NumberToken {
    std::string text;        // literal as it appears
    std::string normalized;  // canonical form
    size_t begin = 0;
    size_t end = 0;
};

// All maximal numeric literals in reading order. The grammar: optional sign
// (not preceded by a digit), digits with optional ','-separated 3-digit
// groups, optional '.' decimal part. A bare fraction "27/3" is two literals,
// never one value.
std::vector<NumberToken> scan_numbers(const std::string& text);

// Last numeric literal in the text; kind=none when no digit is present.
ExtractedAnswer extract_last_number(const std::string& text);

// Sentence boundaries: a newline always ends a sentence; '.', '!' and '?'
// end one when followed by whitespace or end of text; the fullwidth marks
// U+3002, U+FF1F and U+FF01 always end one. Returned spans cover the
// original text without gaps.
std::vector<std::string> split_sentences(const std::string& text);

// Last number of each sentence that contains one, in sentence order,
// values in canonical decimal form.
std::vector<std::string> extract_step_answers(const std::string& text);

// Last parenthesized single letter "(A)".."(E)" (either case, canonical
// uppercase). Letters outside the closed set do not match.
ExtractedAnswer extract_choice_label(const std::string& text);

// Last case-insensitive occurrence of entailment / neutral / contradiction,
// canonical lowercase.
ExtractedAnswer extract_nli_label(const std::string& text);

struct CodeBlock {
    std::string source;  // exact text between the tags
    size_t begin = 0;    // offsets of the source span within the response
    size_t end = 0;
    std::string language_hint = "python";
};

struct CodeBlockScan {
    std::optional<CodeBlock> block;
    bool unclosed = false;  // an open tag without its closing tag
};

inline constexpr const char* kCodeOpenTag = "<llm-code>";
inline constexpr const char* kCodeCloseTag = "</llm-code>";
inline constexpr const char* kOutputOpenTag = "<llm-code-output>";
inline constexpr const char* kOutputCloseTag = "</llm-code-output>";

// First well-formed <llm-code>...</llm-code> pair. Later blocks are ignored.
CodeBlockScan extract_code_block(const std::string& text);

// Inserts (or replaces, when one already follows the code block) an
// <llm-code-output>value</llm-code-output> block directly after the first
// code block's closing tag. Idempotent. Throws Error when the response has
// no code block.
std::string splice_code_output(const std::string& response,
                               const std::string& value);

}  // namespace alignkit
