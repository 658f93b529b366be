#include "alignkit/extract.hpp"

#include <cctype>

#include "alignkit/error.hpp"

namespace alignkit {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Tries to read one numeric literal starting at `pos` (which must point at
// a digit). Returns the end offset (exclusive) of the literal.
size_t read_literal(const std::string& text, size_t pos) {
    size_t i = pos;
    while (i < text.size() && is_digit(text[i])) ++i;

    // Thousands groups: only accept ",ddd" repetitions that terminate the
    // integer part; "1,2345" is not grouped, it is "1" followed by "2345".
    if (i - pos <= 3) {
        size_t j = i;
        bool any_group = false;
        while (j + 3 < text.size() && text[j] == ',' && is_digit(text[j + 1]) &&
               is_digit(text[j + 2]) && is_digit(text[j + 3])) {
            j += 4;
            any_group = true;
        }
        bool next_is_digit = j < text.size() && is_digit(text[j]);
        if (any_group && !next_is_digit) i = j;
    }

    // Decimal part: '.' directly followed by at least one digit.
    if (i + 1 < text.size() && text[i] == '.' && is_digit(text[i + 1])) {
        ++i;
        while (i < text.size() && is_digit(text[i])) ++i;
    }
    return i;
}

}  // namespace

const char* answer_kind_name(AnswerKind k) {
    switch (k) {
        case AnswerKind::number: return "number";
        case AnswerKind::choice_label: return "choice_label";
        case AnswerKind::nli_label: return "nli_label";
        case AnswerKind::none: return "none";
    }
    return "?";
}

std::string normalize_number(const std::string& literal) {
    std::string digits;
    digits.reserve(literal.size());
    bool negative = false;
    std::string int_part, frac_part;
    size_t i = 0;
    if (i < literal.size() && (literal[i] == '+' || literal[i] == '-')) {
        negative = literal[i] == '-';
        ++i;
    }
    bool in_frac = false;
    for (; i < literal.size(); ++i) {
        char c = literal[i];
        if (c == ',') continue;
        if (c == '.') {
            in_frac = true;
            continue;
        }
        if (!is_digit(c)) break;
        (in_frac ? frac_part : int_part) += c;
    }
    size_t nz = int_part.find_first_not_of('0');
    int_part = nz == std::string::npos ? "0" : int_part.substr(nz);
    size_t fz = frac_part.find_last_not_of('0');
    frac_part = fz == std::string::npos ? "" : frac_part.substr(0, fz + 1);

    if (int_part == "0" && frac_part.empty()) return "0";
    std::string out = negative ? "-" : "";
    out += int_part;
    if (!frac_part.empty()) out += "." + frac_part;
    return out;
}

bool numbers_equal(const std::string& a, const std::string& b) {
    return normalize_number(a) == normalize_number(b);
}

std::vector<NumberToken> scan_numbers(const std::string& text) {
    std::vector<NumberToken> out;
    size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        size_t start = i;
        bool signed_start = false;
        if ((c == '+' || c == '-') && i + 1 < text.size() && is_digit(text[i + 1]) &&
            (i == 0 || !is_digit(text[i - 1]))) {
            signed_start = true;
        }
        if (!signed_start && !is_digit(c)) {
            ++i;
            continue;
        }
        size_t digit_start = signed_start ? i + 1 : i;
        size_t end = read_literal(text, digit_start);
        NumberToken tok;
        tok.begin = start;
        tok.end = end;
        tok.text = text.substr(start, end - start);
        tok.normalized = normalize_number(tok.text);
        out.push_back(std::move(tok));
        i = end;
    }
    return out;
}

ExtractedAnswer extract_last_number(const std::string& text) {
    auto numbers = scan_numbers(text);
    if (numbers.empty()) return ExtractedAnswer::none();
    const auto& last = numbers.back();
    return {AnswerKind::number, last.normalized, last.begin, last.end};
}

std::vector<std::string> split_sentences(const std::string& text) {
    std::vector<std::string> out;
    size_t start = 0;
    size_t i = 0;
    auto flush = [&](size_t end_exclusive) {
        out.push_back(text.substr(start, end_exclusive - start));
        start = end_exclusive;
    };
    while (i < text.size()) {
        unsigned char c = text[i];
        if (c == '\n') {
            flush(i + 1);
            ++i;
            continue;
        }
        if (c == '.' || c == '!' || c == '?') {
            size_t j = i + 1;
            bool at_end = j >= text.size();
            bool ws_next = !at_end && (text[j] == ' ' || text[j] == '\t' ||
                                       text[j] == '\r' || text[j] == '\n');
            if (at_end || ws_next) {
                flush(i + 1);
                ++i;
                continue;
            }
            ++i;
            continue;
        }
        // Fullwidth sentence enders: U+3002 (E3 80 82), U+FF1F (EF BC 9F),
        // U+FF01 (EF BC 81). These end a sentence unconditionally.
        if (i + 3 <= text.size()) {
            unsigned char b0 = text[i], b1 = text[i + 1], b2 = text[i + 2];
            bool cjk_end = (b0 == 0xE3 && b1 == 0x80 && b2 == 0x82) ||
                           (b0 == 0xEF && b1 == 0xBC && (b2 == 0x9F || b2 == 0x81));
            if (cjk_end) {
                flush(i + 3);
                i += 3;
                continue;
            }
        }
        ++i;
    }
    if (start < text.size()) out.push_back(text.substr(start));
    return out;
}

std::vector<std::string> extract_step_answers(const std::string& text) {
    std::vector<std::string> out;
    for (const auto& sentence : split_sentences(text)) {
        auto ans = extract_last_number(sentence);
        if (ans.kind == AnswerKind::number) out.push_back(ans.value);
    }
    return out;
}

ExtractedAnswer extract_choice_label(const std::string& text) {
    ExtractedAnswer result = ExtractedAnswer::none();
    for (size_t i = 0; i + 3 <= text.size(); ++i) {
        if (text[i] != '(' || text[i + 2] != ')') continue;
        char letter = text[i + 1];
        char upper = static_cast<char>(std::toupper(static_cast<unsigned char>(letter)));
        if (upper < 'A' || upper > 'E') continue;
        result = {AnswerKind::choice_label, std::string(1, upper), i, i + 3};
    }
    return result;
}

ExtractedAnswer extract_nli_label(const std::string& text) {
    static const char* kLabels[] = {"entailment", "neutral", "contradiction"};
    std::string lower;
    lower.reserve(text.size());
    for (char c : text) {
        lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    ExtractedAnswer result = ExtractedAnswer::none();
    size_t best = std::string::npos;
    for (const char* label : kLabels) {
        size_t pos = lower.rfind(label);
        if (pos == std::string::npos) continue;
        if (best == std::string::npos || pos > best) {
            best = pos;
            result = {AnswerKind::nli_label, label, pos, pos + std::string(label).size()};
        }
    }
    return result;
}

CodeBlockScan extract_code_block(const std::string& text) {
    size_t open = text.find(kCodeOpenTag);
    if (open == std::string::npos) return {};
    size_t src_begin = open + std::char_traits<char>::length(kCodeOpenTag);
    size_t close = text.find(kCodeCloseTag, src_begin);
    if (close == std::string::npos) {
        return {std::nullopt, true};
    }
    CodeBlock block;
    block.begin = src_begin;
    block.end = close;
    block.source = text.substr(src_begin, close - src_begin);
    return {block, false};
}

std::string splice_code_output(const std::string& response,
                               const std::string& value) {
    auto scan = extract_code_block(response);
    if (!scan.block) {
        throw Error("splice_code_output: response has no code block");
    }
    size_t after_close =
        scan.block->end + std::char_traits<char>::length(kCodeCloseTag);
    std::string fresh = std::string(kOutputOpenTag) + value + kOutputCloseTag;

    // Replace a stale output block when one already follows (possibly after
    // whitespace); otherwise insert directly after the closing tag.
    size_t probe = after_close;
    while (probe < response.size() &&
           (response[probe] == ' ' || response[probe] == '\t' ||
            response[probe] == '\r' || response[probe] == '\n')) {
        ++probe;
    }
    const size_t open_len = std::char_traits<char>::length(kOutputOpenTag);
    if (response.compare(probe, open_len, kOutputOpenTag) == 0) {
        size_t stale_close = response.find(kOutputCloseTag, probe + open_len);
        if (stale_close != std::string::npos) {
            size_t stale_end =
                stale_close + std::char_traits<char>::length(kOutputCloseTag);
            return response.substr(0, probe) + fresh + response.substr(stale_end);
        }
    }
    return response.substr(0, after_close) + fresh + response.substr(after_close);
}

}  // namespace alignkit
