#include "alignkit/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "alignkit/error.hpp"

namespace alignkit {

namespace {

std::set<std::string> normalized_set(const StepAnswerList& list) {
    std::set<std::string> out;
    for (const auto& v : list.values) out.insert(normalize_number(v));
    return out;
}

std::string trimmed(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

}  // namespace

double jaccard_consistency(const StepAnswerList& a, const StepAnswerList& b) {
    auto sa = normalized_set(a);
    auto sb = normalized_set(b);
    if (sa.empty() && sb.empty()) return 1.0;
    if (sa.empty() || sb.empty()) return 0.0;
    size_t inter = 0;
    for (const auto& v : sa) inter += sb.count(v);
    size_t uni = sa.size() + sb.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double ConsistencyMatrix::cell(Lang a, Lang b) const {
    auto ia = std::find(languages.begin(), languages.end(), a);
    auto ib = std::find(languages.begin(), languages.end(), b);
    if (ia == languages.end() || ib == languages.end()) {
        throw Error("language not present in consistency matrix");
    }
    return cells[ia - languages.begin()][ib - languages.begin()];
}

ConsistencyMatrix consistency_matrix(
    const std::map<Lang, std::map<std::string, StepAnswerList>>& responses) {
    if (responses.empty()) {
        throw Error("consistency_matrix: no languages");
    }
    // Aligned question ids: every language must cover the same set.
    const auto& reference = responses.begin()->second;
    for (const auto& [lang, by_id] : responses) {
        if (by_id.size() != reference.size()) {
            throw Error("consistency_matrix: language " + lang.code() +
                        " covers " + std::to_string(by_id.size()) +
                        " questions, expected " + std::to_string(reference.size()));
        }
        for (const auto& [id, _] : by_id) {
            if (!reference.count(id)) {
                throw Error("consistency_matrix: question id \"" + id +
                            "\" of language " + lang.code() +
                            " is not aligned across languages");
            }
        }
    }
    if (reference.empty()) {
        throw Error("consistency_matrix: no questions");
    }

    ConsistencyMatrix m;
    for (const auto& [lang, _] : responses) m.languages.push_back(lang);
    std::sort(m.languages.begin(), m.languages.end());  // registry order

    const size_t n = m.languages.size();
    m.cells.assign(n, std::vector<double>(n, 0.0));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i; j < n; ++j) {
            const auto& a = responses.at(m.languages[i]);
            const auto& b = responses.at(m.languages[j]);
            double sum = 0.0;
            for (const auto& [id, steps] : a) {
                sum += jaccard_consistency(steps, b.at(id));
            }
            double mean = sum / static_cast<double>(reference.size());
            m.cells[i][j] = mean;
            m.cells[j][i] = mean;
        }
    }
    return m;
}

bool answer_matches_gold(const ExtractedAnswer& pred, const std::string& gold) {
    if (pred.kind == AnswerKind::none) return false;
    std::string g = trimmed(gold);
    switch (pred.kind) {
        case AnswerKind::number:
            return numbers_equal(pred.value, g);
        case AnswerKind::choice_label: {
            // Gold may be "A" or "(A)".
            if (!g.empty() && g.front() == '(') g.erase(0, 1);
            if (!g.empty() && g.back() == ')') g.pop_back();
            if (g.size() != 1) return false;
            char upper = static_cast<char>(
                std::toupper(static_cast<unsigned char>(g[0])));
            return pred.value.size() == 1 && pred.value[0] == upper;
        }
        case AnswerKind::nli_label: {
            std::string lower;
            for (char c : g) {
                lower += static_cast<char>(
                    std::tolower(static_cast<unsigned char>(c)));
            }
            return pred.value == lower;
        }
        case AnswerKind::none:
            return false;
    }
    return false;
}

double answer_accuracy(const std::vector<ExtractedAnswer>& preds,
                       const std::vector<std::string>& golds) {
    if (preds.size() != golds.size()) {
        throw Error("answer_accuracy: " + std::to_string(preds.size()) +
                    " predictions vs " + std::to_string(golds.size()) + " golds");
    }
    if (preds.empty()) return 0.0;
    size_t correct = 0;
    for (size_t i = 0; i < preds.size(); ++i) {
        if (answer_matches_gold(preds[i], golds[i])) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(preds.size());
}

LanguageConsistencyReport language_consistency(
    const std::vector<std::pair<std::string, Lang>>& questions,
    const std::vector<std::string>& responses,
    const std::vector<LidProfile>& profiles) {
    if (questions.size() != responses.size()) {
        throw Error("language_consistency: " + std::to_string(questions.size()) +
                    " questions vs " + std::to_string(responses.size()) +
                    " responses");
    }
    LanguageConsistencyReport report;
    std::map<Lang, size_t> hits;
    for (size_t i = 0; i < questions.size(); ++i) {
        Lang expected = questions[i].second;
        report.counts[expected]++;
        if (trimmed(responses[i]).empty()) continue;  // unanswered: a miss
        Lang got = identify_language(responses[i], profiles);
        if (got == expected) hits[expected]++;
    }
    double sum = 0.0;
    for (const auto& [lang, total] : report.counts) {
        double frac = static_cast<double>(hits[lang]) / static_cast<double>(total);
        report.per_language[lang] = frac;
        sum += frac;
    }
    report.macro_average =
        report.counts.empty() ? 0.0 : sum / static_cast<double>(report.counts.size());
    return report;
}

double representation_compactness(
    const std::map<Lang, std::map<std::string, std::vector<double>>>& vectors) {
    if (vectors.size() < 2) {
        throw Error("representation_compactness: need at least two languages");
    }
    const auto& reference = vectors.begin()->second;
    if (reference.empty()) {
        throw Error("representation_compactness: no vectors");
    }
    size_t dim = reference.begin()->second.size();

    for (const auto& [lang, by_id] : vectors) {
        if (by_id.size() != reference.size()) {
            throw Error("representation_compactness: language " + lang.code() +
                        " has " + std::to_string(by_id.size()) +
                        " vectors, expected " + std::to_string(reference.size()));
        }
        for (const auto& [id, vec] : by_id) {
            if (vec.size() != dim) {
                throw Error("representation_compactness: dimension mismatch at id \"" +
                            id + "\" (" + std::to_string(vec.size()) + " vs " +
                            std::to_string(dim) + ")");
            }
            if (!reference.count(id)) {
                throw Error("representation_compactness: id \"" + id +
                            "\" not aligned across languages");
            }
        }
    }

    // Numerator: per-question cross-language spread.
    double numer = 0.0;
    size_t n_questions = 0;
    for (const auto& [id, _] : reference) {
        std::vector<const std::vector<double>*> group;
        for (const auto& [lang, by_id] : vectors) {
            group.push_back(&by_id.at(id));
        }
        double sum = 0.0;
        size_t pairs = 0;
        for (size_t i = 0; i < group.size(); ++i) {
            for (size_t j = i + 1; j < group.size(); ++j) {
                sum += euclidean(*group[i], *group[j]);
                ++pairs;
            }
        }
        numer += sum / static_cast<double>(pairs);
        ++n_questions;
    }
    numer /= static_cast<double>(n_questions);

    // Denominator: global spread over every vector pair.
    std::vector<const std::vector<double>*> all;
    for (const auto& [lang, by_id] : vectors) {
        for (const auto& [id, vec] : by_id) all.push_back(&vec);
    }
    double denom = 0.0;
    size_t pairs = 0;
    for (size_t i = 0; i < all.size(); ++i) {
        for (size_t j = i + 1; j < all.size(); ++j) {
            denom += euclidean(*all[i], *all[j]);
            ++pairs;
        }
    }
    denom /= static_cast<double>(pairs);

    if (numer == 0.0) return 0.0;
    if (denom == 0.0) {
        throw Error("representation_compactness: degenerate vector set");
    }
    return numer / denom;
}

}  // namespace alignkit
