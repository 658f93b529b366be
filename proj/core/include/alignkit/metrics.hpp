#pragma once

#include <map>
#include <string>
#include <vector>

#include "alignkit/extract.hpp"
#include "alignkit/lang.hpp"
#include "alignkit/lid.hpp"

namespace alignkit {

// Intermediate numeric results of one response, in extraction order.
// Duplicates are kept; the metric itself works on sets.
struct StepAnswerList {
    std::vector<std::string> values;  // canonical decimal forms
};

// |set(a) n set(b)| / |set(a) u set(b)| under the shared numeric comparator.
// Two empty lists count as fully consistent (1.0); exactly one empty is 0.0.
double jaccard_consistency(const StepAnswerList& a, const StepAnswerList& b);

struct ConsistencyMatrix {
    std::vector<Lang> languages;          // registry order
    std::vector<std::vector<double>> cells;  // [i][j], symmetric

    double cell(Lang a, Lang b) const;
};

// Per-language step-answer lists keyed by question id. Every language must
// cover the same question-id set; cell(l1,l2) is the mean Jaccard
// consistency over questions.
ConsistencyMatrix consistency_matrix(
    const std::map<Lang, std::map<std::string, StepAnswerList>>& responses);

// Fraction of predictions matching gold. kind=none never matches; numbers
// compare under normalization, labels compare canonically (choice letters
// uppercase, nli labels lowercase).
double answer_accuracy(const std::vector<ExtractedAnswer>& preds,
                       const std::vector<std::string>& golds);

bool answer_matches_gold(const ExtractedAnswer& pred, const std::string& gold);

struct LanguageConsistencyReport {
    std::map<Lang, double> per_language;  // fraction identified == question lang
    std::map<Lang, size_t> counts;
    double macro_average = 0.0;           // unweighted over languages present
};

// questions[i] pairs with responses[i]; identification uses the given
// profiles. Throws on misaligned lengths.
LanguageConsistencyReport language_consistency(
    const std::vector<std::pair<std::string, Lang>>& questions,
    const std::vector<std::string>& responses,
    const std::vector<LidProfile>& profiles);

// Mean over question ids of the mean pairwise Euclidean distance among that
// question's cross-language vectors, divided by the global mean pairwise
// distance over all vectors. 0 = per-question vectors coincide across
// languages; ~1 = language adds as much spread as question identity.
double representation_compactness(
    const std::map<Lang, std::map<std::string, std::vector<double>>>& vectors);

}  // namespace alignkit
