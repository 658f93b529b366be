#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "alignkit/lang.hpp"

namespace alignkit {

// Character n-gram rank profile (n = 1..4) in the classic rank-order style:
// text is case-folded, digits/punctuation/whitespace collapse to a boundary
// marker, and the most frequent n-grams are kept in rank order.
class LidProfile {
  public:
    LidProfile(Lang language, std::vector<std::string> ranked_ngrams);

    Lang language() const { return language_; }
    size_t size() const { return ranked_.size(); }
    const std::vector<std::string>& ranked() const { return ranked_; }

    // Rank of an n-gram, or -1 when absent.
    int rank_of(const std::string& ngram) const;

  private:
    Lang language_;
    std::vector<std::string> ranked_;              // rank == index
    std::unordered_map<std::string, int> index_;
};

// Ranked n-gram profile of one text (used both for training and queries).
// Ties in frequency break lexicographically, so profiles are deterministic.
std::vector<std::string> rank_ngrams(const std::vector<std::string>& texts,
                                     size_t profile_len);

// One profile per language; every language needs at least 50 sentences.
std::vector<LidProfile> train_lid_profiles(
    const std::map<Lang, std::vector<std::string>>& seed_corpus,
    size_t profile_len);

// Language whose profile has the smallest out-of-place rank distance to the
// text's profile; ties break toward the lexicographically smaller code.
Lang identify_language(const std::string& text,
                       const std::vector<LidProfile>& profiles);

// Bundled 10-language seed corpus (the mGSM languages), 240 composed
// sentences per language, each at least 40 codepoints long.
const std::map<Lang, std::vector<std::string>>& lid_seed_corpus();

// Profiles trained once on the bundled corpus with the default length.
inline constexpr size_t kDefaultProfileLen = 300;
const std::vector<LidProfile>& builtin_lid_profiles();

}  // namespace alignkit
