#include "alignkit/lid.hpp"

#include <algorithm>

#include "alignkit/error.hpp"

namespace alignkit {

namespace {

std::u32string decode_utf8(const std::string& text) {
    std::u32string out;
    out.reserve(text.size());
    size_t i = 0;
    while (i < text.size()) {
        unsigned char c = text[i];
        char32_t cp;
        size_t len;
        if (c < 0x80) {
            cp = c;
            len = 1;
        } else if ((c >> 5) == 0x6 && i + 1 < text.size()) {
            cp = (c & 0x1F) << 6 | (text[i + 1] & 0x3F);
            len = 2;
        } else if ((c >> 4) == 0xE && i + 2 < text.size()) {
            cp = (c & 0x0F) << 12 | (text[i + 1] & 0x3F) << 6 | (text[i + 2] & 0x3F);
            len = 3;
        } else if ((c >> 3) == 0x1E && i + 3 < text.size()) {
            cp = (c & 0x07) << 18 | (text[i + 1] & 0x3F) << 12 |
                 (text[i + 2] & 0x3F) << 6 | (text[i + 3] & 0x3F);
            len = 4;
        } else {
            cp = 0xFFFD;
            len = 1;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string encode_utf8(const std::u32string& text) {
    std::string out;
    for (char32_t cp : text) {
        if (cp < 0x80) {
            out += static_cast<char>(cp);
        } else if (cp < 0x800) {
            out += static_cast<char>(0xC0 | (cp >> 6));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else if (cp < 0x10000) {
            out += static_cast<char>(0xE0 | (cp >> 12));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else {
            out += static_cast<char>(0xF0 | (cp >> 18));
            out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        }
    }
    return out;
}

// Case folding for the cased scripts in the registry: ASCII, Latin-1,
// Greek, Cyrillic.
char32_t fold_case(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return cp + 32;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;     // Latin-1
    if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 32;  // Greek
    if (cp >= 0x410 && cp <= 0x42F) return cp + 32;                 // Cyrillic
    if (cp >= 0x400 && cp <= 0x40F) return cp + 80;                 // Ё etc.
    return cp;
}

bool is_boundary(char32_t cp) {
    if (cp <= 0x20 || cp == 0x7F || cp == 0xA0) return true;
    if (cp >= '0' && cp <= '9') return true;
    if ((cp >= '!' && cp <= '/') || (cp >= ':' && cp <= '@') ||
        (cp >= '[' && cp <= '`') || (cp >= '{' && cp <= '~')) {
        return true;
    }
    // CJK punctuation and fullwidth marks
    if (cp == 0x3000 || cp == 0x3001 || cp == 0x3002) return true;
    if (cp >= 0xFF01 && cp <= 0xFF0F) return true;
    if (cp == 0xFF1F || cp == 0xFF1A || cp == 0xFF1B) return true;
    return false;
}

// Lowercased codepoints with boundary runs collapsed to '_' and a single
// '_' padded on both ends.
std::u32string to_symbols(const std::string& text) {
    std::u32string raw = decode_utf8(text);
    std::u32string out;
    out.reserve(raw.size() + 2);
    out.push_back(U'_');
    for (char32_t cp : raw) {
        if (is_boundary(cp)) {
            if (out.back() != U'_') out.push_back(U'_');
        } else {
            out.push_back(fold_case(cp));
        }
    }
    if (out.back() != U'_') out.push_back(U'_');
    return out;
}

void count_ngrams(const std::u32string& symbols,
                  std::map<std::u32string, uint64_t>& counts) {
    for (size_t n = 1; n <= 4; ++n) {
        if (symbols.size() < n) break;
        for (size_t i = 0; i + n <= symbols.size(); ++i) {
            std::u32string gram = symbols.substr(i, n);
            if (n == 1 && gram[0] == U'_') continue;  // bare boundary
            counts[gram]++;
        }
    }
}

}  // namespace

LidProfile::LidProfile(Lang language, std::vector<std::string> ranked_ngrams)
    : language_(language), ranked_(std::move(ranked_ngrams)) {
    index_.reserve(ranked_.size());
    for (size_t i = 0; i < ranked_.size(); ++i) {
        auto inserted = index_.emplace(ranked_[i], static_cast<int>(i));
        if (!inserted.second) {
            throw Error("duplicate n-gram in profile for " + language_.code());
        }
    }
}

int LidProfile::rank_of(const std::string& ngram) const {
    auto it = index_.find(ngram);
    return it == index_.end() ? -1 : it->second;
}

std::vector<std::string> rank_ngrams(const std::vector<std::string>& texts,
                                     size_t profile_len) {
    std::map<std::u32string, uint64_t> counts;
    for (const auto& text : texts) {
        count_ngrams(to_symbols(text), counts);
    }
    // Sort by count descending; the map already orders ties by codepoint
    // sequence, and stable_sort keeps that order.
    std::vector<std::pair<std::u32string, uint64_t>> entries(counts.begin(),
                                                             counts.end());
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<std::string> ranked;
    ranked.reserve(std::min(profile_len, entries.size()));
    for (const auto& [gram, count] : entries) {
        if (ranked.size() >= profile_len) break;
        ranked.push_back(encode_utf8(gram));
    }
    return ranked;
}

std::vector<LidProfile> train_lid_profiles(
    const std::map<Lang, std::vector<std::string>>& seed_corpus,
    size_t profile_len) {
    if (profile_len == 0) throw Error("profile length must be positive");
    std::vector<LidProfile> profiles;
    profiles.reserve(seed_corpus.size());
    for (const auto& [lang, sentences] : seed_corpus) {
        if (sentences.size() < 50) {
            throw Error("insufficient corpus for " + lang.code() + ": " +
                        std::to_string(sentences.size()) +
                        " sentences (need at least 50)");
        }
        profiles.emplace_back(lang, rank_ngrams(sentences, profile_len));
    }
    return profiles;
}

Lang identify_language(const std::string& text,
                       const std::vector<LidProfile>& profiles) {
    if (profiles.empty()) throw Error("identify_language: no profiles");
    if (decode_utf8(text).empty()) {
        throw Error("identify_language: empty text");
    }

    size_t max_len = 0;
    for (const auto& p : profiles) max_len = std::max(max_len, p.size());
    auto text_profile = rank_ngrams({text}, max_len);

    bool found = false;
    Lang best;
    uint64_t best_dist = 0;
    for (const auto& profile : profiles) {
        const uint64_t penalty = profile.size();
        uint64_t dist = 0;
        for (size_t r = 0; r < text_profile.size(); ++r) {
            int lang_rank = profile.rank_of(text_profile[r]);
            if (lang_rank < 0) {
                dist += penalty;
            } else {
                dist += static_cast<uint64_t>(
                    std::abs(static_cast<int64_t>(r) - lang_rank));
            }
        }
        bool better = !found || dist < best_dist ||
                      (dist == best_dist && profile.language().code() < best.code());
        if (better) {
            best = profile.language();
            best_dist = dist;
            found = true;
        }
    }
    return best;
}

const std::vector<LidProfile>& builtin_lid_profiles() {
    static const std::vector<LidProfile> profiles =
        train_lid_profiles(lid_seed_corpus(), kDefaultProfileLen);
    return profiles;
}

}  // namespace alignkit
