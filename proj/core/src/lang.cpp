#include "alignkit/lang.hpp"

#include <array>

#include "alignkit/error.hpp"

namespace alignkit {

namespace {

struct LangEntry {
    const char* code;
    const char* name;
};

// First 10 entries: the mGSM languages in report column order
// (Bn Th Sw Ja Zh De Fr Ru Es En). Remaining xCSQA/xNLI languages follow
// alphabetically by code.
constexpr std::array<LangEntry, 21> kRegistry = {{
    {"bn", "Bengali"},
    {"th", "Thai"},
    {"sw", "Swahili"},
    {"ja", "Japanese"},
    {"zh", "Chinese"},
    {"de", "German"},
    {"fr", "French"},
    {"ru", "Russian"},
    {"es", "Spanish"},
    {"en", "English"},
    {"ar", "Arabic"},
    {"bg", "Bulgarian"},
    {"el", "Greek"},
    {"hi", "Hindi"},
    {"it", "Italian"},
    {"nl", "Dutch"},
    {"pl", "Polish"},
    {"pt", "Portuguese"},
    {"tr", "Turkish"},
    {"ur", "Urdu"},
    {"vi", "Vietnamese"},
}};

constexpr size_t kMgsmCount = 10;
constexpr uint8_t kEnglishIndex = 9;

}  // namespace

Lang Lang::parse(std::string_view code) {
    auto lang = try_parse(code);
    if (!lang) {
        throw Error("unknown language code \"" + std::string(code) +
                    "\" (not in the closed registry)");
    }
    return *lang;
}

std::optional<Lang> Lang::try_parse(std::string_view code) {
    for (size_t i = 0; i < kRegistry.size(); ++i) {
        if (code == kRegistry[i].code) {
            return Lang(static_cast<uint8_t>(i));
        }
    }
    return std::nullopt;
}

const std::string& Lang::code() const {
    static const std::array<std::string, kRegistry.size()> codes = [] {
        std::array<std::string, kRegistry.size()> out;
        for (size_t i = 0; i < kRegistry.size(); ++i) out[i] = kRegistry[i].code;
        return out;
    }();
    return codes[index_];
}

const std::string& Lang::name() const {
    static const std::array<std::string, kRegistry.size()> names = [] {
        std::array<std::string, kRegistry.size()> out;
        for (size_t i = 0; i < kRegistry.size(); ++i) out[i] = kRegistry[i].name;
        return out;
    }();
    return names[index_];
}

bool Lang::is_english() const { return index_ == kEnglishIndex; }

bool Lang::in_mgsm_set() const { return index_ < kMgsmCount; }

const std::vector<Lang>& Lang::registry() {
    static const std::vector<Lang> all = [] {
        std::vector<Lang> out;
        out.reserve(kRegistry.size());
        for (size_t i = 0; i < kRegistry.size(); ++i) {
            out.push_back(Lang(static_cast<uint8_t>(i)));
        }
        return out;
    }();
    return all;
}

Lang Lang::english() { return Lang(kEnglishIndex); }

}  // namespace alignkit
