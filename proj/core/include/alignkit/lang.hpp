#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace alignkit {

// Closed language registry. Codes are lowercase ISO-639-1 two-letter strings
// covering the union of the three benchmark suites this toolkit targets:
// the 10 mGSM/mSVAMP languages first (in the canonical report column order),
// then the additional xCSQA/xNLI languages alphabetically. Registry order is
// a contract: report columns and per-language tables follow it.
class Lang {
  public:
    Lang() = default;

    // Throws Error on codes outside the registry.
    static Lang parse(std::string_view code);
    static std::optional<Lang> try_parse(std::string_view code);

    const std::string& code() const;
    const std::string& name() const;  // English display name, e.g. "Bengali"
    uint8_t index() const { return index_; }

    bool is_english() const;
    // Member of the 10-language mGSM set (the first block of the registry).
    bool in_mgsm_set() const;

    auto operator<=>(const Lang&) const = default;

    static const std::vector<Lang>& registry();
    static Lang english();

  private:
    explicit Lang(uint8_t index) : index_(index) {}
    uint8_t index_ = 0;
};

}  // namespace alignkit
