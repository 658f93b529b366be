#pragma once

#include <filesystem>
#include <functional>
#include <string>

#include <nlohmann/json.hpp>

namespace alignkit {

using json = nlohmann::json;

// Streams a UTF-8 JSONL file line by line. The callback receives the
// 1-based line number and the parsed object. Blank lines are skipped.
// Throws Error on: missing file, UTF-8 BOM, malformed JSON (with line
// number), or a line that is not a JSON object.
void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(size_t, const json&)>& fn);

// Serializes one object per line with keys in sorted order (nlohmann's
// default object ordering), which is the normalized on-disk form.
class JsonlWriter {
  public:
    explicit JsonlWriter(const std::filesystem::path& path);
    ~JsonlWriter();

    JsonlWriter(const JsonlWriter&) = delete;
    JsonlWriter& operator=(const JsonlWriter&) = delete;

    void write(const json& obj);
    void close();
    size_t lines_written() const { return lines_; }

  private:
    struct Impl;
    Impl* impl_;
    size_t lines_ = 0;
};

// Required field accessors with path:line context in error messages.
std::string require_string(const json& obj, const char* key, size_t line);
std::string optional_string(const json& obj, const char* key);

}  // namespace alignkit
