#include "alignkit/jsonl.hpp"

#include <fstream>

#include "alignkit/error.hpp"

namespace alignkit {

void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(size_t, const json&)>& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && line.size() >= 3 && (unsigned char)line[0] == 0xEF &&
            (unsigned char)line[1] == 0xBB && (unsigned char)line[2] == 0xBF) {
            throw Error(path.string() + ": UTF-8 BOM is not allowed");
        }
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded()) {
            throw Error(path.string() + ":" + std::to_string(line_no) +
                        ": malformed JSON line");
        }
        if (!obj.is_object()) {
            throw Error(path.string() + ":" + std::to_string(line_no) +
                        ": expected a JSON object");
        }
        fn(line_no, obj);
    }
}

struct JsonlWriter::Impl {
    std::filesystem::path path;
    std::ofstream out;
};

JsonlWriter::JsonlWriter(const std::filesystem::path& path)
    : impl_(new Impl{path, std::ofstream(path, std::ios::binary)}) {
    if (!impl_->out) {
        delete impl_;
        impl_ = nullptr;
        throw Error("cannot write " + path.string());
    }
}

JsonlWriter::~JsonlWriter() { delete impl_; }

void JsonlWriter::write(const json& obj) {
    impl_->out << obj.dump() << '\n';
    if (!impl_->out) {
        throw Error("write failed: " + impl_->path.string());
    }
    ++lines_;
}

void JsonlWriter::close() {
    impl_->out.flush();
    impl_->out.close();
    if (impl_->out.fail()) {
        throw Error("write failed: " + impl_->path.string());
    }
}

std::string require_string(const json& obj, const char* key, size_t line) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) {
        throw Error("line " + std::to_string(line) + ": missing string field \"" +
                    key + "\"");
    }
    return it->get<std::string>();
}

std::string optional_string(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return {};
    if (!it->is_string()) return {};
    return it->get<std::string>();
}

}  // namespace alignkit
