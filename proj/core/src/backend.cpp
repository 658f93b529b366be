#include "alignkit/backend.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

#include "alignkit/error.hpp"
#include "alignkit/jsonl.hpp"
#include "alignkit/subprocess.hpp"

namespace alignkit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string ctx_to_string(const TokenSeq& ctx) {
    std::ostringstream os;
    os << '[';
    for (size_t i = 0; i < ctx.tokens.size(); ++i) {
        if (i) os << ',';
        os << ctx.tokens[i];
    }
    os << ']';
    return os.str();
}

void check_ctx(const TokenSeq& ctx, int32_t vocab_size) {
    for (TokenId id : ctx.tokens) {
        if (id < 0 || id >= vocab_size) {
            throw Error("context token " + std::to_string(id) +
                        " outside vocabulary of size " + std::to_string(vocab_size));
        }
    }
}

}  // namespace

double logsumexp(const std::vector<double>& values) {
    double m = kNegInf;
    for (double v : values) m = std::max(m, v);
    if (!(m > kNegInf)) return kNegInf;
    double sum = 0.0;
    for (double v : values) {
        if (v > kNegInf) sum += std::exp(v - m);
    }
    return m + std::log(sum);
}

LogProbVector LogProbVector::normalized_from_logs(std::vector<double> logs) {
    if (logs.empty()) throw Error("empty log-probability vector");
    for (double v : logs) {
        if (std::isnan(v)) throw Error("NaN in log-probability vector");
        if (v == std::numeric_limits<double>::infinity()) {
            throw Error("+inf in log-probability vector");
        }
    }
    double lse = logsumexp(logs);
    if (!(lse > kNegInf)) {
        throw Error("all-(-inf) log-probability vector cannot be normalized");
    }
    for (double& v : logs) {
        if (v > kNegInf) v -= lse;
    }
    LogProbVector out;
    out.values = std::move(logs);
    return out;
}

LogProbVector LogProbVector::from_probs(const std::vector<double>& probs) {
    std::vector<double> logs(probs.size());
    for (size_t i = 0; i < probs.size(); ++i) {
        if (std::isnan(probs[i]) || probs[i] < 0.0) {
            throw Error("invalid probability value");
        }
        logs[i] = probs[i] == 0.0 ? kNegInf : std::log(probs[i]);
    }
    return normalized_from_logs(std::move(logs));
}

bool LogProbVector::is_normalized(double tol) const {
    for (double v : values) {
        if (std::isnan(v)) return false;
    }
    return std::abs(logsumexp(values)) <= tol;
}

TokenId LogProbVector::argmax() const {
    size_t best = 0;
    for (size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) best = i;
    }
    return static_cast<TokenId>(best);
}

CharTokenizer::CharTokenizer(int32_t vocab_size) : vocab_size_(vocab_size) {
    if (vocab_size < 2) throw Error("CharTokenizer needs vocab_size >= 2");
}

TokenSeq CharTokenizer::encode(const std::string& text) const {
    TokenSeq seq;
    seq.vocab_size = vocab_size_;
    // Decode UTF-8 to codepoints; each codepoint must be 32 + id for a
    // non-eos id.
    size_t i = 0;
    while (i < text.size()) {
        unsigned char c = text[i];
        char32_t cp = 0;
        size_t len = 1;
        if (c < 0x80) {
            cp = c;
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
            throw Error("invalid UTF-8 in text to encode");
        }
        int64_t id;
        if (cp >= 32 && cp <= 126) {
            id = static_cast<int64_t>(cp) - 32;
        } else if (cp == '\n') {
            id = 95;
        } else if (cp == '\t') {
            id = 96;
        } else if (cp >= 127) {
            id = 97 + (static_cast<int64_t>(cp) - 127);
        } else {
            id = -1;
        }
        if (id < 0 || id >= vocab_size_ - 1) {
            throw Error("character U+" + std::to_string(cp) +
                        " not encodable with vocab_size " +
                        std::to_string(vocab_size_));
        }
        seq.push(static_cast<TokenId>(id));
        i += len;
    }
    return seq;
}

std::string CharTokenizer::decode(const TokenSeq& seq) const {
    std::string out;
    for (TokenId id : seq.tokens) {
        if (id == eos()) continue;
        if (id < 0 || id >= vocab_size_) {
            throw Error("token " + std::to_string(id) + " outside vocabulary");
        }
        char32_t cp;
        if (id < 95) {
            cp = static_cast<char32_t>(id + 32);
        } else if (id == 95) {
            cp = '\n';
        } else if (id == 96) {
            cp = '\t';
        } else {
            cp = static_cast<char32_t>(127 + (id - 97));
        }
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

const char* backend_kind_name(BackendKind k) {
    switch (k) {
        case BackendKind::replay: return "replay";
        case BackendKind::uniform_mock: return "uniform_mock";
        case BackendKind::external: return "external";
    }
    return "?";
}

namespace {

class UniformMockBackend : public Backend {
  public:
    explicit UniformMockBackend(int32_t vocab_size)
        : tokenizer_(vocab_size), vocab_size_(vocab_size) {}

    BackendKind kind() const override { return BackendKind::uniform_mock; }
    int32_t vocab_size() const override { return vocab_size_; }
    TokenId eos() const override { return tokenizer_.eos(); }
    const Tokenizer& tokenizer() const override { return tokenizer_; }

    LogProbVector next_logprobs(const TokenSeq& ctx) override {
        check_ctx(ctx, vocab_size_);
        std::vector<double> logs(vocab_size_,
                                 -std::log(static_cast<double>(vocab_size_)));
        return LogProbVector::normalized_from_logs(std::move(logs));
    }

  private:
    CharTokenizer tokenizer_;
    int32_t vocab_size_;
};

class ReplayBackend : public Backend {
  public:
    explicit ReplayBackend(const std::filesystem::path& path) : path_(path) {
        int32_t vocab = 0;
        for_each_jsonl(path, [&](size_t line, const json& obj) {
            if (!obj.contains("ctx") || !obj["ctx"].is_array()) {
                throw Error(path.string() + ":" + std::to_string(line) +
                            ": replay line needs a \"ctx\" array");
            }
            std::vector<TokenId> ctx;
            for (const auto& v : obj["ctx"]) ctx.push_back(v.get<TokenId>());

            LogProbVector lp;
            if (obj.contains("logprobs") && obj["logprobs"].is_array()) {
                lp = LogProbVector::normalized_from_logs(
                    obj["logprobs"].get<std::vector<double>>());
            } else if (obj.contains("probs") && obj["probs"].is_array()) {
                lp = LogProbVector::from_probs(
                    obj["probs"].get<std::vector<double>>());
            } else {
                throw Error(path.string() + ":" + std::to_string(line) +
                            ": replay line needs \"logprobs\" or \"probs\"");
            }
            if (vocab == 0) {
                vocab = static_cast<int32_t>(lp.size());
            } else if (vocab != static_cast<int32_t>(lp.size())) {
                throw Error(path.string() + ":" + std::to_string(line) +
                            ": inconsistent vector length");
            }
            table_.emplace(std::move(ctx), std::move(lp));
        });
        if (table_.empty()) {
            throw Error(path.string() + ": empty replay file");
        }
        vocab_size_ = vocab;
        tokenizer_ = std::make_unique<CharTokenizer>(vocab_size_);
    }

    BackendKind kind() const override { return BackendKind::replay; }
    int32_t vocab_size() const override { return vocab_size_; }
    TokenId eos() const override { return tokenizer_->eos(); }
    const Tokenizer& tokenizer() const override { return *tokenizer_; }

    LogProbVector next_logprobs(const TokenSeq& ctx) override {
        check_ctx(ctx, vocab_size_);
        auto it = table_.find(ctx.tokens);
        if (it == table_.end()) {
            throw Error("replay backend " + path_.string() +
                        " has no entry for context " + ctx_to_string(ctx));
        }
        return it->second;
    }

  private:
    std::filesystem::path path_;
    std::map<std::vector<TokenId>, LogProbVector> table_;
    std::unique_ptr<CharTokenizer> tokenizer_;
    int32_t vocab_size_ = 0;
};

class ExternalBackend : public Backend {
  public:
    ExternalBackend(const std::vector<std::string>& argv, double timeout_secs)
        : process_(argv), timeout_secs_(timeout_secs) {
        // Handshake: an empty context teaches us the vocabulary size (and
        // optionally the eos id).
        json response = request(json{{"ctx", json::array()}});
        auto lp = parse_logprobs(response);
        vocab_size_ = static_cast<int32_t>(lp.size());
        if (vocab_size_ < 2) {
            throw Error("external backend reported vocab_size < 2");
        }
        eos_ = vocab_size_ - 1;
        if (response.contains("eos") && response["eos"].is_number_integer()) {
            eos_ = response["eos"].get<TokenId>();
        }
        tokenizer_ = std::make_unique<CharTokenizer>(vocab_size_);
    }

    BackendKind kind() const override { return BackendKind::external; }
    int32_t vocab_size() const override { return vocab_size_; }
    TokenId eos() const override { return eos_; }
    const Tokenizer& tokenizer() const override { return *tokenizer_; }

    LogProbVector next_logprobs(const TokenSeq& ctx) override {
        check_ctx(ctx, vocab_size_);
        json response = request(json{{"ctx", ctx.tokens}});
        auto lp = parse_logprobs(response);
        if (static_cast<int32_t>(lp.size()) != vocab_size_) {
            throw Error("external backend returned " + std::to_string(lp.size()) +
                        " logprobs, expected " + std::to_string(vocab_size_));
        }
        return lp;
    }

  private:
    json request(const json& payload) {
        std::lock_guard<std::mutex> lock(mutex_);
        process_.write_line(payload.dump());
        std::string line = process_.read_line(timeout_secs_);
        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) {
            throw Error("external backend sent malformed JSON: " + line);
        }
        return obj;
    }

    static LogProbVector parse_logprobs(const json& response) {
        if (!response.contains("logprobs") || !response["logprobs"].is_array()) {
            throw Error("external backend response lacks \"logprobs\"");
        }
        return LogProbVector::normalized_from_logs(
            response["logprobs"].get<std::vector<double>>());
    }

    PipeProcess process_;
    std::mutex mutex_;
    double timeout_secs_;
    std::unique_ptr<CharTokenizer> tokenizer_;
    int32_t vocab_size_ = 0;
    TokenId eos_ = 0;
};

std::vector<std::string> split_command(const std::string& command) {
    std::vector<std::string> argv;
    std::istringstream is(command);
    std::string word;
    while (is >> word) argv.push_back(word);
    return argv;
}

}  // namespace

BackendPtr make_uniform_mock(int32_t vocab_size) {
    if (vocab_size < 2) throw Error("uniform mock needs vocab_size >= 2");
    return std::make_shared<UniformMockBackend>(vocab_size);
}

BackendPtr make_replay_backend(const std::filesystem::path& path) {
    return std::make_shared<ReplayBackend>(path);
}

BackendPtr make_external_backend(const std::vector<std::string>& argv,
                                 double timeout_secs) {
    return std::make_shared<ExternalBackend>(argv, timeout_secs);
}

BackendPtr make_backend(const std::string& spec) {
    if (spec.rfind("replay:", 0) == 0) {
        return make_replay_backend(spec.substr(7));
    }
    if (spec.rfind("mock:uniform:", 0) == 0) {
        int32_t v = 0;
        try {
            v = std::stoi(spec.substr(13));
        } catch (const std::exception&) {
            throw Error("bad vocab size in backend spec \"" + spec + "\"");
        }
        return make_uniform_mock(v);
    }
    if (spec.rfind("ext:", 0) == 0) {
        auto argv = split_command(spec.substr(4));
        if (argv.empty()) {
            throw Error("backend spec \"" + spec + "\" has an empty command");
        }
        return make_external_backend(argv);
    }
    throw Error("unrecognized backend spec \"" + spec +
                "\" (expected replay:PATH, mock:uniform:V, or ext:COMMAND)");
}

void assert_compatible(const Backend& a, const Backend& b) {
    if (a.vocab_size() != b.vocab_size()) {
        throw Error("vocab size mismatch: " + std::to_string(a.vocab_size()) +
                    " vs " + std::to_string(b.vocab_size()));
    }
    if (a.eos() != b.eos()) {
        throw Error("eos token mismatch: " + std::to_string(a.eos()) + " vs " +
                    std::to_string(b.eos()));
    }
    // The probe suite covers ASCII math text, tag punctuation, and digits;
    // tokenizers must agree exactly on every probe.
    static const char* kProbes[] = {
        "27/3",
        "The answer is: 6",
        "a = 27/3",
        "(A)",
        "0 1 2 3",
        "x!",
    };
    for (const char* probe : kProbes) {
        bool a_ok = true, b_ok = true;
        TokenSeq sa, sb;
        try {
            sa = a.tokenizer().encode(probe);
        } catch (const Error&) {
            a_ok = false;
        }
        try {
            sb = b.tokenizer().encode(probe);
        } catch (const Error&) {
            b_ok = false;
        }
        if (a_ok != b_ok || (a_ok && sa.tokens != sb.tokens)) {
            throw Error(std::string("tokenizers disagree on probe \"") + probe +
                        "\"");
        }
    }
}

}  // namespace alignkit
