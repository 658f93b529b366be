#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace alignkit {

using TokenId = int32_t;

struct TokenSeq {
    std::vector<TokenId> tokens;
    int32_t vocab_size = 0;

    void push(TokenId id) { tokens.push_back(id); }
    size_t size() const { return tokens.size(); }
    bool operator==(const TokenSeq&) const = default;
};

// Normalized next-token distribution in log space: logsumexp(values) == 0
// within 1e-6, no NaN, -inf allowed for impossible tokens.
struct LogProbVector {
    std::vector<double> values;

    size_t size() const { return values.size(); }
    double operator[](size_t i) const { return values[i]; }

    // Renormalization barrier applied at every backend boundary. Throws on
    // NaN, empty vectors, or an allee-inf distribution.
    static LogProbVector normalized_from_logs(std::vector<double> logs);
    static LogProbVector from_probs(const std::vector<double>& probs);

    bool is_normalized(double tol = 1e-6) const;
    // Lowest index among maxima: the documented greedy tie-break.
    TokenId argmax() const;
};

double logsumexp(const std::vector<double>& values);

// Token ids are opaque integers; no real tokenizer lives in this toolkit.
// Implementations must keep encode(decode(tokens)) == tokens for token
// sequences the backend produced.
class Tokenizer {
  public:
    virtual ~Tokenizer() = default;
    virtual int32_t vocab_size() const = 0;
    virtual TokenId eos() const = 0;
    // Throws Error when text contains characters outside the vocabulary.
    virtual TokenSeq encode(const std::string& text) const = 0;
    virtual std::string decode(const TokenSeq& seq) const = 0;
};

// Character-level map good enough to drive replay and mock backends through
// realistic text: ids 0..94 <-> ASCII 32..126, id 95 <-> '\n', id 96 <->
// '\t', ids 97+ <-> codepoints from 127 up. The last id is eos and decodes
// to "".
class CharTokenizer : public Tokenizer {
  public:
    explicit CharTokenizer(int32_t vocab_size);
    int32_t vocab_size() const override { return vocab_size_; }
    TokenId eos() const override { return vocab_size_ - 1; }
    TokenSeq encode(const std::string& text) const override;
    std::string decode(const TokenSeq& seq) const override;

  private:
    int32_t vocab_size_;
};

enum class BackendKind { replay, uniform_mock, external };

const char* backend_kind_name(BackendKind k);

// A next-token-distribution provider. Thread safety: replay and mock
// backends are immutable and shareable; an external backend serializes its
// requests, callers wanting parallelism open one handle per worker.
class Backend {
  public:
    virtual ~Backend() = default;
    virtual BackendKind kind() const = 0;
    virtual int32_t vocab_size() const = 0;
    virtual TokenId eos() const = 0;
    virtual const Tokenizer& tokenizer() const = 0;
    // Always returns a normalized vector of length vocab_size.
    virtual LogProbVector next_logprobs(const TokenSeq& ctx) = 0;
};

using BackendPtr = std::shared_ptr<Backend>;

// Uniform distribution over the whole vocabulary, any context.
BackendPtr make_uniform_mock(int32_t vocab_size);

// Fixture-driven backend: JSONL lines {"ctx":[ids],"logprobs":[floats]}
// (or {"ctx":[ids],"probs":[floats]}, logged on load). Lookup is by exact
// context; a missing context is an error naming it.
BackendPtr make_replay_backend(const std::filesystem::path& path);

// Child process speaking line-delimited JSON on stdin/stdout:
//   request  {"ctx":[ids]}
//   response {"logprobs":[floats]} (optionally {"eos":id} on the first
//            response; default eos is vocab_size-1)
// The vocabulary size is learned from a handshake request with empty ctx.
// Responses pass the same renormalization barrier as every other kind.
BackendPtr make_external_backend(const std::vector<std::string>& argv,
                                 double timeout_secs = 30.0);

// Backend spec strings: "replay:PATH" | "mock:uniform:V" | "ext:COMMAND".
BackendPtr make_backend(const std::string& spec);

// Vocabulary size, eos id, and tokenizer agreement over a fixed probe-string
// suite. Throws Error naming the first divergence.
void assert_compatible(const Backend& a, const Backend& b);

}  // namespace alignkit
