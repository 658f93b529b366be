#pragma once

#include <optional>
#include <string>
#include <vector>

#include "alignkit/backend.hpp"

namespace alignkit {

// Base model plus small tuned expert and small untuned anti-expert. All
// three must share one vocabulary; the constructor enforces pairwise
// compatibility.
struct ProxyEnsemble {
    BackendPtr base;
    BackendPtr expert;
    BackendPtr anti_expert;

    ProxyEnsemble(BackendPtr base_model, BackendPtr expert_model,
                  BackendPtr anti_expert_model);
};

struct DecodeParams {
    size_t max_new_tokens = 256;
    std::vector<std::string> stop_strings;
    double smoothing_epsilon = 1e-10;  // floor for anti-expert zeros

    // Throws Error unless max_new_tokens >= 1 and smoothing_epsilon is in
    // [0, 1e-3].
    void validate() const;
};

// Per-step audit record: the chosen token and the component log-probs it had
// under each model (expert/anti unset for plain greedy decoding).
struct DecodeStep {
    TokenId token = 0;
    double base_logprob = 0.0;
    std::optional<double> expert_logprob;
    std::optional<double> anti_logprob;
};

enum class FinishReason { eos, stop_string, length, backend_error };

const char* finish_reason_name(FinishReason r);

struct DecodeResult {
    std::string text;              // stop-string suffixes trimmed
    TokenSeq tokens;               // every generated token, in order
    std::vector<DecodeStep> steps; // one entry per generated token
    FinishReason finish = FinishReason::length;
    std::string error;             // backend failure detail, if any
};

// Combined distribution: normalize(base + expert - anti) in log space.
// Anti-expert entries below ln(eps) are floored there so a zero-probability
// anti token cannot blow up the ratio. Inputs must be normalized and of
// equal length.
LogProbVector proxy_logprobs(const LogProbVector& base,
                             const LogProbVector& expert,
                             const LogProbVector& anti, double eps);

// Greedy argmax decoding (ties resolved to the lowest token id) until eos, a
// stop string, or max_new_tokens. A mid-decode backend failure returns the
// partial result with finish=backend_error instead of throwing.
DecodeResult greedy_decode(Backend& backend, const std::string& prompt,
                           const DecodeParams& params);

// Greedy decoding over proxy_logprobs at every step.
DecodeResult proxy_decode(const ProxyEnsemble& ensemble, const std::string& prompt,
                          const DecodeParams& params);

}  // namespace alignkit
