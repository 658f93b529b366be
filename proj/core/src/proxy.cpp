#include "alignkit/proxy.hpp"

#include <cmath>
#include <limits>

#include "alignkit/error.hpp"

namespace alignkit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Shared decode loop; `step_fn` produces the next distribution plus the
// audit entry for the chosen token.
template <typename StepFn>
DecodeResult decode_loop(const Tokenizer& tokenizer, TokenId eos,
                         const std::string& prompt, const DecodeParams& params,
                         StepFn&& step_fn) {
    params.validate();
    DecodeResult result;
    TokenSeq ctx = tokenizer.encode(prompt);
    const size_t prompt_len = ctx.size();
    result.tokens.vocab_size = ctx.vocab_size;

    while (result.tokens.size() < params.max_new_tokens) {
        LogProbVector combined;
        DecodeStep step;
        try {
            combined = step_fn(ctx, step);
        } catch (const Error& e) {
            result.finish = FinishReason::backend_error;
            result.error = e.what();
            return result;
        }
        TokenId next = combined.argmax();
        if (next == eos) {
            result.finish = FinishReason::eos;
            return result;
        }
        step.token = next;
        result.steps.push_back(step);
        result.tokens.push(next);
        ctx.push(next);

        result.text = tokenizer.decode(
            TokenSeq{std::vector<TokenId>(ctx.tokens.begin() + prompt_len,
                                          ctx.tokens.end()),
                     ctx.vocab_size});
        for (const auto& stop : params.stop_strings) {
            if (stop.empty()) continue;
            size_t at = result.text.find(stop);
            if (at != std::string::npos) {
                result.text = result.text.substr(0, at + stop.size());
                result.finish = FinishReason::stop_string;
                return result;
            }
        }
    }
    result.finish = FinishReason::length;
    return result;
}

}  // namespace

ProxyEnsemble::ProxyEnsemble(BackendPtr base_model, BackendPtr expert_model,
                             BackendPtr anti_expert_model)
    : base(std::move(base_model)),
      expert(std::move(expert_model)),
      anti_expert(std::move(anti_expert_model)) {
    if (!base || !expert || !anti_expert) {
        throw Error("proxy ensemble needs base, expert and anti-expert");
    }
    assert_compatible(*base, *expert);
    assert_compatible(*base, *anti_expert);
    assert_compatible(*expert, *anti_expert);
}

void DecodeParams::validate() const {
    if (max_new_tokens < 1) {
        throw Error("max_new_tokens must be >= 1");
    }
    if (!(smoothing_epsilon >= 0.0) || smoothing_epsilon > 1e-3) {
        throw Error("smoothing_epsilon must be in [0, 1e-3]");
    }
}

const char* finish_reason_name(FinishReason r) {
    switch (r) {
        case FinishReason::eos: return "eos";
        case FinishReason::stop_string: return "stop_string";
        case FinishReason::length: return "length";
        case FinishReason::backend_error: return "backend_error";
    }
    return "?";
}

LogProbVector proxy_logprobs(const LogProbVector& base,
                             const LogProbVector& expert,
                             const LogProbVector& anti, double eps) {
    if (base.size() != expert.size() || base.size() != anti.size()) {
        throw Error("proxy_logprobs: length mismatch (" +
                    std::to_string(base.size()) + ", " +
                    std::to_string(expert.size()) + ", " +
                    std::to_string(anti.size()) + ")");
    }
    const double floor = eps > 0.0 ? std::log(eps) : kNegInf;
    std::vector<double> combined(base.size());
    for (size_t i = 0; i < base.size(); ++i) {
        double anti_term = std::max(anti[i], floor);
        if (base[i] == kNegInf || expert[i] == kNegInf) {
            combined[i] = kNegInf;
            continue;
        }
        if (anti_term == kNegInf) {
            // Only reachable with eps == 0 and a hard zero in the
            // anti-expert: the ratio is unbounded.
            throw Error("proxy_logprobs: anti-expert zero probability with "
                        "smoothing disabled");
        }
        combined[i] = base[i] + expert[i] - anti_term;
    }
    return LogProbVector::normalized_from_logs(std::move(combined));
}

DecodeResult greedy_decode(Backend& backend, const std::string& prompt,
                           const DecodeParams& params) {
    return decode_loop(backend.tokenizer(), backend.eos(), prompt, params,
                       [&](const TokenSeq& ctx, DecodeStep& step) {
                           LogProbVector lp = backend.next_logprobs(ctx);
                           step.base_logprob = lp[lp.argmax()];
                           return lp;
                       });
}

DecodeResult proxy_decode(const ProxyEnsemble& ensemble, const std::string& prompt,
                          const DecodeParams& params) {
    return decode_loop(
        ensemble.base->tokenizer(), ensemble.base->eos(), prompt, params,
        [&](const TokenSeq& ctx, DecodeStep& step) {
            LogProbVector base = ensemble.base->next_logprobs(ctx);
            LogProbVector expert = ensemble.expert->next_logprobs(ctx);
            LogProbVector anti = ensemble.anti_expert->next_logprobs(ctx);
            LogProbVector combined =
                proxy_logprobs(base, expert, anti, params.smoothing_epsilon);
            TokenId chosen = combined.argmax();
            step.base_logprob = base[chosen];
            step.expert_logprob = expert[chosen];
            step.anti_logprob = anti[chosen];
            return combined;
        });
}

}  // namespace alignkit
