// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "thinkgate/generation.hpp"

namespace thinkgate {

struct CompletionRequest {
    std::string model;
    std::string prompt;
    GenerationParams params;
    bool echo = false;

    void validate() const;
};

enum class FinishReason { kStopSequence, kLength, kEnd };

std::string to_string(FinishReason reason);

/// Continuation text plus token-level logprobs: the raw material for every
/// probability estimate in this project.
struct CompletionResult {
    std::string text; // matched stop text excluded
    std::vector<std::string> tokens;
    std::vector<double> token_logprobs;
    std::vector<std::map<std::string, double>> top_logprobs; // per position
    FinishReason finish_reason = FinishReason::kEnd;
    std::string matched_stop; // which stop sequence fired, when one did
    long long completion_tokens = 0;

    void validate() const; // lengths line up; completion_tokens == tokens.size()
};

/// Transport-agnostic completion interface; implemented by the HTTP client
/// and by the in-process scripted model.
class CompletionClient {
public:
    virtual ~CompletionClient() = default;
    virtual CompletionResult complete(const CompletionRequest& req) = 0;
};

/// Raw next-token distribution at the end of `prompt`: a single-token
/// completion with k top alternatives, read out as exp(logprob) without
/// renormalizing over the k entries.
std::map<std::string, double> next_token_distribution(CompletionClient& client,
                                                      const std::string& model,
                                                      const std::string& prompt,
                                                      int k,
                                                      const GenerationParams& base = {});

struct ClientConfig {
    std::string base_url; // e.g. http://127.0.0.1:8000
    std::string auth_token;
    int max_attempts = 3;
    int retry_backoff_ms = 250; // doubled per retry
    bool send_repetition_penalty = true;
    int max_inflight = 16;
    int timeout_sec = 300;

    /// Reads THINKGATE_BASE_URL / THINKGATE_AUTH_TOKEN; flags override.
    static ClientConfig from_env();
};

/// Adapter to an OpenAI-compatible /v1/completions endpoint that returns
/// token logprobs. Retries transient transport failures with bounded
/// exponential backoff; retried request bodies are byte-identical.
/// Shareable across threads; max_inflight bounds concurrent requests.
class HttpCompletionClient : public CompletionClient {
public:
    explicit HttpCompletionClient(ClientConfig cfg);
    ~HttpCompletionClient() override;

    CompletionResult complete(const CompletionRequest& req) override;

    /// Attempts spent on the most recent request (for diagnostics).
    int last_attempts() const;

    const ClientConfig& config() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Builds the JSON request body sent to /v1/completions. Exposed so tests
/// can pin the wire format without a live socket.
std::string build_completion_body(const CompletionRequest& req, bool send_repetition_penalty);

/// Parses a /v1/completions response body into a CompletionResult.
/// Throws ProtocolError on malformed bodies and CapabilityError when the
/// endpoint omitted logprobs that were requested.
CompletionResult parse_completion_body(const std::string& body, bool logprobs_requested);

} // namespace thinkgate
