// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "thinkgate/client.hpp"

namespace thinkgate {

/// Next-token distribution served when the prompt ends with `suffix`.
struct DistributionRule {
    std::string suffix;
    std::map<std::string, double> next; // token -> probability, entries in (0,1]
};

/// Token stream served when the prompt ends with `anchor` followed by a
/// prefix of the stream; generation resumes after the consumed prefix, so a
/// single rule serves both one-shot and chunked (stop-bounded) requests.
struct ContinuationRule {
    std::string anchor;
    std::vector<std::string> tokens;
    std::vector<double> token_logprobs; // parallel to tokens; 0.0 when unscripted
};

/// Deterministic scripted language model. Lookup prefers the continuation
/// or distribution with the longest matched suffix; ties break toward the
/// lexicographically smaller pattern. Distribution-driven generation walks
/// greedily by argmax unless the script declares a seed, in which case
/// tokens are sampled with an RNG keyed on (seed, prompt) so the same
/// request always yields the same bytes.
class ScriptedModel {
public:
    static ScriptedModel load_script(const std::string& path);
    static ScriptedModel from_json(const nlohmann::json& j,
                                   const std::string& origin = "<memory>");
    nlohmann::json to_json() const;
    void save(const std::string& path) const;

    CompletionResult complete(const CompletionRequest& req) const;

    /// Deterministic embedding of a text (hashed projection, unit norm).
    std::vector<double> embed(const std::string& text) const;

    const std::string& model_name() const { return model_name_; }
    int embedding_dim() const { return embedding_dim_; }
    const std::vector<DistributionRule>& distributions() const { return distributions_; }
    const std::vector<ContinuationRule>& continuations() const { return continuations_; }

    void add_distribution(DistributionRule rule);
    void add_continuation(ContinuationRule rule);
    void set_default(std::map<std::string, double> next);
    void set_model_name(std::string name) { model_name_ = std::move(name); }
    void set_seed(std::uint64_t seed) { seed_ = seed; }

private:
    std::string model_name_; // empty accepts any requested model id
    std::vector<DistributionRule> distributions_;
    std::vector<ContinuationRule> continuations_;
    std::optional<std::map<std::string, double>> default_next_;
    std::optional<std::uint64_t> seed_;
    int embedding_dim_ = 16;

    const std::map<std::string, double>* lookup_distribution(const std::string& prompt) const;
    static void validate_distribution(const std::string& label,
                                      const std::map<std::string, double>& next);
};

/// In-process CompletionClient over a scripted model.
class ScriptedClient : public CompletionClient {
public:
    explicit ScriptedClient(std::shared_ptr<const ScriptedModel> model)
        : model_(std::move(model)) {}

    CompletionResult complete(const CompletionRequest& req) override {
        return model_->complete(req);
    }

    const ScriptedModel& model() const { return *model_; }

private:
    std::shared_ptr<const ScriptedModel> model_;
};

/// HTTP face of a scripted model: the same wire contract the HttpCompletionClient
/// speaks (/v1/completions plus /v1/embeddings). Shutdown is graceful.
class MockServer {
public:
    /// Binds to host:port; port 0 picks a free port.
    MockServer(std::shared_ptr<const ScriptedModel> model, const std::string& host = "127.0.0.1",
               int port = 0);
    ~MockServer();

    MockServer(const MockServer&) = delete;
    MockServer& operator=(const MockServer&) = delete;

    int port() const;
    std::string base_url() const;
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace thinkgate
