// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#include "thinkgate/client.hpp"

#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "thinkgate/errors.hpp"

namespace thinkgate {

using nlohmann::json;

void CompletionRequest::validate() const {
    params.validate();
    if (prompt.empty()) {
        throw ConfigError("CompletionRequest: empty prompt");
    }
}

std::string to_string(FinishReason reason) {
    switch (reason) {
    case FinishReason::kStopSequence: return "stop_sequence";
    case FinishReason::kLength: return "length";
    case FinishReason::kEnd: return "end";
    }
    return "end";
}

void CompletionResult::validate() const {
    if (tokens.size() != token_logprobs.size()) {
        throw ProtocolError("CompletionResult: tokens/token_logprobs length mismatch");
    }
    if (completion_tokens != static_cast<long long>(tokens.size())) {
        throw ProtocolError("CompletionResult: completion_tokens != token count");
    }
}

std::map<std::string, double> next_token_distribution(CompletionClient& client,
                                                      const std::string& model,
                                                      const std::string& prompt,
                                                      int k,
                                                      const GenerationParams& base) {
    if (k < 1) {
        throw ConfigError("next_token_distribution: k must be >= 1");
    }
    CompletionRequest req;
    req.model = model;
    req.prompt = prompt;
    req.params = base;
    req.params.max_tokens = 1;
    req.params.logprobs_k = k;
    req.params.stop_sequences.clear();
    const CompletionResult res = client.complete(req);
    if (res.top_logprobs.empty()) {
        throw CapabilityError("endpoint returned no top_logprobs for a 1-token probe");
    }
    std::map<std::string, double> out;
    for (const auto& [token, logprob] : res.top_logprobs.front()) {
        out[token] = std::exp(logprob);
    }
    return out;
}

std::string build_completion_body(const CompletionRequest& req, bool send_repetition_penalty) {
    json body{{"model", req.model},
              {"prompt", req.prompt},
              {"max_tokens", req.params.max_tokens},
              {"temperature", req.params.temperature},
              {"top_p", req.params.top_p},
              {"stop", req.params.stop_sequences},
              {"logprobs", req.params.logprobs_k},
              {"echo", req.echo}};
    if (send_repetition_penalty) {
        body["repetition_penalty"] = req.params.repetition_penalty;
    }
    return body.dump();
}

CompletionResult parse_completion_body(const std::string& body, bool logprobs_requested) {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::exception& e) {
        throw ProtocolError(std::string("completion response is not JSON: ") + e.what());
    }
    try {
        if (!j.contains("choices") || j["choices"].empty()) {
            throw ProtocolError("completion response has no choices");
        }
        const json& choice = j["choices"][0];
        CompletionResult res;
        res.text = choice.at("text").get<std::string>();

        const std::string finish = choice.value("finish_reason", "stop");
        if (finish == "length") {
            res.finish_reason = FinishReason::kLength;
        } else if (finish == "stop" && choice.contains("stop_reason") &&
                   choice["stop_reason"].is_string()) {
            res.finish_reason = FinishReason::kStopSequence;
            res.matched_stop = choice["stop_reason"].get<std::string>();
        } else {
            res.finish_reason = FinishReason::kEnd;
        }

        if (choice.contains("logprobs") && !choice["logprobs"].is_null()) {
            const json& lp = choice["logprobs"];
            res.tokens = lp.value("tokens", std::vector<std::string>{});
            for (const auto& v : lp.value("token_logprobs", json::array())) {
                res.token_logprobs.push_back(v.is_null() ? 0.0 : v.get<double>());
            }
            for (const auto& pos : lp.value("top_logprobs", json::array())) {
                std::map<std::string, double> entry;
                if (!pos.is_null()) {
                    for (const auto& [tok, val] : pos.items()) {
                        entry[tok] = val.get<double>();
                    }
                }
                res.top_logprobs.push_back(std::move(entry));
            }
        } else if (logprobs_requested) {
            throw CapabilityError("endpoint does not expose token logprobs");
        }

        if (j.contains("usage") && j["usage"].contains("completion_tokens")) {
            res.completion_tokens = j["usage"]["completion_tokens"].get<long long>();
        } else {
            res.completion_tokens = static_cast<long long>(res.tokens.size());
        }
        res.validate();
        return res;
    } catch (const json::exception& e) {
        throw ProtocolError(std::string("malformed completion response: ") + e.what());
    }
}

ClientConfig ClientConfig::from_env() {
    ClientConfig cfg;
    if (const char* url = std::getenv("THINKGATE_BASE_URL")) {
        cfg.base_url = url;
    }
    if (const char* token = std::getenv("THINKGATE_AUTH_TOKEN")) {
        cfg.auth_token = token;
    }
    return cfg;
}

struct HttpCompletionClient::Impl {
    ClientConfig cfg;
    std::string host;   // scheme://host:port
    std::string prefix; // path prefix before /v1/completions

    std::mutex mu;
    std::condition_variable cv;
    int inflight = 0;
    int last_attempts = 0;

    explicit Impl(ClientConfig c) : cfg(std::move(c)) {
        if (cfg.base_url.empty()) {
            throw ConfigError("HttpCompletionClient: base_url not configured "
                              "(flag --endpoint or THINKGATE_BASE_URL)");
        }
        // Split scheme://authority from any path prefix.
        std::string url = cfg.base_url;
        if (!url.empty() && url.back() == '/') {
            url.pop_back();
        }
        const std::size_t scheme = url.find("://");
        const std::size_t path = scheme == std::string::npos
                                     ? url.find('/')
                                     : url.find('/', scheme + 3);
        if (path == std::string::npos) {
            host = url;
        } else {
            host = url.substr(0, path);
            prefix = url.substr(path);
        }
    }

    struct InflightGuard {
        Impl& impl;
        explicit InflightGuard(Impl& i) : impl(i) {
            std::unique_lock lock(impl.mu);
            impl.cv.wait(lock, [&] { return impl.inflight < impl.cfg.max_inflight; });
            ++impl.inflight;
        }
        ~InflightGuard() {
            {
                std::lock_guard lock(impl.mu);
                --impl.inflight;
            }
            impl.cv.notify_one();
        }
    };
};

HttpCompletionClient::HttpCompletionClient(ClientConfig cfg)
    : impl_(std::make_unique<Impl>(std::move(cfg))) {}

HttpCompletionClient::~HttpCompletionClient() = default;

int HttpCompletionClient::last_attempts() const {
    std::lock_guard lock(impl_->mu);
    return impl_->last_attempts;
}

const ClientConfig& HttpCompletionClient::config() const { return impl_->cfg; }

CompletionResult HttpCompletionClient::complete(const CompletionRequest& req) {
    req.validate();
    const std::string body = build_completion_body(req, impl_->cfg.send_repetition_penalty);
    const std::string path = impl_->prefix + "/v1/completions";

    Impl::InflightGuard guard(*impl_);

    std::string last_error;
    for (int attempt = 1; attempt <= impl_->cfg.max_attempts; ++attempt) {
        {
            std::lock_guard lock(impl_->mu);
            impl_->last_attempts = attempt;
        }
        httplib::Client http(impl_->host);
        http.set_connection_timeout(impl_->cfg.timeout_sec, 0);
        http.set_read_timeout(impl_->cfg.timeout_sec, 0);
        if (!impl_->cfg.auth_token.empty()) {
            http.set_bearer_token_auth(impl_->cfg.auth_token);
        }
        auto res = http.Post(path, body, "application/json");
        if (res) {
            if (res->status >= 200 && res->status < 300) {
                return parse_completion_body(res->body, req.params.logprobs_k >= 1);
            }
            if (res->status == 429 || res->status >= 500) {
                last_error = "HTTP " + std::to_string(res->status);
            } else {
                throw ProtocolError("endpoint rejected request: HTTP " +
                                    std::to_string(res->status) + " " + res->body);
            }
        } else {
            last_error = httplib::to_string(res.error());
        }
        if (attempt < impl_->cfg.max_attempts && impl_->cfg.retry_backoff_ms > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(
                impl_->cfg.retry_backoff_ms << (attempt - 1)));
        }
    }
    throw TransportError("completion request failed after " +
                         std::to_string(impl_->cfg.max_attempts) +
                         " attempts: " + last_error);
}

} // namespace thinkgate
