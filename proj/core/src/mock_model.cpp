// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#include "thinkgate/mock_model.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <random>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "thinkgate/errors.hpp"

namespace thinkgate {

using nlohmann::json;

namespace {

constexpr double kMassTolerance = 1e-9;

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 14695981039346656037ull) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

bool ends_with(std::string_view text, std::string_view suffix) {
    return text.size() >= suffix.size() &&
           text.compare(text.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct EmittedToken {
    std::string text;
    double logprob;
    std::map<std::string, double> top; // token -> logprob
};

std::map<std::string, double> top_k_logprobs(const std::map<std::string, double>& next, int k) {
    std::vector<std::pair<std::string, double>> entries(next.begin(), next.end());
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (static_cast<int>(entries.size()) > k) {
        entries.resize(static_cast<std::size_t>(k));
    }
    std::map<std::string, double> out;
    for (const auto& [tok, p] : entries) {
        out[tok] = std::log(p);
    }
    return out;
}

} // namespace

void ScriptedModel::validate_distribution(const std::string& label,
                                          const std::map<std::string, double>& next) {
    if (next.empty()) {
        throw ScriptError("distribution '" + label + "' is empty");
    }
    double sum = 0.0;
    for (const auto& [tok, p] : next) {
        if (!(p > 0.0) || p > 1.0) {
            throw ScriptError("distribution '" + label + "': probability of token '" + tok +
                              "' must be in (0, 1]");
        }
        sum += p;
    }
    if (sum > 1.0 + kMassTolerance) {
        throw ScriptError("distribution '" + label + "' sums to " + std::to_string(sum) +
                          " (> 1)");
    }
}

void ScriptedModel::add_distribution(DistributionRule rule) {
    validate_distribution(rule.suffix, rule.next);
    distributions_.push_back(std::move(rule));
}

void ScriptedModel::add_continuation(ContinuationRule rule) {
    if (rule.token_logprobs.empty()) {
        rule.token_logprobs.assign(rule.tokens.size(), 0.0);
    }
    if (rule.token_logprobs.size() != rule.tokens.size()) {
        throw ScriptError("continuation '" + rule.anchor +
                          "': token_logprobs length differs from tokens");
    }
    for (double lp : rule.token_logprobs) {
        if (lp > 0.0) {
            throw ScriptError("continuation '" + rule.anchor + "': logprob above 0");
        }
    }
    continuations_.push_back(std::move(rule));
}

void ScriptedModel::set_default(std::map<std::string, double> next) {
    validate_distribution("<default>", next);
    default_next_ = std::move(next);
}

ScriptedModel ScriptedModel::from_json(const json& j, const std::string& origin) {
    ScriptedModel m;
    try {
        m.model_name_ = j.value("model", std::string());
        if (j.contains("seed")) {
            m.seed_ = j.at("seed").get<std::uint64_t>();
        }
        if (j.contains("embedding_dim")) {
            m.embedding_dim_ = j.at("embedding_dim").get<int>();
            if (m.embedding_dim_ < 1) {
                throw ScriptError("embedding_dim must be >= 1");
            }
        }
        if (j.contains("default")) {
            m.set_default(j.at("default").get<std::map<std::string, double>>());
        }
        for (const auto& dj : j.value("distributions", json::array())) {
            DistributionRule rule;
            rule.suffix = dj.at("suffix").get<std::string>();
            rule.next = dj.at("next").get<std::map<std::string, double>>();
            m.add_distribution(std::move(rule));
        }
        for (const auto& cj : j.value("continuations", json::array())) {
            ContinuationRule rule;
            rule.anchor = cj.at("anchor").get<std::string>();
            rule.tokens = cj.at("tokens").get<std::vector<std::string>>();
            if (cj.contains("token_logprobs")) {
                rule.token_logprobs = cj.at("token_logprobs").get<std::vector<double>>();
            }
            m.add_continuation(std::move(rule));
        }
    } catch (const json::exception& e) {
        throw ScriptError("script " + origin + ": " + e.what());
    }
    return m;
}

ScriptedModel ScriptedModel::load_script(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ScriptError("cannot open script file: " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ScriptError("script " + path + " failed to parse: " + e.what());
    }
    return from_json(j, path);
}

json ScriptedModel::to_json() const {
    json j;
    if (!model_name_.empty()) j["model"] = model_name_;
    if (seed_) j["seed"] = *seed_;
    j["embedding_dim"] = embedding_dim_;
    if (default_next_) j["default"] = *default_next_;
    json dists = json::array();
    for (const auto& d : distributions_) {
        dists.push_back(json{{"suffix", d.suffix}, {"next", d.next}});
    }
    j["distributions"] = std::move(dists);
    json conts = json::array();
    for (const auto& c : continuations_) {
        conts.push_back(json{{"anchor", c.anchor},
                             {"tokens", c.tokens},
                             {"token_logprobs", c.token_logprobs}});
    }
    j["continuations"] = std::move(conts);
    return j;
}

void ScriptedModel::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) {
        throw ScriptError("cannot write script file: " + path);
    }
    out << to_json().dump(2) << "\n";
}

const std::map<std::string, double>*
ScriptedModel::lookup_distribution(const std::string& prompt) const {
    const DistributionRule* best = nullptr;
    for (const auto& rule : distributions_) {
        if (!ends_with(prompt, rule.suffix)) continue;
        if (!best || rule.suffix.size() > best->suffix.size() ||
            (rule.suffix.size() == best->suffix.size() && rule.suffix < best->suffix)) {
            best = &rule;
        }
    }
    if (best) return &best->next;
    if (default_next_) return &*default_next_;
    return nullptr;
}

CompletionResult ScriptedModel::complete(const CompletionRequest& req) const {
    req.validate();
    if (!model_name_.empty() && req.model != model_name_) {
        throw ProtocolError("unknown model id: " + req.model);
    }

    // Longest (anchor + consumed stream prefix) suffix match wins.
    const ContinuationRule* rule = nullptr;
    std::size_t resume = 0;
    std::size_t best_len = 0;
    for (const auto& c : continuations_) {
        std::string acc = c.anchor;
        for (std::size_t j = 0; j <= c.tokens.size(); ++j) {
            if (j > 0) acc += c.tokens[j - 1];
            // Matches at different consumed lengths are independent: a longer
            // consumed prefix can be a suffix of the prompt when a shorter
            // one is not, so every j is checked.
            if (!ends_with(req.prompt, acc)) continue;
            const bool better =
                acc.size() > best_len ||
                (acc.size() == best_len && (!rule || c.anchor < rule->anchor));
            if (better) {
                rule = &c;
                resume = j;
                best_len = acc.size();
            }
        }
    }

    std::vector<EmittedToken> emitted;
    std::string accum;
    FinishReason finish = FinishReason::kEnd;
    std::string matched_stop;
    std::size_t text_end = std::string::npos;

    auto check_stop = [&](std::size_t prev_len) {
        std::size_t best_pos = std::string::npos;
        for (const auto& stop : req.params.stop_sequences) {
            if (stop.empty()) continue;
            const std::size_t from =
                prev_len >= stop.size() - 1 ? prev_len - (stop.size() - 1) : 0;
            const std::size_t pos = accum.find(stop, from);
            if (pos != std::string::npos && (best_pos == std::string::npos || pos < best_pos)) {
                best_pos = pos;
                matched_stop = stop;
            }
        }
        if (best_pos != std::string::npos) {
            finish = FinishReason::kStopSequence;
            text_end = best_pos;
            return true;
        }
        return false;
    };

    auto emit = [&](EmittedToken token) {
        const std::size_t prev_len = accum.size();
        accum += token.text;
        emitted.push_back(std::move(token));
        if (check_stop(prev_len)) return true;
        if (static_cast<int>(emitted.size()) >= req.params.max_tokens) {
            finish = FinishReason::kLength;
            return true;
        }
        return false;
    };

    if (rule) {
        for (std::size_t j = resume; j < rule->tokens.size(); ++j) {
            EmittedToken t{rule->tokens[j],
                           rule->token_logprobs[j],
                           {{rule->tokens[j], rule->token_logprobs[j]}}};
            if (emit(std::move(t))) break;
        }
    } else {
        // Greedy (or seeded) walk over the distribution rules.
        std::string prompt = req.prompt;
        while (true) {
            const auto* next = lookup_distribution(prompt);
            if (!next) break;
            std::string tok;
            if (seed_) {
                std::mt19937_64 rng(*seed_ ^ fnv1a(prompt));
                double total = 0.0;
                for (const auto& [t, p] : *next) total += p;
                std::uniform_real_distribution<double> uni(0.0, total);
                double r = uni(rng);
                for (const auto& [t, p] : *next) {
                    tok = t;
                    r -= p;
                    if (r <= 0.0) break;
                }
            } else {
                double best_p = -1.0;
                for (const auto& [t, p] : *next) {
                    if (p > best_p) {
                        best_p = p;
                        tok = t;
                    }
                }
            }
            const double p = next->at(tok);
            EmittedToken t{tok, std::log(p), top_k_logprobs(*next, req.params.logprobs_k)};
            prompt += tok;
            if (emit(std::move(t))) break;
        }
    }

    CompletionResult res;
    res.text = text_end == std::string::npos ? accum : accum.substr(0, text_end);
    for (auto& t : emitted) {
        res.tokens.push_back(t.text);
        res.token_logprobs.push_back(t.logprob);
        res.top_logprobs.push_back(std::move(t.top));
    }
    res.finish_reason = finish;
    res.matched_stop = matched_stop;
    res.completion_tokens = static_cast<long long>(res.tokens.size());
    res.validate();
    return res;
}

std::vector<double> ScriptedModel::embed(const std::string& text) const {
    std::vector<double> v(static_cast<std::size_t>(embedding_dim_));
    double norm = 0.0;
    for (int d = 0; d < embedding_dim_; ++d) {
        const std::uint64_t h = fnv1a(text, fnv1a(std::to_string(d)));
        // Map to [-1, 1) deterministically.
        v[static_cast<std::size_t>(d)] =
            static_cast<double>(h >> 11) / static_cast<double>(1ull << 52) - 1.0;
        norm += v[static_cast<std::size_t>(d)] * v[static_cast<std::size_t>(d)];
    }
    norm = std::sqrt(norm);
    if (norm > 0.0) {
        for (double& x : v) x /= norm;
    }
    return v;
}

struct MockServer::Impl {
    std::shared_ptr<const ScriptedModel> model;
    httplib::Server server;
    std::thread thread;
    std::string host;
    int port = 0;
    std::atomic<bool> stopped{false};
};

namespace {

json error_body(const std::string& message) {
    return json{{"error", {{"message", message}, {"type", "invalid_request_error"}}}};
}

} // namespace

MockServer::MockServer(std::shared_ptr<const ScriptedModel> model, const std::string& host,
                       int port)
    : impl_(std::make_unique<Impl>()) {
    impl_->model = std::move(model);
    impl_->host = host;

    impl_->server.Post("/v1/completions", [this](const httplib::Request& hreq,
                                                 httplib::Response& hres) {
        json body;
        try {
            body = json::parse(hreq.body);
        } catch (const json::exception& e) {
            hres.status = 400;
            hres.set_content(error_body(std::string("bad JSON: ") + e.what()).dump(),
                             "application/json");
            return;
        }
        try {
            CompletionRequest req;
            req.model = body.value("model", std::string());
            req.prompt = body.value("prompt", std::string());
            req.params.max_tokens = body.value("max_tokens", 16);
            req.params.temperature = body.value("temperature", 1.0);
            req.params.top_p = body.value("top_p", 1.0);
            req.params.logprobs_k = std::max(1, body.value("logprobs", 1));
            if (body.contains("repetition_penalty")) {
                req.params.repetition_penalty = body["repetition_penalty"].get<double>();
            }
            if (body.contains("stop")) {
                req.params.stop_sequences = body["stop"].get<std::vector<std::string>>();
            }
            req.echo = body.value("echo", false);

            const CompletionResult res = impl_->model->complete(req);

            json top = json::array();
            for (const auto& pos : res.top_logprobs) {
                top.push_back(pos);
            }
            json choice{{"text", res.text},
                        {"index", 0},
                        {"finish_reason",
                         res.finish_reason == FinishReason::kLength ? "length" : "stop"},
                        {"stop_reason", res.finish_reason == FinishReason::kStopSequence
                                            ? json(res.matched_stop)
                                            : json()},
                        {"logprobs",
                         {{"tokens", res.tokens},
                          {"token_logprobs", res.token_logprobs},
                          {"top_logprobs", std::move(top)}}}};
            json out{{"object", "text_completion"},
                     {"model", req.model},
                     {"choices", json::array({std::move(choice)})},
                     {"usage", {{"completion_tokens", res.completion_tokens}}}};
            hres.set_content(out.dump(), "application/json");
        } catch (const ProtocolError& e) {
            hres.status = 404;
            hres.set_content(error_body(e.what()).dump(), "application/json");
        } catch (const std::exception& e) {
            hres.status = 400;
            hres.set_content(error_body(e.what()).dump(), "application/json");
        }
    });

    impl_->server.Post("/v1/embeddings", [this](const httplib::Request& hreq,
                                                httplib::Response& hres) {
        try {
            const json body = json::parse(hreq.body);
            json data = json::array();
            std::size_t index = 0;
            for (const auto& item : body.at("input")) {
                data.push_back(json{{"object", "embedding"},
                                    {"index", index++},
                                    {"embedding", impl_->model->embed(item.get<std::string>())}});
            }
            hres.set_content(json{{"object", "list"}, {"data", std::move(data)}}.dump(),
                             "application/json");
        } catch (const std::exception& e) {
            hres.status = 400;
            hres.set_content(error_body(e.what()).dump(), "application/json");
        }
    });

    if (port == 0) {
        impl_->port = impl_->server.bind_to_any_port(host);
        if (impl_->port <= 0) {
            throw TransportError("mock server failed to bind on " + host);
        }
    } else {
        if (!impl_->server.bind_to_port(host, port)) {
            throw TransportError("mock server failed to bind " + host + ":" +
                                 std::to_string(port));
        }
        impl_->port = port;
    }
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
}

MockServer::~MockServer() { stop(); }

int MockServer::port() const { return impl_->port; }

std::string MockServer::base_url() const {
    return "http://" + impl_->host + ":" + std::to_string(impl_->port);
}

void MockServer::stop() {
    if (!impl_->stopped.exchange(true)) {
        impl_->server.stop();
        if (impl_->thread.joinable()) {
            impl_->thread.join();
        }
    }
}

} // namespace thinkgate
