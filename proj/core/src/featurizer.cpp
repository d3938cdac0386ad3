// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#include "thinkgate/featurizer.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "thinkgate/errors.hpp"

namespace thinkgate {

using nlohmann::json;

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace

std::vector<std::vector<double>>
HashedBowFeaturizer::featurize(const std::vector<std::string>& texts) {
    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
        std::vector<double> v(dim_, 0.0);
        std::size_t i = 0;
        while (i < text.size()) {
            while (i < text.size() && !std::isalnum(static_cast<unsigned char>(text[i]))) ++i;
            std::size_t b = i;
            while (i < text.size() && std::isalnum(static_cast<unsigned char>(text[i]))) ++i;
            if (i == b) continue;
            std::string word;
            word.reserve(i - b);
            for (std::size_t k = b; k < i; ++k) {
                word.push_back(
                    static_cast<char>(std::tolower(static_cast<unsigned char>(text[k]))));
            }
            const std::uint64_t h = fnv1a(word);
            const double sign = (h >> 63) ? 1.0 : -1.0;
            v[h % dim_] += sign;
        }
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (norm > 0.0) {
            for (double& x : v) x /= norm;
        }
        out.push_back(std::move(v));
    }
    return out;
}

EmbeddingsFeaturizer::EmbeddingsFeaturizer(std::string base_url, std::string model,
                                           std::string auth_token)
    : base_url_(std::move(base_url)), model_(std::move(model)),
      auth_token_(std::move(auth_token)) {
    if (base_url_.empty()) {
        throw ConfigError("EmbeddingsFeaturizer: base_url not configured");
    }
    while (!base_url_.empty() && base_url_.back() == '/') {
        base_url_.pop_back();
    }
}

std::vector<std::vector<double>>
EmbeddingsFeaturizer::featurize(const std::vector<std::string>& texts) {
    httplib::Client http(base_url_);
    http.set_read_timeout(300, 0);
    if (!auth_token_.empty()) {
        http.set_bearer_token_auth(auth_token_);
    }
    const json body{{"model", model_}, {"input", texts}};
    auto res = http.Post("/v1/embeddings", body.dump(), "application/json");
    if (!res) {
        throw TransportError("embeddings request failed: " + httplib::to_string(res.error()));
    }
    if (res->status < 200 || res->status >= 300) {
        throw ProtocolError("embeddings endpoint returned HTTP " + std::to_string(res->status));
    }
    try {
        const json j = json::parse(res->body);
        std::vector<std::vector<double>> out(texts.size());
        for (const auto& item : j.at("data")) {
            const std::size_t index = item.at("index").get<std::size_t>();
            if (index >= out.size()) {
                throw ProtocolError("embeddings response index out of range");
            }
            out[index] = item.at("embedding").get<std::vector<double>>();
        }
        for (const auto& v : out) {
            if (v.empty()) {
                throw ProtocolError("embeddings response missing an input");
            }
        }
        return out;
    } catch (const json::exception& e) {
        throw ProtocolError(std::string("malformed embeddings response: ") + e.what());
    }
}

std::unique_ptr<Featurizer> make_featurizer(const std::string& kind, const std::string& base_url,
                                            const std::string& model,
                                            const std::string& auth_token) {
    if (kind == "hashed") {
        return std::make_unique<HashedBowFeaturizer>();
    }
    if (kind == "embeddings") {
        return std::make_unique<EmbeddingsFeaturizer>(base_url, model, auth_token);
    }
    throw ConfigError("unknown featurizer: " + kind + " (expected hashed|embeddings)");
}

} // namespace thinkgate
