// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <vector>

namespace thinkgate {

/// Maps texts to fixed-dimension real feature vectors for the kernel
/// dependence estimate.
class Featurizer {
public:
    virtual ~Featurizer() = default;
    virtual std::vector<std::vector<double>> featurize(const std::vector<std::string>& texts) = 0;
    virtual std::string name() const = 0;
};

/// Hermetic default: hashed bag-of-words with a sign trick, projected to a
/// fixed dimension and L2-normalized. Deterministic across runs and
/// platforms.
class HashedBowFeaturizer : public Featurizer {
public:
    explicit HashedBowFeaturizer(std::size_t dim = 64) : dim_(dim) {}
    std::vector<std::vector<double>> featurize(const std::vector<std::string>& texts) override;
    std::string name() const override { return "hashed"; }

private:
    std::size_t dim_;
};

/// Live mode: POST {base_url}/v1/embeddings with {model, input:[texts]},
/// reading data[i].embedding.
class EmbeddingsFeaturizer : public Featurizer {
public:
    EmbeddingsFeaturizer(std::string base_url, std::string model, std::string auth_token = "");
    std::vector<std::vector<double>> featurize(const std::vector<std::string>& texts) override;
    std::string name() const override { return "embeddings"; }

private:
    std::string base_url_;
    std::string model_;
    std::string auth_token_;
};

std::unique_ptr<Featurizer> make_featurizer(const std::string& kind, const std::string& base_url,
                                            const std::string& model,
                                            const std::string& auth_token);

} // namespace thinkgate
