// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#include "thinkgate/distribution.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace thinkgate {

namespace {
constexpr double kSumTolerance = 1e-9;
}

AnswerDistribution::AnswerDistribution(std::vector<std::string> candidates,
                                       std::vector<double> probs)
    : candidates_(std::move(candidates)), probs_(std::move(probs)) {
    if (candidates_.empty()) {
        throw std::invalid_argument("AnswerDistribution: needs at least one candidate");
    }
    if (candidates_.size() != probs_.size()) {
        throw std::invalid_argument("AnswerDistribution: candidate/probability count mismatch");
    }
    double sum = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0)) {
            throw std::invalid_argument("AnswerDistribution: negative probability");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
        throw std::invalid_argument("AnswerDistribution: probabilities sum to " +
                                    std::to_string(sum) + ", expected 1");
    }
    std::set<std::string> seen(candidates_.begin(), candidates_.end());
    if (seen.size() != candidates_.size()) {
        throw std::invalid_argument("AnswerDistribution: duplicate candidate label");
    }
}

AnswerDistribution AnswerDistribution::uniform(std::vector<std::string> candidates) {
    const std::size_t n = candidates.size();
    if (n == 0) {
        throw std::invalid_argument("AnswerDistribution: needs at least one candidate");
    }
    return AnswerDistribution(std::move(candidates),
                              std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

std::optional<double> AnswerDistribution::prob_of(std::string_view candidate) const {
    for (std::size_t i = 0; i < candidates_.size(); ++i) {
        if (candidates_[i] == candidate) {
            return probs_[i];
        }
    }
    return std::nullopt;
}

} // namespace thinkgate
