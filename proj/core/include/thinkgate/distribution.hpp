// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace thinkgate {

/// Normalized probability vector over answer candidates.
///
/// Construction validates: probabilities sum to 1 within 1e-9, every
/// probability is non-negative, candidate labels are unique and at least
/// one candidate is present. Instances are immutable after construction.
class AnswerDistribution {
public:
    AnswerDistribution(std::vector<std::string> candidates, std::vector<double> probs);

    static AnswerDistribution uniform(std::vector<std::string> candidates);

    const std::vector<std::string>& candidates() const { return candidates_; }
    const std::vector<double>& probs() const { return probs_; }

    /// Candidate count l.
    std::size_t size() const { return candidates_.size(); }

    /// Probability of a candidate, or nullopt if the label is absent.
    std::optional<double> prob_of(std::string_view candidate) const;

    bool operator==(const AnswerDistribution&) const = default;

private:
    std::vector<std::string> candidates_;
    std::vector<double> probs_;
};

} // namespace thinkgate
