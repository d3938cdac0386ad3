// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

namespace thinkgate {

/// Early-stop policy for adaptive reasoning: a coefficient alpha in [0,1]
/// scales the per-candidate entropy ceiling into a stopping threshold, plus
/// the step segmentation parameters and hard caps on reasoning length.
struct StopPolicy {
    double alpha = 0.1;
    std::string step_delimiter = "\n\n";
    int min_step_chars = 120;
    int max_steps = 128;
    int max_think_tokens = 16384;

    /// Derived threshold alpha * 1/(e*ln 2), in bits.
    double threshold_bits() const;

    /// Throws ConfigError unless alpha is in [0,1], min_step_chars >= 0
    /// and max_steps >= 1.
    void validate() const;

    static StopPolicy with_alpha(double alpha);
};

enum class StopDecision { kStop, kContinue };

/// Stop iff avg_entropy <= policy.threshold_bits(); the boundary counts
/// as a stop.
StopDecision stop_decision(double avg_entropy, const StopPolicy& policy);

} // namespace thinkgate
