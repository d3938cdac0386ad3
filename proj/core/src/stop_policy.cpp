// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#include "thinkgate/stop_policy.hpp"

#include "thinkgate/entropy.hpp"
#include "thinkgate/errors.hpp"

namespace thinkgate {

double StopPolicy::threshold_bits() const {
    return alpha * kMaxPerCandidateEntropyBits;
}

void StopPolicy::validate() const {
    if (!(alpha >= 0.0) || alpha > 1.0) {
        throw ConfigError("StopPolicy: alpha must be in [0, 1]");
    }
    if (min_step_chars < 0) {
        throw ConfigError("StopPolicy: min_step_chars must be >= 0");
    }
    if (max_steps < 1) {
        throw ConfigError("StopPolicy: max_steps must be >= 1");
    }
    if (step_delimiter.empty()) {
        throw ConfigError("StopPolicy: step_delimiter must be non-empty");
    }
}

StopPolicy StopPolicy::with_alpha(double alpha) {
    StopPolicy p;
    p.alpha = alpha;
    p.validate();
    return p;
}

StopDecision stop_decision(double avg_entropy, const StopPolicy& policy) {
    return avg_entropy <= policy.threshold_bits() ? StopDecision::kStop
                                                  : StopDecision::kContinue;
}

} // namespace thinkgate
