// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace thinkgate {

/// Sampling parameters forwarded to the completion endpoint.
struct GenerationParams {
    double temperature = 0.8;
    double top_p = 1.0;
    double repetition_penalty = 1.05;
    int max_tokens = 4096;
    std::vector<std::string> stop_sequences;
    int logprobs_k = 20;

    void validate() const;
};

} // namespace thinkgate
