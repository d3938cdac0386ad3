// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#include "thinkgate/generation.hpp"

#include "thinkgate/errors.hpp"

namespace thinkgate {

void GenerationParams::validate() const {
    if (!(temperature >= 0.0)) {
        throw ConfigError("GenerationParams: temperature must be >= 0");
    }
    if (!(top_p > 0.0) || top_p > 1.0) {
        throw ConfigError("GenerationParams: top_p must be in (0, 1]");
    }
    if (logprobs_k < 1) {
        throw ConfigError("GenerationParams: logprobs_k must be >= 1");
    }
    if (max_tokens < 1) {
        throw ConfigError("GenerationParams: max_tokens must be >= 1");
    }
}

} // namespace thinkgate
