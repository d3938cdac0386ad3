// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <numbers>

#include "thinkgate/distribution.hpp"

namespace thinkgate {

/// Maximum of -p*log2(p) over p in (0,1], attained at p = 1/e.
/// This is the per-candidate ceiling that scales the stopping threshold.
inline constexpr double kMaxPerCandidateEntropyBits =
    1.0 / (std::numbers::e * std::numbers::ln2);

/// Shannon entropy of the answer distribution in bits, with 0*log2(0) := 0.
double entropy_bits(const AnswerDistribution& dist);

/// Per-candidate mean of the entropy terms: entropy_bits(dist) / l.
/// Bounded by kMaxPerCandidateEntropyBits for every valid distribution.
double avg_entropy_bits(const AnswerDistribution& dist);

/// Uncertainty reduced between consecutive steps: h_prev - h_cur.
/// Negative values are legal (entropy can rise mid-reasoning).
double info_gain_bits(double h_prev, double h_cur);

/// Signed log-ratio log2(p_prev_c / p_cur_c) for the correct answer's
/// probability across consecutive steps. Negative when confidence in the
/// correct answer increases; the raw signed value is returned.
/// Throws std::domain_error unless both probabilities are in (0, 1].
double targeted_gain_bits(double p_prev_c, double p_cur_c);

} // namespace thinkgate
