// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#include "thinkgate/entropy.hpp"

#include <cmath>
#include <stdexcept>

namespace thinkgate {

double entropy_bits(const AnswerDistribution& dist) {
    double h = 0.0;
    for (double p : dist.probs()) {
        if (p > 0.0) {
            h -= p * std::log2(p);
        }
    }
    return h < 0.0 ? 0.0 : h; // guard against -0.0 and rounding below zero
}

double avg_entropy_bits(const AnswerDistribution& dist) {
    return entropy_bits(dist) / static_cast<double>(dist.size());
}

double info_gain_bits(double h_prev, double h_cur) {
    return h_prev - h_cur;
}

double targeted_gain_bits(double p_prev_c, double p_cur_c) {
    if (!(p_prev_c > 0.0) || p_prev_c > 1.0 || !(p_cur_c > 0.0) || p_cur_c > 1.0) {
        throw std::domain_error("targeted_gain_bits: probabilities must be in (0, 1]");
    }
    return std::log2(p_prev_c / p_cur_c);
}

} // namespace thinkgate
