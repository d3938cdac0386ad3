// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "thinkgate/distribution.hpp"

namespace thinkgate {

enum class ThinkMode { kVanilla, kNoThink, kGated, kAdaptive };

std::string to_string(ThinkMode mode);
ThinkMode mode_from_string(const std::string& s);

enum class GateDecision { kThink, kNoThink };

/// Answer-space snapshot taken by a probe (no step text attached).
struct ProbeRecord {
    AnswerDistribution dist;
    double entropy_bits = 0.0;
    double avg_entropy_bits = 0.0;
};

/// One reasoning step: its text, token cost and, when probed, the answer
/// distribution snapshot with the derived entropy/gain values.
struct StepRecord {
    int index = 0; // 0-based
    std::string text;
    int token_count = 0;
    std::optional<AnswerDistribution> dist;
    std::optional<double> entropy_bits;
    std::optional<double> avg_entropy_bits;
    std::optional<double> info_gain_bits;     // absent for the first step
    std::optional<double> targeted_gain_bits; // absent when gold unknown

    void validate() const;
};

/// Full record of one question's reasoning session.
struct ThinkTrace {
    std::string question_id;
    ThinkMode mode = ThinkMode::kVanilla;
    std::vector<StepRecord> steps;
    std::optional<ProbeRecord> initial_probe; // pre-reasoning intuition snapshot
    bool stopped_early = false;
    std::optional<int> stop_step;
    std::string final_answer;
    std::optional<bool> correct;
    std::optional<std::string> gold;
    long long total_tokens = 0; // completion tokens incl. gate query, excl. probes
    long long probe_tokens = 0; // measurement overhead, reported separately
    std::optional<GateDecision> gate_decision;
    std::vector<std::string> notes;

    void validate() const;
    nlohmann::json to_json() const;
    static ThinkTrace from_json(const nlohmann::json& j);
    void save(const std::string& path) const;
    static ThinkTrace load(const std::string& path);
};

} // namespace thinkgate
