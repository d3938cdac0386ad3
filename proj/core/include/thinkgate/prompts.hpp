// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

namespace thinkgate {

/// Markers reasoning models use to delimit the think block.
inline constexpr const char* kThinkOpen = "<think>";
inline constexpr const char* kThinkClose = "</think>";

/// Prompt texts driving the four reasoning modes.
struct PromptSet {
    /// Instruction prepended to every question: answer step by step and box
    /// the final answer.
    std::string reasoning_instruction;

    /// Verbatim think block that steers the model into answering directly,
    /// without deep reasoning.
    std::string nothink_stub;

    /// Triage prompt eliciting a YES/NO verdict on whether a question needs
    /// deep, multi-step reasoning.
    std::string gate_criteria;

    static PromptSet defaults();

    /// Throws ConfigError when the stub lost its direct-answer sentence.
    void validate() const;
};

/// The exact sentence the no-think stub must carry.
extern const std::string kNoThinkSentence;

/// Rewrite prompt for paraphrasing a reference solution; "{input}" is
/// replaced by the solution text.
extern const std::string kParaphraseTemplate;

std::string render_paraphrase_prompt(const std::string& solution);

} // namespace thinkgate
