// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "thinkgate/answerspace.hpp"
#include "thinkgate/benchmark_item.hpp"
#include "thinkgate/client.hpp"
#include "thinkgate/generation.hpp"
#include "thinkgate/prompts.hpp"
#include "thinkgate/stop_policy.hpp"
#include "thinkgate/trace.hpp"

namespace thinkgate {

/// Everything a reasoning session needs: the mode, the stop policy
/// (adaptive), how to probe the answer space, sampling parameters and the
/// prompt texts.
struct ModeConfig {
    ThinkMode mode = ThinkMode::kVanilla;
    StopPolicy policy;
    ProbeSpec probe;
    GenerationParams gen;
    PromptSet prompts = PromptSet::defaults();
    std::string model;

    /// Probe after every step in vanilla/no-think runs without ever
    /// stopping, to record the entropy trajectory of a full reasoning pass.
    bool measure = false;

    void validate() const;
};

/// First alphabetic word of a gate reply, case-insensitive: YES -> think,
/// NO -> nothink, anything else is ambiguous.
std::optional<GateDecision> parse_gate_verdict(const std::string& reply);

/// Balanced-brace content of the last \boxed{...} occurrence (kBoxed), or
/// the boxed letter / first standalone capital letter after the final
/// answer marker (kOptionLetter). Throws ExtractionFailed when no answer
/// can be located.
std::string extract_answer(const std::string& text, TaskKind kind);

/// Think-close marker plus the answer prefix for the probe kind, appended
/// to a paused think block to force an immediate final answer.
std::string answer_force_suffix(const ProbeSpec& spec);

/// Runs one reasoning session per question. Sessions are independent; a
/// single session's loop is strictly sequential. Transport failures inside
/// a session bubble up after the client's bounded retries.
class Controller {
public:
    Controller(CompletionClient& client, ModeConfig cfg);

    /// Dispatch on cfg.mode.
    ThinkTrace run(const BenchmarkItem& item);

    ThinkTrace run_vanilla(const BenchmarkItem& item);
    ThinkTrace run_nothink(const BenchmarkItem& item);
    ThinkTrace run_gated(const BenchmarkItem& item);
    ThinkTrace run_adaptive(const BenchmarkItem& item);

private:
    CompletionClient& client_;
    ModeConfig cfg_;

    std::string generation_prompt(const BenchmarkItem& item) const;
    ProbeSpec probe_spec_for(const BenchmarkItem& item) const;
    CompletionResult request(const std::string& prompt, int max_tokens,
                             std::vector<std::string> stops) const;
    void fill_answer(ThinkTrace& trace, const std::string& answer_region,
                     TaskKind kind) const;
    std::optional<ProbeRecord> take_probe(Prober& prober, const BenchmarkItem& item,
                                          const std::string& reasoning_prefix,
                                          const ProbeSpec& spec, ThinkTrace& trace) const;
};

} // namespace thinkgate
