// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "thinkgate/client.hpp"
#include "thinkgate/distribution.hpp"
#include "thinkgate/generation.hpp"

namespace thinkgate {

enum class ProbeKind { kMultipleChoice, kOpenEnded };

/// How the answer-space distribution is measured after a reasoning prefix:
/// next-token logprobs over option letters for multiple choice, or a
/// token-tree search over boxed completions for open-ended answers.
struct ProbeSpec {
    ProbeKind kind = ProbeKind::kMultipleChoice;
    std::vector<std::string> labels; // multiple choice
    int top_k = 5;                   // open ended: candidates kept and per-node branching
    int max_depth = 10;              // open ended: token depth cap
    std::string terminator = "}";
    std::string answer_prefix_mc = "The correct option letter is:";
    std::string answer_prefix_open =
        "Please box your final answer via \\boxed{your answer}. The correct answer is: \\boxed{";
    double prob_floor = 1e-6;
    int node_budget = 2000; // hard cap on expanded nodes per open probe

    void validate() const;
    static ProbeSpec multiple_choice(std::vector<std::string> labels);
    static ProbeSpec open_ended(int top_k = 5, int max_depth = 10);

    const std::string& answer_prefix() const {
        return kind == ProbeKind::kMultipleChoice ? answer_prefix_mc : answer_prefix_open;
    }
};

/// One root-to-leaf path of the open-ended search tree.
struct CandidatePath {
    std::string text;       // concatenated tokens, terminator excluded
    double logprob_sum = 0; // <= 0
    bool complete = false;  // terminator reached
    int depth = 0;
};

/// Probe prompt: the question, an opened think block holding the reasoning
/// prefix, the think-close marker, then the answer prefix on its own line.
std::string build_probe_prompt(const std::string& question, const std::string& reasoning_prefix,
                               const ProbeSpec& spec);

/// Issues probes through a CompletionClient and accounts their token cost
/// separately from generation. Stateless apart from the token counter;
/// independent probes may run concurrently through the shared client.
class Prober {
public:
    Prober(CompletionClient& client, std::string model, GenerationParams gen);

    AnswerDistribution probe(const std::string& question, const std::string& reasoning_prefix,
                             const ProbeSpec& spec);

    /// Mass of each option label collected over its surface variants
    /// (leading space, case, trailing punctuation); unseen labels receive
    /// spec.prob_floor; the vector is renormalized. Throws ProbeDegenerate
    /// when no label variant was observed at all.
    AnswerDistribution probe_mc(const std::string& question, const std::string& reasoning_prefix,
                                const ProbeSpec& spec);

    /// Best-first token-tree search expanded by the endpoint's top-k
    /// alternatives per node; a path completes when the terminator appears
    /// in its decoded text and is abandoned at the depth cap. Duplicate
    /// candidate texts merge by summing path probabilities; the top_k most
    /// probable candidates are kept and renormalized. Throws
    /// OpenProbeExhausted when no path completes within the budget.
    AnswerDistribution probe_open(const std::string& question, const std::string& reasoning_prefix,
                                  const ProbeSpec& spec);

    long long tokens_used() const { return tokens_used_; }

private:
    CompletionClient& client_;
    std::string model_;
    GenerationParams gen_;
    long long tokens_used_ = 0;
};

} // namespace thinkgate
