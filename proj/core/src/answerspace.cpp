// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#include "thinkgate/answerspace.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>

#include "thinkgate/errors.hpp"
#include "thinkgate/prompts.hpp"
#include "thinkgate/text.hpp"

namespace thinkgate {

void ProbeSpec::validate() const {
    if (kind == ProbeKind::kMultipleChoice) {
        if (labels.empty()) {
            throw ConfigError("ProbeSpec: multiple choice needs labels");
        }
        std::set<std::string> seen(labels.begin(), labels.end());
        if (seen.size() != labels.size()) {
            throw ConfigError("ProbeSpec: duplicate label");
        }
    } else {
        if (top_k < 1 || max_depth < 1) {
            throw ConfigError("ProbeSpec: top_k and max_depth must be >= 1");
        }
        if (terminator.empty()) {
            throw ConfigError("ProbeSpec: terminator must be non-empty");
        }
    }
    if (!(prob_floor > 0.0)) {
        throw ConfigError("ProbeSpec: prob_floor must be positive");
    }
    if (node_budget < 1) {
        throw ConfigError("ProbeSpec: node_budget must be >= 1");
    }
}

ProbeSpec ProbeSpec::multiple_choice(std::vector<std::string> labels) {
    ProbeSpec spec;
    spec.kind = ProbeKind::kMultipleChoice;
    spec.labels = std::move(labels);
    spec.validate();
    return spec;
}

ProbeSpec ProbeSpec::open_ended(int top_k, int max_depth) {
    ProbeSpec spec;
    spec.kind = ProbeKind::kOpenEnded;
    spec.top_k = top_k;
    spec.max_depth = max_depth;
    spec.validate();
    return spec;
}

std::string build_probe_prompt(const std::string& question, const std::string& reasoning_prefix,
                               const ProbeSpec& spec) {
    std::string prompt;
    prompt.reserve(question.size() + reasoning_prefix.size() + 64);
    prompt += question;
    prompt += "\n\n";
    prompt += kThinkOpen;
    prompt += "\n";
    prompt += reasoning_prefix;
    prompt += "\n";
    prompt += kThinkClose;
    prompt += "\n\n";
    prompt += spec.answer_prefix();
    return prompt;
}

Prober::Prober(CompletionClient& client, std::string model, GenerationParams gen)
    : client_(client), model_(std::move(model)), gen_(std::move(gen)) {}

AnswerDistribution Prober::probe(const std::string& question, const std::string& reasoning_prefix,
                                 const ProbeSpec& spec) {
    return spec.kind == ProbeKind::kMultipleChoice
               ? probe_mc(question, reasoning_prefix, spec)
               : probe_open(question, reasoning_prefix, spec);
}

namespace {

/// A token counts toward a label when its alphanumeric core equals the
/// label case-insensitively: " b", "B.", "(b)" all count for label B,
/// while "Because" does not.
bool token_matches_label(std::string_view token, std::string_view label) {
    return iequals(first_alnum_run(token), first_alnum_run(label));
}

} // namespace

AnswerDistribution Prober::probe_mc(const std::string& question,
                                    const std::string& reasoning_prefix, const ProbeSpec& spec) {
    spec.validate();
    if (spec.kind != ProbeKind::kMultipleChoice) {
        throw ConfigError("probe_mc called with an open-ended spec");
    }
    const std::string prompt = build_probe_prompt(question, reasoning_prefix, spec);
    const int k = std::max(gen_.logprobs_k, static_cast<int>(spec.labels.size()));

    CompletionRequest req;
    req.model = model_;
    req.prompt = prompt;
    req.params = gen_;
    req.params.max_tokens = 1;
    req.params.logprobs_k = k;
    req.params.stop_sequences.clear();
    const CompletionResult res = client_.complete(req);
    tokens_used_ += res.completion_tokens;
    if (res.top_logprobs.empty()) {
        throw CapabilityError("probe_mc: endpoint returned no top_logprobs");
    }

    std::vector<double> mass(spec.labels.size(), 0.0);
    bool any = false;
    for (const auto& [token, logprob] : res.top_logprobs.front()) {
        for (std::size_t i = 0; i < spec.labels.size(); ++i) {
            if (token_matches_label(token, spec.labels[i])) {
                mass[i] += std::exp(logprob);
                any = true;
                break; // labels are unique; one token feeds one label
            }
        }
    }
    if (!any) {
        throw ProbeDegenerate("probe_mc: no label variant among top-" + std::to_string(k) +
                              " tokens");
    }
    double total = 0.0;
    for (double& m : mass) {
        if (m == 0.0) {
            m = spec.prob_floor;
        }
        total += m;
    }
    std::vector<double> probs(mass.size());
    for (std::size_t i = 0; i < mass.size(); ++i) {
        probs[i] = mass[i] / total;
    }
    return AnswerDistribution(spec.labels, std::move(probs));
}

AnswerDistribution Prober::probe_open(const std::string& question,
                                      const std::string& reasoning_prefix,
                                      const ProbeSpec& spec) {
    spec.validate();
    if (spec.kind != ProbeKind::kOpenEnded) {
        throw ConfigError("probe_open called with a multiple-choice spec");
    }
    const std::string prompt = build_probe_prompt(question, reasoning_prefix, spec);

    // priority_queue is a max-heap; highest cumulative probability first,
    // lexicographic text as the deterministic tie-break.
    const auto lower_priority = [](const CandidatePath& a, const CandidatePath& b) {
        if (a.logprob_sum != b.logprob_sum) return a.logprob_sum < b.logprob_sum;
        return a.text > b.text;
    };
    std::priority_queue<CandidatePath, std::vector<CandidatePath>, decltype(lower_priority)>
        frontier(lower_priority);
    frontier.push(CandidatePath{"", 0.0, false, 0});
    double frontier_mass = 1.0;

    std::map<std::string, double> completed; // candidate text -> merged probability
    double completed_mass = 0.0;
    int expanded = 0;

    while (!frontier.empty()) {
        if (static_cast<int>(completed.size()) >= spec.top_k &&
            frontier_mass <= completed_mass * 1e-13) {
            break; // the remaining frontier cannot move the truncated result
        }
        if (expanded >= spec.node_budget) {
            break;
        }
        const CandidatePath node = frontier.top();
        frontier.pop();
        frontier_mass -= std::exp(node.logprob_sum);

        CompletionRequest req;
        req.model = model_;
        req.prompt = prompt + node.text;
        req.params = gen_;
        req.params.max_tokens = 1;
        req.params.logprobs_k = spec.top_k;
        req.params.stop_sequences.clear();
        const CompletionResult res = client_.complete(req);
        tokens_used_ += res.completion_tokens;
        ++expanded;
        if (res.top_logprobs.empty()) {
            continue; // dead end: nothing to expand
        }

        for (const auto& [token, logprob] : res.top_logprobs.front()) {
            const double child_sum = node.logprob_sum + logprob;
            std::string child_text = node.text + token;
            // Terminator matching is on decoded text, so an occurrence may
            // straddle the token boundary.
            const std::size_t from = node.text.size() >= spec.terminator.size() - 1
                                         ? node.text.size() - (spec.terminator.size() - 1)
                                         : 0;
            const std::size_t term = child_text.find(spec.terminator, from);
            if (term != std::string::npos) {
                const double p = std::exp(child_sum);
                completed[child_text.substr(0, term)] += p;
                completed_mass += p;
                continue;
            }
            if (node.depth + 1 >= spec.max_depth) {
                continue; // abandoned at the depth cap
            }
            frontier.push(CandidatePath{std::move(child_text), child_sum, false, node.depth + 1});
            frontier_mass += std::exp(child_sum);
        }
    }

    if (completed.empty()) {
        throw OpenProbeExhausted("probe_open: no completed path within depth " +
                                 std::to_string(spec.max_depth) + " and " +
                                 std::to_string(spec.node_budget) + " expansions");
    }

    std::vector<std::pair<std::string, double>> ranked(completed.begin(), completed.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (static_cast<int>(ranked.size()) > spec.top_k) {
        ranked.resize(static_cast<std::size_t>(spec.top_k));
    }
    double total = 0.0;
    for (const auto& [text, p] : ranked) total += p;
    std::vector<std::string> candidates;
    std::vector<double> probs;
    candidates.reserve(ranked.size());
    probs.reserve(ranked.size());
    for (const auto& [text, p] : ranked) {
        candidates.push_back(text);
        probs.push_back(p / total);
    }
    return AnswerDistribution(std::move(candidates), std::move(probs));
}

} // namespace thinkgate
