// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#include "thinkgate/controller.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>

#include "thinkgate/entropy.hpp"
#include "thinkgate/errors.hpp"
#include "thinkgate/segmenter.hpp"
#include "thinkgate/text.hpp"

namespace thinkgate {

void ModeConfig::validate() const {
    gen.validate();
    prompts.validate();
    policy.validate();
    if (mode == ThinkMode::kAdaptive && !(policy.alpha >= 0.0)) {
        throw ConfigError("ModeConfig: adaptive mode needs a stop policy");
    }
}

namespace {

std::optional<std::string> last_boxed_content(const std::string& text) {
    static constexpr const char* kMarker = "\\boxed{";
    const std::size_t pos = text.rfind(kMarker);
    if (pos == std::string::npos) {
        return std::nullopt;
    }
    std::string content;
    int depth = 1;
    for (std::size_t i = pos + std::strlen(kMarker); i < text.size(); ++i) {
        const char c = text[i];
        if (c == '{') {
            ++depth;
        } else if (c == '}') {
            if (--depth == 0) {
                return content;
            }
        }
        content.push_back(c);
    }
    return std::nullopt; // unbalanced braces
}

std::optional<std::string> standalone_capital_after(const std::string& text, std::size_t from) {
    for (std::size_t i = from; i < text.size(); ++i) {
        const char c = text[i];
        if (c < 'A' || c > 'Z') continue;
        const bool left_ok = i == 0 || !std::isalnum(static_cast<unsigned char>(text[i - 1]));
        const bool right_ok =
            i + 1 >= text.size() || !std::isalnum(static_cast<unsigned char>(text[i + 1]));
        if (left_ok && right_ok) {
            return std::string(1, c);
        }
    }
    return std::nullopt;
}

std::optional<double> gold_probability(const AnswerDistribution& dist, const std::string& gold) {
    if (gold.empty()) return std::nullopt;
    return dist.prob_of(gold);
}

/// Token count per span, assigning each token to the span containing its
/// start offset in the concatenated token stream.
std::vector<int> tokens_per_span(const std::vector<std::string>& tokens,
                                 const std::vector<std::pair<std::size_t, std::size_t>>& spans) {
    std::vector<int> counts(spans.size(), 0);
    std::size_t offset = 0;
    std::size_t span = 0;
    for (const auto& tok : tokens) {
        while (span < spans.size() && offset >= spans[span].second) ++span;
        if (span >= spans.size()) break;
        if (offset >= spans[span].first) {
            ++counts[span];
        }
        offset += tok.size();
    }
    return counts;
}

} // namespace

std::string extract_answer(const std::string& text, TaskKind kind) {
    if (kind == TaskKind::kBoxed) {
        if (auto boxed = last_boxed_content(text)) {
            return *boxed;
        }
        throw ExtractionFailed("no \\boxed{...} answer found");
    }
    // Option letter: a boxed letter wins; otherwise the first standalone
    // capital letter after the final answer marker.
    if (auto boxed = last_boxed_content(text)) {
        const std::string_view run = first_alnum_run(*boxed);
        if (run.size() == 1 && std::isalpha(static_cast<unsigned char>(run[0]))) {
            return std::string(1, static_cast<char>(std::toupper(
                                      static_cast<unsigned char>(run[0]))));
        }
    }
    std::size_t from = 0;
    for (const char* marker : {"The correct option letter is", "answer is", "Answer:"}) {
        const std::size_t pos = text.rfind(marker);
        if (pos != std::string::npos) {
            from = std::max(from, pos + std::strlen(marker));
        }
    }
    if (auto letter = standalone_capital_after(text, from)) {
        return *letter;
    }
    throw ExtractionFailed("no option letter found");
}

std::string answer_force_suffix(const ProbeSpec& spec) {
    return std::string(kThinkClose) + "\n\n" + spec.answer_prefix();
}

std::optional<GateDecision> parse_gate_verdict(const std::string& reply) {
    std::size_t i = 0;
    while (i < reply.size() && !std::isalpha(static_cast<unsigned char>(reply[i]))) ++i;
    std::size_t b = i;
    while (i < reply.size() && std::isalpha(static_cast<unsigned char>(reply[i]))) ++i;
    const std::string_view word(reply.data() + b, i - b);
    if (iequals(word, "YES")) return GateDecision::kThink;
    if (iequals(word, "NO")) return GateDecision::kNoThink;
    return std::nullopt;
}

Controller::Controller(CompletionClient& client, ModeConfig cfg)
    : client_(client), cfg_(std::move(cfg)) {
    cfg_.validate();
}

ThinkTrace Controller::run(const BenchmarkItem& item) {
    switch (cfg_.mode) {
    case ThinkMode::kVanilla: return run_vanilla(item);
    case ThinkMode::kNoThink: return run_nothink(item);
    case ThinkMode::kGated: return run_gated(item);
    case ThinkMode::kAdaptive: return run_adaptive(item);
    }
    throw ConfigError("unknown mode");
}

std::string Controller::generation_prompt(const BenchmarkItem& item) const {
    return cfg_.prompts.reasoning_instruction + "\n\n" + item.render() + "\n\n" + kThinkOpen +
           "\n";
}

ProbeSpec Controller::probe_spec_for(const BenchmarkItem& item) const {
    ProbeSpec spec = cfg_.probe;
    if (item.task_kind == TaskKind::kOptionLetter) {
        spec.kind = ProbeKind::kMultipleChoice;
        spec.labels = item.choice_labels();
    } else {
        spec.kind = ProbeKind::kOpenEnded;
    }
    spec.validate();
    return spec;
}

CompletionResult Controller::request(const std::string& prompt, int max_tokens,
                                     std::vector<std::string> stops) const {
    CompletionRequest req;
    req.model = cfg_.model;
    req.prompt = prompt;
    req.params = cfg_.gen;
    req.params.max_tokens = std::max(1, max_tokens);
    req.params.stop_sequences = std::move(stops);
    return client_.complete(req);
}

void Controller::fill_answer(ThinkTrace& trace, const std::string& answer_region,
                             TaskKind kind) const {
    try {
        trace.final_answer = extract_answer(answer_region, kind);
    } catch (const ExtractionFailed& e) {
        trace.final_answer.clear();
        trace.notes.push_back(std::string("extraction failed: ") + e.what());
    }
}

std::optional<ProbeRecord> Controller::take_probe(Prober& prober, const BenchmarkItem& item,
                                                  const std::string& reasoning_prefix,
                                                  const ProbeSpec& spec,
                                                  ThinkTrace& trace) const {
    try {
        AnswerDistribution dist = prober.probe(item.render(), reasoning_prefix, spec);
        const double h = entropy_bits(dist);
        const double h_avg = avg_entropy_bits(dist);
        return ProbeRecord{std::move(dist), h, h_avg};
    } catch (const OpenProbeExhausted& e) {
        trace.notes.push_back(std::string("probe exhausted: ") + e.what());
        return std::nullopt;
    } catch (const ProbeDegenerate& e) {
        trace.notes.push_back(std::string("probe degenerate: ") + e.what());
        return std::nullopt;
    }
}

ThinkTrace Controller::run_vanilla(const BenchmarkItem& item) {
    ThinkTrace trace;
    trace.question_id = item.id;
    trace.mode = ThinkMode::kVanilla;
    if (!item.gold.empty()) trace.gold = item.gold;

    const CompletionResult res = request(generation_prompt(item), cfg_.gen.max_tokens, {});
    trace.total_tokens = res.completion_tokens;

    const std::size_t close = res.text.find(kThinkClose);
    const std::string think_text =
        close == std::string::npos ? res.text : res.text.substr(0, close);
    const std::string answer_region = close == std::string::npos
                                          ? res.text
                                          : res.text.substr(close + std::strlen(kThinkClose));

    Segmenter seg(cfg_.policy.step_delimiter, static_cast<std::size_t>(cfg_.policy.min_step_chars));
    std::vector<std::string> step_texts = seg.feed(think_text);
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    std::size_t cursor = 0;
    for (const auto& s : step_texts) {
        spans.emplace_back(cursor, cursor + s.size() + seg.delimiter().size());
        cursor = spans.back().second;
    }
    if (auto tail = seg.flush()) {
        step_texts.push_back(*tail);
        spans.emplace_back(cursor, cursor + tail->size());
    }
    const std::vector<int> counts = tokens_per_span(res.tokens, spans);

    for (std::size_t i = 0; i < step_texts.size(); ++i) {
        StepRecord rec;
        rec.index = static_cast<int>(i);
        rec.text = step_texts[i];
        rec.token_count = counts[i];
        trace.steps.push_back(std::move(rec));
    }

    if (cfg_.measure) {
        const ProbeSpec spec = probe_spec_for(item);
        Prober prober(client_, cfg_.model, cfg_.gen);
        if (auto p0 = take_probe(prober, item, "", spec, trace)) {
            trace.initial_probe = *p0;
        }
        std::string prefix;
        std::optional<double> prev_entropy;
        std::optional<double> prev_p_gold;
        for (auto& rec : trace.steps) {
            prefix = prefix.empty() ? rec.text : prefix + seg.delimiter() + rec.text;
            if (auto snap = take_probe(prober, item, prefix, spec, trace)) {
                rec.dist = snap->dist;
                rec.entropy_bits = snap->entropy_bits;
                rec.avg_entropy_bits = snap->avg_entropy_bits;
                if (prev_entropy) {
                    rec.info_gain_bits = info_gain_bits(*prev_entropy, snap->entropy_bits);
                }
                const auto p_gold = gold_probability(snap->dist, item.gold);
                if (prev_p_gold && p_gold) {
                    rec.targeted_gain_bits = targeted_gain_bits(*prev_p_gold, *p_gold);
                }
                prev_entropy = snap->entropy_bits;
                prev_p_gold = p_gold;
            } else {
                prev_entropy.reset();
                prev_p_gold.reset();
            }
        }
        trace.probe_tokens = prober.tokens_used();
    }

    fill_answer(trace, answer_region, item.task_kind);
    return trace;
}

ThinkTrace Controller::run_nothink(const BenchmarkItem& item) {
    ThinkTrace trace;
    trace.question_id = item.id;
    trace.mode = ThinkMode::kNoThink;
    if (!item.gold.empty()) trace.gold = item.gold;

    const std::string prompt =
        cfg_.prompts.reasoning_instruction + "\n\n" + item.render() + "\n\n" +
        cfg_.prompts.nothink_stub;
    const CompletionResult res = request(prompt, cfg_.gen.max_tokens, {});
    trace.total_tokens = res.completion_tokens;

    if (cfg_.measure) {
        const ProbeSpec spec = probe_spec_for(item);
        Prober prober(client_, cfg_.model, cfg_.gen);
        if (auto p0 = take_probe(prober, item, "", spec, trace)) {
            trace.initial_probe = *p0;
        }
        trace.probe_tokens = prober.tokens_used();
    }

    fill_answer(trace, res.text, item.task_kind);
    return trace;
}

ThinkTrace Controller::run_gated(const BenchmarkItem& item) {
    const std::string gate_prompt = cfg_.prompts.gate_criteria + "\n\n" + item.render() +
                                    "\n\n" + cfg_.prompts.nothink_stub;
    const CompletionResult gate = request(gate_prompt, cfg_.gen.max_tokens, {});

    const auto verdict = parse_gate_verdict(gate.text);
    const GateDecision decision = verdict.value_or(GateDecision::kThink);

    ThinkTrace trace = decision == GateDecision::kNoThink ? run_nothink(item)
                                                          : run_vanilla(item);
    trace.mode = ThinkMode::kGated;
    trace.gate_decision = decision;
    trace.total_tokens += gate.completion_tokens;
    if (!verdict) {
        trace.notes.push_back("gate verdict ambiguous; defaulted to thinking: " +
                              gate.text.substr(0, 60));
    }
    return trace;
}

ThinkTrace Controller::run_adaptive(const BenchmarkItem& item) {
    ThinkTrace trace;
    trace.question_id = item.id;
    trace.mode = ThinkMode::kAdaptive;
    if (!item.gold.empty()) trace.gold = item.gold;

    const std::string gen_prompt = generation_prompt(item);
    const ProbeSpec spec = probe_spec_for(item);
    const StopPolicy& policy = cfg_.policy;
    const std::string& delim = policy.step_delimiter;

    Prober prober(client_, cfg_.model, cfg_.gen);
    Segmenter seg(delim, static_cast<std::size_t>(policy.min_step_chars));

    std::string think_stream; // raw emitted think text, delimiters included
    std::vector<std::string> think_tokens;
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    std::string probe_prefix;
    std::optional<double> prev_entropy;
    std::optional<double> prev_p_gold;
    std::size_t step_cursor = 0;
    long long think_token_count = 0;
    bool force = false;
    bool model_closed = false;
    std::string answer_region;

    // Intuition snapshot before any reasoning; never a stopping point.
    if (auto p0 = take_probe(prober, item, "", spec, trace)) {
        trace.initial_probe = *p0;
    }

    auto record_step = [&](const std::string& step_text,
                           bool closed_by_delim) -> std::optional<ProbeRecord> {
        StepRecord rec;
        rec.index = static_cast<int>(trace.steps.size());
        rec.text = step_text;
        const std::size_t end =
            step_cursor + step_text.size() + (closed_by_delim ? delim.size() : 0);
        spans.emplace_back(step_cursor, end);
        step_cursor = end;

        probe_prefix = probe_prefix.empty() ? step_text : probe_prefix + delim + step_text;
        auto snap = take_probe(prober, item, probe_prefix, spec, trace);
        if (snap) {
            rec.dist = snap->dist;
            rec.entropy_bits = snap->entropy_bits;
            rec.avg_entropy_bits = snap->avg_entropy_bits;
            if (prev_entropy) {
                rec.info_gain_bits = info_gain_bits(*prev_entropy, snap->entropy_bits);
            }
            const auto p_gold = gold_probability(snap->dist, item.gold);
            if (prev_p_gold && p_gold) {
                rec.targeted_gain_bits = targeted_gain_bits(*prev_p_gold, *p_gold);
            }
            prev_entropy = snap->entropy_bits;
            prev_p_gold = p_gold;
        } else {
            prev_entropy.reset();
            prev_p_gold.reset();
        }
        trace.steps.push_back(std::move(rec));
        return snap;
    };

    while (true) {
        if (static_cast<int>(trace.steps.size()) >= policy.max_steps ||
            think_token_count >= policy.max_think_tokens) {
            force = true;
            break;
        }
        const int budget = static_cast<int>(std::min<long long>(
            cfg_.gen.max_tokens, policy.max_think_tokens - think_token_count));
        const CompletionResult res = request(gen_prompt + think_stream, budget, {delim});
        trace.total_tokens += res.completion_tokens;
        think_token_count += res.completion_tokens;
        think_tokens.insert(think_tokens.end(), res.tokens.begin(), res.tokens.end());

        if (res.completion_tokens == 0) {
            // The endpoint produced nothing; a retry would see the same
            // prompt, so close the block instead of spinning.
            if (auto tail = seg.flush()) {
                record_step(*tail, false);
            }
            force = true;
            break;
        }

        const bool on_delim = res.finish_reason == FinishReason::kStopSequence;
        const std::size_t close = res.text.find(kThinkClose);

        if (close != std::string::npos) {
            // The model closed the think block on its own.
            model_closed = true;
            const std::string think_part = res.text.substr(0, close);
            think_stream += think_part;
            for (const auto& s : seg.feed(think_part)) {
                record_step(s, true);
            }
            if (auto tail = seg.flush()) {
                record_step(*tail, false);
            }
            answer_region = res.text.substr(close + std::strlen(kThinkClose));
            if (trim(answer_region).empty() && res.finish_reason != FinishReason::kLength) {
                const std::string after =
                    res.text.substr(close) + (on_delim ? res.matched_stop : "");
                const CompletionResult ans =
                    request(gen_prompt + think_stream + after, cfg_.gen.max_tokens, {});
                trace.total_tokens += ans.completion_tokens;
                answer_region += ans.text;
            }
            break;
        }

        const std::string effective = res.text + (on_delim ? res.matched_stop : "");
        think_stream += effective;
        bool stopped = false;
        for (const auto& s : seg.feed(effective)) {
            const auto snap = record_step(s, true);
            if (snap && stop_decision(snap->avg_entropy_bits, policy) == StopDecision::kStop) {
                trace.stopped_early = true;
                trace.stop_step = trace.steps.back().index;
                force = true;
                stopped = true;
                break;
            }
        }
        if (stopped) break;
        if (res.finish_reason == FinishReason::kEnd) {
            // Ran dry without closing the think block; elicit the answer.
            if (auto tail = seg.flush()) {
                record_step(*tail, false);
            }
            force = true;
            break;
        }
        if (res.finish_reason == FinishReason::kLength &&
            think_token_count >= policy.max_think_tokens) {
            force = true;
            break;
        }
    }

    if (force && !model_closed) {
        // Close the still-open think block and elicit the answer; this is
        // the only place the forced suffix is appended.
        const std::string suffix = answer_force_suffix(spec);
        const CompletionResult ans =
            request(gen_prompt + think_stream + suffix, cfg_.gen.max_tokens, {});
        trace.total_tokens += ans.completion_tokens;
        answer_region = spec.kind == ProbeKind::kOpenEnded ? "\\boxed{" + ans.text : ans.text;
    }

    const std::vector<int> counts = tokens_per_span(think_tokens, spans);
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        trace.steps[i].token_count = counts[i];
    }
    trace.probe_tokens = prober.tokens_used();
    fill_answer(trace, answer_region, item.task_kind);
    return trace;
}

} // namespace thinkgate
