// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
//
// Scripted scenarios shared by the unit tests, the acceptance suite and the
// fixture generator. Every probability and prompt pattern lives here so
// tests can derive expected values from the same data the mock serves.
#pragma once

#include <array>
#include <cassert>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "thinkgate/answerspace.hpp"
#include "thinkgate/bench.hpp"
#include "thinkgate/mock_model.hpp"
#include "thinkgate/prompts.hpp"
#include "thinkgate/text.hpp"

namespace thinkgate::testing {

/// Word-level tokenization: each token is a leading-space-preserving word,
/// so concatenating tokens reproduces the text byte for byte.
inline std::vector<std::string> tokenize_words(const std::string& text) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t j = i;
        while (j < text.size() && text[j] == ' ') ++j;
        while (j < text.size() && text[j] != ' ') ++j;
        tokens.push_back(text.substr(i, j - i));
        i = j;
    }
    return tokens;
}

inline const std::array<std::string, 4> kMcLabels{"A", "B", "C", "D"};

/// Distribution over the four option letters, tokens carrying the leading
/// space a real tokenizer would produce.
inline std::map<std::string, double> letter_distribution(const std::array<double, 4>& probs) {
    std::map<std::string, double> next;
    for (std::size_t i = 0; i < 4; ++i) {
        next[" " + kMcLabels[i]] = probs[i];
    }
    return next;
}

inline std::string mc_marker() { return ProbeSpec{}.answer_prefix_mc; }

/// Probe-prompt tail after a mid-stream step (prefix has no trailing
/// newline): "<text>\n</think>\n\n<marker>".
inline std::string probe_tail(const std::string& step_text) {
    return step_text + "\n" + kThinkClose + "\n\n" + mc_marker();
}

/// Prompt tail after a forced close: the stream pauses on the delimiter, so
/// the suffix lands after "\n\n".
inline std::string forced_tail(const std::string& step_text) {
    return step_text + "\n\n" + kThinkClose + "\n\n" + mc_marker();
}

/// Five-paragraph multiple-choice scenario whose probe entropies decay step
/// by step; the workhorse for adaptive-stopping tests.
struct AdaptiveScenario {
    BenchmarkItem item;
    std::vector<std::string> paragraphs;              // each >= 120 chars
    std::array<std::array<double, 4>, 6> probe_probs; // step 0 plus one per paragraph
    std::array<double, 4> forced_answer_probs;        // served after a forced close
    std::string answer_text;                          // the model's own final answer
};

inline AdaptiveScenario describe_adaptive_scenario() {
    AdaptiveScenario s;
    s.item.id = "adaptive-1";
    s.item.question = "What is six times seven?";
    s.item.choices = {{"A", "41"}, {"B", "42"}, {"C", "43"}, {"D", "44"}};
    s.item.gold = "B";
    s.item.task_kind = TaskKind::kOptionLetter;

    s.paragraphs = {
        "First, restate the task so nothing is lost in translation: we need the product of "
        "six and seven, plain integer arithmetic with no hidden units or trick wording.",
        "A quick sanity bound helps frame the range: six times six is thirty-six and six "
        "times eight is forty-eight, so the product must sit strictly between those values.",
        "Now compute directly by splitting seven into five plus two: six times five is "
        "thirty and six times two is twelve, and adding the partial products gives forty-two.",
        "Cross-check with the reverse factorization: seven sixes counted out loud run six, "
        "twelve, eighteen, twenty-four, thirty, thirty-six, forty-two, landing on the same value.",
        "Both routes agree and the earlier bound brackets the result, so the arithmetic is "
        "settled and the matching option letter can be reported with full confidence.",
    };
    for (const auto& p : s.paragraphs) {
        assert(utf8_length(p) >= 120);
        (void)p;
    }

    s.probe_probs = {{
        {0.25, 0.25, 0.25, 0.25},     // step 0: uniform intuition
        {0.25, 0.55, 0.12, 0.08},     // avg entropy ~0.408
        {0.11, 0.80, 0.05, 0.04},     // ~0.252
        {0.01, 0.97, 0.01, 0.01},     // ~0.0605
        {0.005, 0.985, 0.005, 0.005}, // ~0.0340
        {0.002, 0.995, 0.002, 0.001}, // ~0.0133
    }};
    s.forced_answer_probs = {0.01, 0.97, 0.01, 0.01};
    s.answer_text = "The correct option letter is: $\\boxed{B}$.";
    return s;
}

/// Token stream the model emits inside (and after) the think block:
/// paragraphs separated by the step delimiter, the think-close on its own
/// line, then the final answer.
inline std::vector<std::string> think_token_stream(const std::vector<std::string>& paragraphs,
                                                   const std::string& answer_text) {
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < paragraphs.size(); ++i) {
        if (i > 0) tokens.push_back("\n\n");
        const auto words = tokenize_words(paragraphs[i]);
        tokens.insert(tokens.end(), words.begin(), words.end());
    }
    tokens.push_back("\n");
    tokens.push_back(kThinkClose);
    tokens.push_back("\n\n");
    const auto answer = tokenize_words(answer_text);
    tokens.insert(tokens.end(), answer.begin(), answer.end());
    return tokens;
}

/// Installs the scenario's continuation and probe rules into a model.
inline void install_adaptive_scenario(ScriptedModel& model, const AdaptiveScenario& s) {
    // Step-0 probe: empty think block.
    model.add_distribution(
        {std::string(kThinkOpen) + "\n\n" + kThinkClose + "\n\n" + mc_marker(),
         letter_distribution(s.probe_probs[0])});

    // Mid-stream probes after each paragraph; the final paragraph arrives
    // through flush with the model's own newline attached.
    for (std::size_t i = 0; i < s.paragraphs.size(); ++i) {
        const bool last = i + 1 == s.paragraphs.size();
        const std::string prefix_tail = last ? s.paragraphs[i] + "\n" : s.paragraphs[i];
        model.add_distribution({probe_tail(prefix_tail), letter_distribution(s.probe_probs[i + 1])});
    }

    // Forced-close answer distributions for every possible stopping point,
    // plus a generic fallback for cap-forced closes mid-paragraph. Longer
    // suffixes win, so the specific patterns stay authoritative.
    for (std::size_t i = 0; i + 1 < s.paragraphs.size(); ++i) {
        model.add_distribution({forced_tail(s.paragraphs[i]),
                                letter_distribution(s.forced_answer_probs)});
    }
    model.add_distribution({std::string(kThinkClose) + "\n\n" + mc_marker(),
                            letter_distribution(s.forced_answer_probs)});

    // One continuation serves vanilla, chunked adaptive requests and the
    // post-close answer via resume matching.
    model.add_continuation({std::string(kThinkOpen) + "\n",
                            think_token_stream(s.paragraphs, s.answer_text),
                            {}});
}

/// A two-paragraph item whose first probe is already confident: adaptive
/// stops after one step while vanilla reasons to the end.
struct SimpleMcItem {
    BenchmarkItem item;
    std::vector<std::string> paragraphs;
    std::string model_letter; // the letter the scripted model believes in
    std::string answer_text;
};

inline void install_simple_mc(ScriptedModel& model, const SimpleMcItem& s) {
    std::array<double, 4> confident{};
    for (std::size_t i = 0; i < 4; ++i) {
        confident[i] = kMcLabels[i] == s.model_letter ? 0.97 : 0.01;
    }
    model.add_distribution(
        {std::string(kThinkOpen) + "\n\n" + kThinkClose + "\n\n" + mc_marker(),
         letter_distribution({0.25, 0.25, 0.25, 0.25})});
    for (std::size_t i = 0; i < s.paragraphs.size(); ++i) {
        const bool last = i + 1 == s.paragraphs.size();
        const std::string prefix_tail = last ? s.paragraphs[i] + "\n" : s.paragraphs[i];
        model.add_distribution({probe_tail(prefix_tail), letter_distribution(confident)});
        if (!last) {
            model.add_distribution({forced_tail(s.paragraphs[i]), letter_distribution(confident)});
        }
    }
    model.add_continuation({s.item.render() + "\n\n" + kThinkOpen + "\n",
                            think_token_stream(s.paragraphs, s.answer_text),
                            {}});
    // Direct-answer continuation for the no-think mode.
    model.add_continuation({s.item.render() + "\n\n" + PromptSet::defaults().nothink_stub,
                            tokenize_words("The answer is $\\boxed{" + s.model_letter + "}$."),
                            {}});
}

/// Four multiple-choice items on one scripted model: the five-paragraph
/// adaptive scenario plus three two-paragraph items, one of which the model
/// answers incorrectly in every mode.
struct McBenchmark {
    std::vector<BenchmarkItem> items;
    AdaptiveScenario adaptive;
    std::vector<SimpleMcItem> simple;
    std::shared_ptr<ScriptedModel> model;
};

inline SimpleMcItem make_simple_mc(const std::string& id, const std::string& question,
                                   const std::string& gold, const std::string& model_letter) {
    SimpleMcItem s;
    s.item.id = id;
    s.item.question = question;
    s.item.choices = {{"A", "first"}, {"B", "second"}, {"C", "third"}, {"D", "fourth"}};
    s.item.gold = gold;
    s.item.task_kind = TaskKind::kOptionLetter;
    s.model_letter = model_letter;
    s.paragraphs = {
        "Consider the question calmly and line up the relevant fact before committing: the "
        "statement narrows the candidates down to a single option almost immediately here. (" +
            id + ")",
        "Re-reading the options confirms the same choice, because the remaining letters "
        "contradict the given condition in one way or another, so the selection stands. (" +
            id + ")",
    };
    for (const auto& p : s.paragraphs) {
        assert(utf8_length(p) >= 120);
        (void)p;
    }
    s.answer_text = "The correct option letter is: $\\boxed{" + model_letter + "}$.";
    return s;
}

inline McBenchmark make_mc_benchmark() {
    McBenchmark bench;
    bench.adaptive = describe_adaptive_scenario();
    bench.simple = {
        make_simple_mc("mc-2", "Which option is third in the list?", "C", "C"),
        make_simple_mc("mc-3", "Which option is first in the list?", "A", "A"),
        // The model is confidently wrong here in every mode.
        make_simple_mc("mc-4", "Which option is fourth in the list?", "D", "B"),
    };

    auto model = std::make_shared<ScriptedModel>();
    // The adaptive scenario anchors at the bare think-open, which would
    // also match the simple items; anchor it to its question instead.
    AdaptiveScenario anchored = bench.adaptive;
    ScriptedModel scratch;
    install_adaptive_scenario(scratch, anchored);
    for (const auto& d : scratch.distributions()) {
        model->add_distribution(d);
    }
    model->add_continuation({anchored.item.render() + "\n\n" + kThinkOpen + "\n",
                             think_token_stream(anchored.paragraphs, anchored.answer_text),
                             {}});
    model->add_continuation(
        {anchored.item.render() + "\n\n" + PromptSet::defaults().nothink_stub,
         tokenize_words("The answer is $\\boxed{B}$."),
         {}});
    for (const auto& s : bench.simple) {
        install_simple_mc(*model, s);
    }

    bench.items.push_back(bench.adaptive.item);
    for (const auto& s : bench.simple) {
        bench.items.push_back(s.item);
    }
    bench.model = std::move(model);
    return bench;
}

/// Gate triage scenario: one question the gate sends into deep thinking,
/// one it answers directly, one with an unparseable verdict.
struct GateScenario {
    std::vector<BenchmarkItem> items; // think, skip, odd
    std::shared_ptr<ScriptedModel> model;
    std::string yes_reply;
    std::string no_reply;
    std::string odd_reply;
};

inline GateScenario make_gate_scenario() {
    GateScenario g;
    g.yes_reply = "YES -- This problem involves set operations and requires a formal "
                  "mathematical proof with multi-step logical deductions.";
    g.no_reply = "NO -- This is a straightforward computation that can be answered directly.";
    g.odd_reply = "Maybe. It depends on how you squint at it.";

    BenchmarkItem think_item;
    think_item.id = "gate-think";
    think_item.question =
        "Every box holds thirteen pencils; there are forty-one boxes plus five loose "
        "pencils. After removing seven pencils, how many remain?";
    think_item.gold = "531";
    think_item.task_kind = TaskKind::kBoxed;

    BenchmarkItem skip_item;
    skip_item.id = "gate-skip";
    skip_item.question = "What is 2^10?";
    skip_item.gold = "1024";
    skip_item.task_kind = TaskKind::kBoxed;

    BenchmarkItem odd_item;
    odd_item.id = "gate-odd";
    odd_item.question = "Is a tomato a fruit?";
    odd_item.gold = "Yes";
    odd_item.task_kind = TaskKind::kBoxed;

    const PromptSet prompts = PromptSet::defaults();
    const std::string criteria_tail = prompts.gate_criteria.substr(
        prompts.gate_criteria.size() > 40 ? prompts.gate_criteria.size() - 40 : 0);
    const std::string instruction_tail = prompts.reasoning_instruction.substr(
        prompts.reasoning_instruction.size() - 40);

    auto model = std::make_shared<ScriptedModel>();
    const auto gate_anchor = [&](const BenchmarkItem& item) {
        return criteria_tail + "\n\n" + item.render() + "\n\n" + prompts.nothink_stub;
    };
    const auto nothink_anchor = [&](const BenchmarkItem& item) {
        return instruction_tail + "\n\n" + item.render() + "\n\n" + prompts.nothink_stub;
    };
    const auto vanilla_anchor = [&](const BenchmarkItem& item) {
        return item.render() + "\n\n" + kThinkOpen + "\n";
    };

    model->add_continuation({gate_anchor(think_item), tokenize_words(g.yes_reply), {}});
    model->add_continuation({gate_anchor(skip_item), tokenize_words(g.no_reply), {}});
    model->add_continuation({gate_anchor(odd_item), tokenize_words(g.odd_reply), {}});

    const std::vector<std::string> think_paragraphs = {
        "Multiply thirteen by forty-one first: ten boxes hold one hundred thirty pencils, "
        "so forty boxes hold five hundred twenty, and one more box brings five hundred "
        "thirty-three in total before any adjustment.",
    };
    assert(utf8_length(think_paragraphs[0]) >= 120);
    model->add_continuation(
        {vanilla_anchor(think_item),
         think_token_stream(think_paragraphs,
                            "Adding five loose and removing seven leaves $\\boxed{531}$."),
         {}});
    model->add_continuation({vanilla_anchor(odd_item),
                             think_token_stream({think_paragraphs[0]},
                                                "Botanically speaking: $\\boxed{Yes}$."),
                             {}});
    model->add_continuation({nothink_anchor(skip_item),
                             tokenize_words("The answer is $\\boxed{1024}$."),
                             {}});
    // Direct no-think runs of the think item, for the dispatch-equivalence test.
    model->add_continuation({nothink_anchor(think_item),
                             tokenize_words("The answer is $\\boxed{531}$."),
                             {}});

    g.items = {think_item, skip_item, odd_item};
    g.model = std::move(model);
    return g;
}

/// Open-ended scenario: the candidate trie {"42": 0.42, "2": 0.40, "4": 0.18}
/// plus a one-paragraph reasoned continuation.
struct OpenScenario {
    BenchmarkItem item;
    std::shared_ptr<ScriptedModel> model;
    std::map<std::string, std::map<std::string, double>> trie; // path -> dist
};

inline OpenScenario make_open_scenario() {
    OpenScenario o;
    o.item.id = "open-1";
    o.item.question = "What is six times seven?";
    o.item.gold = "42";
    o.item.task_kind = TaskKind::kBoxed;

    o.trie = {
        {"", {{"4", 0.6}, {"2", 0.4}}},
        {"4", {{"2", 0.7}, {"}", 0.3}}},
        {"42", {{"}", 1.0}}},
        {"2", {{"}", 1.0}}},
    };

    auto model = std::make_shared<ScriptedModel>();
    const std::string qualifier = "\\boxed{"; // open probe prompts end with this
    for (const auto& [path, dist] : o.trie) {
        model->add_distribution({qualifier + path, dist});
    }
    const std::vector<std::string> paragraphs = {
        "Split seven into five plus two and distribute: six times five is thirty and six "
        "times two is twelve, so the partial products combine to give forty-two overall.",
    };
    assert(utf8_length(paragraphs[0]) >= 120);
    model->add_continuation({o.item.render() + "\n\n" + kThinkOpen + "\n",
                             think_token_stream(paragraphs,
                                                "Therefore the product is $\\boxed{42}$."),
                             {}});
    // Bare reasoning prompt (sample collection) and the paraphrase prompt.
    model->add_continuation({o.item.render() + "\n\n",
                             tokenize_words("Reasoning sample: regroup seven as five plus two, "
                                            "multiply, and add to reach $\\boxed{42}$."),
                             {}});
    model->add_continuation({"Rewritten Process:",
                             tokenize_words(" Multiply six by seven directly to obtain "
                                            "forty-two in one step."),
                             {}});
    o.model = std::move(model);
    return o;
}

/// Decorator that records every outgoing request for byte-level assertions.
class RecordingClient : public CompletionClient {
public:
    explicit RecordingClient(CompletionClient& inner) : inner_(inner) {}

    CompletionResult complete(const CompletionRequest& req) override {
        {
            std::lock_guard lock(mu_);
            requests_.push_back(req);
        }
        return inner_.complete(req);
    }

    std::vector<CompletionRequest> requests() const {
        std::lock_guard lock(mu_);
        return requests_;
    }

private:
    CompletionClient& inner_;
    mutable std::mutex mu_;
    std::vector<CompletionRequest> requests_;
};

} // namespace thinkgate::testing
