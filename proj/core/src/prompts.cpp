// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#include "thinkgate/prompts.hpp"

#include "thinkgate/errors.hpp"

namespace thinkgate {

const std::string kNoThinkSentence =
    "This is a simple question that I will answer directly without deep thinking.";

const std::string kParaphraseTemplate =
    "You will be given a problem-solving process. Please rewrite this process without "
    "changing its logic or content. Ensure that the output includes only the rewritten "
    "process and nothing else.\n\nProblem-Solving Process: {input}\n\nRewritten Process:";

namespace {

const char* kGateCriteria = R"(You are an intelligent reasoning assistant. Upon receiving a question, you must determine whether it requires Deep Think Mode---which involves rigorous, multi-step, and systematic complex reasoning.

Evaluation Criteria (At least TWO must be met to trigger Deep Think Mode):

1. Cannot be answered directly based on the question itself
- The answer is not immediately apparent from general knowledge, simple reasoning, or single-step calculations.
- The question requires combining multiple knowledge points, hidden conditions, or assumptions.

2. Multi-step reasoning & information integration
- The solution involves sequential logical steps, where each step depends on previous conclusions.
- Multiple data sources, conditions, or assumptions must be synthesized to derive the final answer.

3. Strict mathematical/logical proof or recursive deduction
- The problem requires formal proof (e.g., deductive reasoning, axiomatic proofs).
- It involves recursive reasoning, mathematical induction, or constructing counterexamples.

4. Non-trivial strategy or non-unique solution
- The question requires evaluating multiple potential solutions and choosing the optimal one.
- There may be multiple valid approaches, requiring deep analysis and comparison.

5. Systematic reasoning & hypothesis-based deduction
- The question requires establishing hypotheses and systematically deriving conclusions.
- Multiple variables and complex relationships are involved, requiring a rigorous analytical process.

Output Format:
- "YES" (Deep Think Mode required)
  If the question meets at least 2 criteria, return "YES" and briefly explain why.
- "NO" (Deep Think Mode not required)
  If the question only requires basic or short-step reasoning, return "NO" and explain why it can be answered directly.

Examples

Requires Deep Think
- Input: "Let A, B, and C be three sets. Prove that A n (B u C) = (A n B) u (A n C)."
  Output: "YES -- This problem involves set operations and requires a formal mathematical proof with multi-step logical deductions."
- Input: "If the speed of light is the cosmic limit, but the universe is expanding, is it possible for two regions to be permanently unobservable from each other?"
  Output: "YES -- This question involves relativity, cosmology, and hypothesis-based deduction, requiring systematic reasoning."
- Input: "On an 8x8 chessboard, if two opposite corners are removed, can it be completely covered by 2x1 dominoes?"
  Output: "YES -- This requires constructing a counterexample, analyzing the board's parity, and recursive reasoning."

Does Not Require Deep Think
- Input: "What is 2^10?"
  Output: "NO -- This is a straightforward computation that can be answered directly."
- Input: "Tom is 5 years older than Alice. Alice is 10 years old. How old is Tom?"
  Output: "NO -- This is a basic arithmetic problem that does not require complex reasoning."
- Input: "Why is water heavier than oil?"
  Output: "NO -- This is a factual question about density that can be answered using common knowledge."
)";

} // namespace

PromptSet PromptSet::defaults() {
    PromptSet p;
    p.reasoning_instruction =
        "Please answer the question step by step. Remember to box your final answer via "
        "$\\boxed{your answer}$. If there is no correct answer, give a random answer.";
    p.nothink_stub = std::string(kThinkOpen) + "\n" + kNoThinkSentence + "\n" + kThinkClose + "\n\n";
    p.gate_criteria = kGateCriteria;
    return p;
}

void PromptSet::validate() const {
    if (nothink_stub.find(kNoThinkSentence) == std::string::npos) {
        throw ConfigError("PromptSet: nothink_stub lost its direct-answer sentence");
    }
    if (nothink_stub.find(kThinkOpen) == std::string::npos ||
        nothink_stub.find(kThinkClose) == std::string::npos) {
        throw ConfigError("PromptSet: nothink_stub must open and close a think block");
    }
}

std::string render_paraphrase_prompt(const std::string& solution) {
    std::string out = kParaphraseTemplate;
    const std::string placeholder = "{input}";
    const std::size_t pos = out.find(placeholder);
    if (pos != std::string::npos) {
        out.replace(pos, placeholder.size(), solution);
    }
    return out;
}

} // namespace thinkgate
