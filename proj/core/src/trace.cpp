// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#include "thinkgate/trace.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "thinkgate/entropy.hpp"
#include "thinkgate/errors.hpp"

namespace thinkgate {

using nlohmann::json;

std::string to_string(ThinkMode mode) {
    switch (mode) {
    case ThinkMode::kVanilla: return "vanilla";
    case ThinkMode::kNoThink: return "nothink";
    case ThinkMode::kGated: return "gated";
    case ThinkMode::kAdaptive: return "adaptive";
    }
    return "vanilla";
}

ThinkMode mode_from_string(const std::string& s) {
    if (s == "vanilla") return ThinkMode::kVanilla;
    if (s == "nothink") return ThinkMode::kNoThink;
    if (s == "gated") return ThinkMode::kGated;
    if (s == "adaptive") return ThinkMode::kAdaptive;
    throw ConfigError("unknown think mode: " + s);
}

void StepRecord::validate() const {
    if (index < 0) {
        throw Error("StepRecord: negative index");
    }
    if (token_count < 0) {
        throw Error("StepRecord: negative token count");
    }
    if (entropy_bits && *entropy_bits < 0.0) {
        throw Error("StepRecord: negative entropy");
    }
    if (dist && entropy_bits && avg_entropy_bits) {
        const double expected = *entropy_bits / static_cast<double>(dist->size());
        if (std::abs(*avg_entropy_bits - expected) > 1e-12) {
            throw Error("StepRecord: avg_entropy_bits != entropy_bits / l");
        }
    }
}

void ThinkTrace::validate() const {
    if (stop_step.has_value() != stopped_early) {
        throw Error("ThinkTrace: stop_step must be present iff stopped_early");
    }
    long long step_tokens = 0;
    for (const auto& s : steps) {
        s.validate();
        step_tokens += s.token_count;
    }
    if (total_tokens < step_tokens) {
        throw Error("ThinkTrace: total_tokens below sum of step token counts");
    }
}

namespace {

json dist_to_json(const AnswerDistribution& d) {
    return json{{"candidates", d.candidates()}, {"probs", d.probs()}};
}

AnswerDistribution dist_from_json(const json& j) {
    return AnswerDistribution(j.at("candidates").get<std::vector<std::string>>(),
                              j.at("probs").get<std::vector<double>>());
}

json probe_to_json(const ProbeRecord& p) {
    json j = dist_to_json(p.dist);
    j["entropy_bits"] = p.entropy_bits;
    j["avg_entropy_bits"] = p.avg_entropy_bits;
    return j;
}

ProbeRecord probe_from_json(const json& j) {
    return ProbeRecord{dist_from_json(j), j.at("entropy_bits").get<double>(),
                       j.at("avg_entropy_bits").get<double>()};
}

template <typename T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
    if (v) j[key] = *v;
}

} // namespace

json ThinkTrace::to_json() const {
    json steps_json = json::array();
    for (const auto& s : steps) {
        json sj{{"index", s.index}, {"text", s.text}, {"token_count", s.token_count}};
        if (s.dist) sj["dist"] = dist_to_json(*s.dist);
        put_optional(sj, "entropy_bits", s.entropy_bits);
        put_optional(sj, "avg_entropy_bits", s.avg_entropy_bits);
        put_optional(sj, "info_gain_bits", s.info_gain_bits);
        put_optional(sj, "targeted_gain_bits", s.targeted_gain_bits);
        steps_json.push_back(std::move(sj));
    }
    json j{{"question_id", question_id},
           {"mode", to_string(mode)},
           {"steps", std::move(steps_json)},
           {"stopped_early", stopped_early},
           {"final_answer", final_answer},
           {"total_tokens", total_tokens},
           {"probe_tokens", probe_tokens}};
    if (initial_probe) j["initial_probe"] = probe_to_json(*initial_probe);
    put_optional(j, "stop_step", stop_step);
    put_optional(j, "correct", correct);
    put_optional(j, "gold", gold);
    if (gate_decision) {
        j["gate_decision"] = *gate_decision == GateDecision::kThink ? "think" : "nothink";
    }
    if (!notes.empty()) j["notes"] = notes;
    return j;
}

ThinkTrace ThinkTrace::from_json(const json& j) {
    ThinkTrace t;
    t.question_id = j.at("question_id").get<std::string>();
    t.mode = mode_from_string(j.at("mode").get<std::string>());
    for (const auto& sj : j.at("steps")) {
        StepRecord s;
        s.index = sj.at("index").get<int>();
        s.text = sj.at("text").get<std::string>();
        s.token_count = sj.at("token_count").get<int>();
        if (sj.contains("dist")) s.dist = dist_from_json(sj.at("dist"));
        if (sj.contains("entropy_bits")) s.entropy_bits = sj.at("entropy_bits").get<double>();
        if (sj.contains("avg_entropy_bits")) s.avg_entropy_bits = sj.at("avg_entropy_bits").get<double>();
        if (sj.contains("info_gain_bits")) s.info_gain_bits = sj.at("info_gain_bits").get<double>();
        if (sj.contains("targeted_gain_bits")) s.targeted_gain_bits = sj.at("targeted_gain_bits").get<double>();
        t.steps.push_back(std::move(s));
    }
    if (j.contains("initial_probe")) t.initial_probe = probe_from_json(j.at("initial_probe"));
    t.stopped_early = j.at("stopped_early").get<bool>();
    if (j.contains("stop_step")) t.stop_step = j.at("stop_step").get<int>();
    t.final_answer = j.at("final_answer").get<std::string>();
    if (j.contains("correct")) t.correct = j.at("correct").get<bool>();
    if (j.contains("gold")) t.gold = j.at("gold").get<std::string>();
    t.total_tokens = j.at("total_tokens").get<long long>();
    t.probe_tokens = j.value("probe_tokens", 0LL);
    if (j.contains("gate_decision")) {
        t.gate_decision = j.at("gate_decision").get<std::string>() == "think"
                              ? GateDecision::kThink
                              : GateDecision::kNoThink;
    }
    if (j.contains("notes")) t.notes = j.at("notes").get<std::vector<std::string>>();
    return t;
}

void ThinkTrace::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write trace file: " + path);
    }
    out << to_json().dump(2) << "\n";
}

ThinkTrace ThinkTrace::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot read trace file: " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error("malformed trace file " + path + ": " + e.what());
    }
    return from_json(j);
}

} // namespace thinkgate
