// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#include "thinkgate/bench.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "thinkgate/errors.hpp"
#include "thinkgate/pool.hpp"
#include "thinkgate/text.hpp"

namespace thinkgate {

using nlohmann::json;
namespace fs = std::filesystem;

void BenchmarkItem::validate() const {
    if (id.empty()) {
        throw DatasetError("item with empty id");
    }
    if (task_kind == TaskKind::kOptionLetter) {
        if (choices.empty()) {
            throw DatasetError("item " + id + ": multiple choice without choices");
        }
        bool gold_found = false;
        for (const auto& [label, text] : choices) {
            if (label == gold) gold_found = true;
        }
        if (!gold_found) {
            throw DatasetError("item " + id + ": gold '" + gold + "' not among choice labels");
        }
    }
}

std::string BenchmarkItem::render() const {
    std::string out = "Question: " + question;
    for (const auto& [label, text] : choices) {
        out += "\n" + label + ". " + text;
    }
    return out;
}

std::vector<std::string> BenchmarkItem::choice_labels() const {
    std::vector<std::string> labels;
    labels.reserve(choices.size());
    for (const auto& [label, text] : choices) {
        labels.push_back(label);
    }
    return labels;
}

std::vector<BenchmarkItem> load_dataset(const std::string& path, DatasetSchema schema) {
    std::ifstream in(path);
    if (!in) {
        throw DatasetError("cannot open dataset: " + path);
    }
    std::vector<BenchmarkItem> items;
    std::set<std::string> ids;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw DatasetError(path + ":" + std::to_string(line_no) + ": bad JSON: " + e.what());
        }
        try {
            BenchmarkItem item;
            item.id = j.at("id").is_string() ? j.at("id").get<std::string>()
                                             : j.at("id").dump();
            item.question = j.at("question").get<std::string>();
            if (j.contains("gold") && j.at("gold").is_string()) {
                item.gold = j.at("gold").get<std::string>();
            } else {
                item.gold = j.at("gold").dump();
            }
            if (schema == DatasetSchema::kMultipleChoice) {
                item.task_kind = TaskKind::kOptionLetter;
                for (const auto& c : j.at("choices")) {
                    if (c.is_array()) {
                        item.choices.emplace_back(c.at(0).get<std::string>(),
                                                  c.at(1).get<std::string>());
                    } else {
                        item.choices.emplace_back(c.at("label").get<std::string>(),
                                                  c.at("text").get<std::string>());
                    }
                }
            } else {
                item.task_kind = TaskKind::kBoxed;
            }
            item.validate();
            if (!ids.insert(item.id).second) {
                throw DatasetError("duplicate id '" + item.id + "'");
            }
            items.push_back(std::move(item));
        } catch (const json::exception& e) {
            throw DatasetError(path + ":" + std::to_string(line_no) + ": " + e.what());
        } catch (const DatasetError& e) {
            throw DatasetError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return items;
}

namespace {

std::string canon_answer(std::string_view s) {
    std::string_view t = trim(s);
    while (!t.empty() && t.front() == '$') t.remove_prefix(1);
    while (!t.empty() && t.back() == '$') t.remove_suffix(1);
    return std::string(trim(t));
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

} // namespace

bool answers_match(const std::string& answer, const std::string& gold) {
    const std::string a = canon_answer(answer);
    const std::string g = canon_answer(gold);
    if (a.empty() || g.empty()) {
        return false;
    }
    double da = 0.0;
    double dg = 0.0;
    if (parse_number(a, da) && parse_number(g, dg)) {
        return da == dg;
    }
    return iequals(a, g);
}

void RunReport::validate() const {
    if (per_run.empty()) return;
    double mean = 0.0;
    for (const auto& r : per_run) mean += r.accuracy;
    mean /= static_cast<double>(per_run.size());
    if (std::abs(mean - accuracy_mean) > 1e-9) {
        throw Error("RunReport: accuracy_mean drifted from per-run accuracies");
    }
}

json RunReport::to_json() const {
    json per_run_json = json::array();
    for (const auto& r : per_run) {
        per_run_json.push_back(json{{"accuracy", r.accuracy}, {"tokens", r.tokens}});
    }
    json per_item_json = json::array();
    for (const auto& it : per_item) {
        json stop_steps = json::array();
        for (const auto& s : it.stop_steps) {
            stop_steps.push_back(s ? json(*s) : json());
        }
        per_item_json.push_back(json{{"id", it.id},
                                     {"answers", it.answers},
                                     {"correct", it.correct},
                                     {"tokens", it.tokens},
                                     {"stop_steps", std::move(stop_steps)},
                                     {"trace_paths", it.trace_paths}});
    }
    json j{{"dataset", dataset},
           {"mode", to_string(mode)},
           {"runs", runs},
           {"accuracy_mean", accuracy_mean},
           {"tokens_mean", tokens_mean},
           {"probe_tokens_mean", probe_tokens_mean},
           {"per_run", std::move(per_run_json)},
           {"per_item", std::move(per_item_json)}};
    if (alpha) j["alpha"] = *alpha;
    if (gate_stats) {
        j["gate_stats"] = json{{"think", gate_stats->think}, {"nothink", gate_stats->nothink}};
    }
    if (delta_vs_vanilla) {
        json dj = json::object();
        if (delta_vs_vanilla->accuracy_pct) dj["accuracy_pct"] = *delta_vs_vanilla->accuracy_pct;
        if (delta_vs_vanilla->tokens_pct) dj["tokens_pct"] = *delta_vs_vanilla->tokens_pct;
        j["delta_vs_vanilla"] = std::move(dj);
    }
    return j;
}

RunReport RunReport::from_json(const json& j) {
    RunReport r;
    r.dataset = j.at("dataset").get<std::string>();
    r.mode = mode_from_string(j.at("mode").get<std::string>());
    if (j.contains("alpha")) r.alpha = j.at("alpha").get<double>();
    r.runs = j.at("runs").get<int>();
    r.accuracy_mean = j.at("accuracy_mean").get<double>();
    r.tokens_mean = j.at("tokens_mean").get<double>();
    r.probe_tokens_mean = j.value("probe_tokens_mean", 0.0);
    for (const auto& rj : j.at("per_run")) {
        r.per_run.push_back(PerRun{rj.at("accuracy").get<double>(), rj.at("tokens").get<double>()});
    }
    for (const auto& ij : j.at("per_item")) {
        PerItem it;
        it.id = ij.at("id").get<std::string>();
        it.answers = ij.at("answers").get<std::vector<std::string>>();
        it.correct = ij.at("correct").get<std::vector<bool>>();
        it.tokens = ij.at("tokens").get<std::vector<long long>>();
        for (const auto& s : ij.at("stop_steps")) {
            it.stop_steps.push_back(s.is_null() ? std::optional<int>{} : s.get<int>());
        }
        it.trace_paths = ij.value("trace_paths", std::vector<std::string>{});
        r.per_item.push_back(std::move(it));
    }
    if (j.contains("gate_stats")) {
        r.gate_stats = GateStats{j["gate_stats"].at("think").get<long long>(),
                                 j["gate_stats"].at("nothink").get<long long>()};
    }
    if (j.contains("delta_vs_vanilla")) {
        Delta delta;
        if (j["delta_vs_vanilla"].contains("accuracy_pct")) {
            delta.accuracy_pct = j["delta_vs_vanilla"]["accuracy_pct"].get<double>();
        }
        if (j["delta_vs_vanilla"].contains("tokens_pct")) {
            delta.tokens_pct = j["delta_vs_vanilla"]["tokens_pct"].get<double>();
        }
        r.delta_vs_vanilla = delta;
    }
    return r;
}

void RunReport::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write report: " + path);
    }
    out << to_json().dump(2) << "\n";
}

RunReport RunReport::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot read report: " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error("malformed report " + path + ": " + e.what());
    }
    return from_json(j);
}

namespace {

struct TaskResult {
    std::string answer;
    bool correct = false;
    long long tokens = 0;
    long long probe_tokens = 0;
    std::optional<int> stop_step;
    std::optional<GateDecision> gate_decision;
    std::string trace_path;
};

} // namespace

RunReport run_benchmark(const std::vector<BenchmarkItem>& items, const ModeConfig& cfg,
                        const BenchOptions& opt, CompletionClient& model,
                        const std::string& dataset_name) {
    if (opt.runs < 1) {
        throw ConfigError("run_benchmark: runs must be >= 1");
    }
    if (items.empty()) {
        throw ConfigError("run_benchmark: empty dataset");
    }
    cfg.validate();

    const bool persist = !opt.out_dir.empty();
    if (persist) {
        for (int r = 0; r < opt.runs; ++r) {
            fs::create_directories(opt.out_dir / ("run" + std::to_string(r)));
        }
    }

    const std::size_t n_items = items.size();
    std::vector<TaskResult> results(n_items * static_cast<std::size_t>(opt.runs));

    parallel_for(results.size(), opt.parallelism, [&](std::size_t task) {
        const std::size_t run = task / n_items;
        const std::size_t idx = task % n_items;
        const BenchmarkItem& item = items[idx];
        TaskResult& slot = results[task];

        fs::path trace_path;
        if (persist) {
            trace_path = opt.out_dir / ("run" + std::to_string(run)) / (item.id + ".json");
            slot.trace_path = trace_path.string();
        }

        ThinkTrace trace;
        bool have_trace = false;
        if (persist && opt.resume && fs::exists(trace_path)) {
            try {
                trace = ThinkTrace::load(trace_path.string());
                trace.validate();
                if (trace.question_id == item.id) {
                    have_trace = true;
                }
            } catch (const std::exception&) {
                have_trace = false; // invalid cached trace is recomputed
            }
        }
        if (!have_trace) {
            try {
                Controller controller(model, cfg);
                trace = controller.run(item);
            } catch (const std::exception& e) {
                // Scored incorrect; the run continues.
                trace = ThinkTrace{};
                trace.question_id = item.id;
                trace.mode = cfg.mode;
                trace.notes.push_back(std::string("run failed: ") + e.what());
            }
            trace.correct = answers_match(trace.final_answer, item.gold);
            if (persist) {
                trace.save(trace_path.string());
            }
        } else if (!trace.correct.has_value()) {
            trace.correct = answers_match(trace.final_answer, item.gold);
        }

        slot.answer = trace.final_answer;
        slot.correct = trace.correct.value_or(false);
        slot.tokens = trace.total_tokens;
        slot.probe_tokens = trace.probe_tokens;
        slot.stop_step = trace.stop_step;
        slot.gate_decision = trace.gate_decision;
    });

    RunReport report;
    report.dataset = dataset_name;
    report.mode = cfg.mode;
    if (cfg.mode == ThinkMode::kAdaptive) {
        report.alpha = cfg.policy.alpha;
    }
    report.runs = opt.runs;

    double acc_sum = 0.0;
    double tok_sum = 0.0;
    double probe_sum = 0.0;
    for (int r = 0; r < opt.runs; ++r) {
        long long correct = 0;
        long long tokens = 0;
        long long probe_tokens = 0;
        for (std::size_t i = 0; i < n_items; ++i) {
            const TaskResult& slot = results[static_cast<std::size_t>(r) * n_items + i];
            correct += slot.correct ? 1 : 0;
            tokens += slot.tokens;
            probe_tokens += slot.probe_tokens;
        }
        RunReport::PerRun per_run;
        per_run.accuracy = 100.0 * static_cast<double>(correct) / static_cast<double>(n_items);
        per_run.tokens = static_cast<double>(tokens) / static_cast<double>(n_items);
        report.per_run.push_back(per_run);
        acc_sum += per_run.accuracy;
        tok_sum += per_run.tokens;
        probe_sum += static_cast<double>(probe_tokens) / static_cast<double>(n_items);
    }
    report.accuracy_mean = acc_sum / opt.runs;
    report.tokens_mean = tok_sum / opt.runs;
    report.probe_tokens_mean = probe_sum / opt.runs;

    for (std::size_t i = 0; i < n_items; ++i) {
        RunReport::PerItem item_row;
        item_row.id = items[i].id;
        for (int r = 0; r < opt.runs; ++r) {
            const TaskResult& slot = results[static_cast<std::size_t>(r) * n_items + i];
            item_row.answers.push_back(slot.answer);
            item_row.correct.push_back(slot.correct);
            item_row.tokens.push_back(slot.tokens);
            item_row.stop_steps.push_back(slot.stop_step);
            if (!slot.trace_path.empty()) {
                item_row.trace_paths.push_back(slot.trace_path);
            }
        }
        report.per_item.push_back(std::move(item_row));
    }

    if (cfg.mode == ThinkMode::kGated) {
        RunReport::GateStats stats;
        for (const auto& slot : results) {
            if (slot.gate_decision) {
                (*slot.gate_decision == GateDecision::kThink ? stats.think : stats.nothink) += 1;
            }
        }
        report.gate_stats = stats;
    }

    if (persist) {
        json manifest{{"dataset", dataset_name},
                      {"mode", to_string(cfg.mode)},
                      {"runs", opt.runs}};
        if (report.alpha) manifest["alpha"] = *report.alpha;
        json id_list = json::array();
        for (const auto& item : items) id_list.push_back(item.id);
        manifest["items"] = std::move(id_list);
        std::ofstream mf(opt.out_dir / "manifest.json");
        mf << manifest.dump(2) << "\n";
        report.save((opt.out_dir / "report.json").string());
    }

    report.validate();
    return report;
}

double relative_delta_pct(double base, double value) {
    if (base == 0.0) {
        throw Error("relative delta undefined for a zero baseline");
    }
    return 100.0 * (value - base) / base;
}

namespace {

std::string mode_label(const RunReport& r) {
    std::string label = to_string(r.mode);
    if (r.alpha) {
        std::ostringstream os;
        os << label << " (alpha=" << *r.alpha << ")";
        return os.str();
    }
    return label;
}

std::string signed_pct(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << (v >= 0 ? "+" : "") << v << "%";
    return os.str();
}

} // namespace

ReportDocument emit_report(const RunReport& vanilla_baseline, std::vector<RunReport> others) {
    if (vanilla_baseline.mode != ThinkMode::kVanilla) {
        throw Error("emit_report: baseline must be a vanilla run");
    }
    for (auto& r : others) {
        if (r.dataset != vanilla_baseline.dataset) {
            throw Error("emit_report: dataset mismatch: '" + r.dataset + "' vs '" +
                        vanilla_baseline.dataset + "'");
        }
        RunReport::Delta delta;
        if (vanilla_baseline.accuracy_mean != 0.0) {
            delta.accuracy_pct = relative_delta_pct(vanilla_baseline.accuracy_mean, r.accuracy_mean);
        }
        if (vanilla_baseline.tokens_mean != 0.0) {
            delta.tokens_pct = relative_delta_pct(vanilla_baseline.tokens_mean, r.tokens_mean);
        }
        r.delta_vs_vanilla = delta;
    }

    std::ostringstream human;
    human << "Dataset: " << vanilla_baseline.dataset << "  (runs=" << vanilla_baseline.runs
          << ")\n";
    human << std::left << std::setw(28) << "  Think Mode" << std::right << std::setw(10) << "Acc"
          << std::setw(12) << "#Token" << std::setw(12) << "ProbeTok" << "\n";
    const auto row = [&](const RunReport& r) {
        human << std::left << std::setw(28) << ("  " + mode_label(r)) << std::right
              << std::fixed << std::setprecision(2) << std::setw(10) << r.accuracy_mean
              << std::setw(12) << r.tokens_mean << std::setw(12) << r.probe_tokens_mean << "\n";
        if (r.delta_vs_vanilla) {
            const auto cell = [](const std::optional<double>& v) {
                return v ? signed_pct(*v) : std::string("n/a");
            };
            human << std::left << std::setw(28) << "    delta vs. vanilla" << std::right
                  << std::setw(10) << cell(r.delta_vs_vanilla->accuracy_pct)
                  << std::setw(12) << cell(r.delta_vs_vanilla->tokens_pct) << "\n";
        }
        if (r.gate_stats) {
            const double total =
                static_cast<double>(r.gate_stats->think + r.gate_stats->nothink);
            human << "    gate decisions: think " << r.gate_stats->think << " ("
                  << std::setprecision(1)
                  << (total > 0 ? 100.0 * r.gate_stats->think / total : 0.0) << "%), nothink "
                  << r.gate_stats->nothink << "\n" << std::setprecision(2);
        }
    };
    row(vanilla_baseline);
    for (const auto& r : others) row(r);

    std::ostringstream csv;
    csv << "dataset,mode,alpha,runs,accuracy_mean,tokens_mean,probe_tokens_mean,"
           "delta_accuracy_pct,delta_tokens_pct,gate_think,gate_nothink\n";
    const auto csv_row = [&](const RunReport& r) {
        csv << r.dataset << ',' << to_string(r.mode) << ',';
        if (r.alpha) csv << *r.alpha;
        csv << ',' << r.runs << ',' << std::setprecision(10) << r.accuracy_mean << ','
            << r.tokens_mean << ',' << r.probe_tokens_mean << ',';
        if (r.delta_vs_vanilla) {
            if (r.delta_vs_vanilla->accuracy_pct) csv << *r.delta_vs_vanilla->accuracy_pct;
            csv << ',';
            if (r.delta_vs_vanilla->tokens_pct) csv << *r.delta_vs_vanilla->tokens_pct;
        } else {
            csv << ',';
        }
        csv << ',';
        if (r.gate_stats) {
            csv << r.gate_stats->think << ',' << r.gate_stats->nothink;
        } else {
            csv << ',';
        }
        csv << "\n";
    };
    csv_row(vanilla_baseline);
    for (const auto& r : others) csv_row(r);

    ReportDocument doc;
    doc.human = human.str();
    doc.csv = csv.str();
    doc.reports.push_back(vanilla_baseline);
    for (auto& r : others) doc.reports.push_back(std::move(r));
    return doc;
}

} // namespace thinkgate
