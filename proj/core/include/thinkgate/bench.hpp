// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "thinkgate/benchmark_item.hpp"
#include "thinkgate/controller.hpp"
#include "thinkgate/trace.hpp"

namespace thinkgate {

enum class DatasetSchema { kMultipleChoice, kOpen };

/// Newline-delimited JSON records: {id, question, choices, gold} for mc,
/// {id, question, gold} for open. Errors name the offending line;
/// duplicate ids are rejected.
std::vector<BenchmarkItem> load_dataset(const std::string& path, DatasetSchema schema);

/// Answer scoring: trims whitespace, strips enclosing '$', compares
/// parseable numbers numerically and letters case-insensitively.
bool answers_match(const std::string& answer, const std::string& gold);

/// Aggregated result of `runs` full passes over a dataset in one mode.
struct RunReport {
    std::string dataset;
    ThinkMode mode = ThinkMode::kVanilla;
    std::optional<double> alpha;
    int runs = 5;
    double accuracy_mean = 0.0; // percent
    double tokens_mean = 0.0;
    double probe_tokens_mean = 0.0;

    struct PerRun {
        double accuracy = 0.0;
        double tokens = 0.0;
    };
    std::vector<PerRun> per_run;

    struct PerItem {
        std::string id;
        std::vector<std::string> answers;  // per run
        std::vector<bool> correct;         // per run
        std::vector<long long> tokens;     // per run
        std::vector<std::optional<int>> stop_steps;
        std::vector<std::string> trace_paths;
    };
    std::vector<PerItem> per_item;

    struct GateStats {
        long long think = 0;
        long long nothink = 0;
    };
    std::optional<GateStats> gate_stats;

    struct Delta {
        // Relative changes in percent; absent when the corresponding
        // baseline value is zero (the ratio is undefined).
        std::optional<double> accuracy_pct;
        std::optional<double> tokens_pct;
    };
    std::optional<Delta> delta_vs_vanilla;

    void validate() const;
    nlohmann::json to_json() const;
    static RunReport from_json(const nlohmann::json& j);
    void save(const std::string& path) const;
    static RunReport load(const std::string& path);
};

struct BenchOptions {
    int runs = 5;
    int parallelism = 1;
    std::filesystem::path out_dir; // empty disables persistence
    bool resume = true;            // reuse traces that exist and validate
};

/// Executes `runs` full passes; each (item, run) pair produces a trace via
/// the controller and is scored against the gold answer. Per-item failures
/// score incorrect and are noted; the run never aborts on a single item.
RunReport run_benchmark(const std::vector<BenchmarkItem>& items, const ModeConfig& cfg,
                        const BenchOptions& opt, CompletionClient& model,
                        const std::string& dataset_name);

/// Relative percentage change 100*(value-base)/base, the convention used by
/// the delta rows of the report.
double relative_delta_pct(double base, double value);

struct ReportDocument {
    std::string human; // fixed-width table
    std::string csv;   // machine-readable
    std::vector<RunReport> reports; // deltas filled in, baseline first
};

/// One table per dataset with Acc / #Token columns per mode plus delta rows
/// against the vanilla baseline. Throws when a report's dataset does not
/// match the baseline's.
ReportDocument emit_report(const RunReport& vanilla_baseline, std::vector<RunReport> others);

} // namespace thinkgate
