// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "thinkgate/benchmark_item.hpp"
#include "thinkgate/client.hpp"
#include "thinkgate/featurizer.hpp"
#include "thinkgate/trace.hpp"

namespace thinkgate {

/// N generated reasoning texts paired with N paraphrased reference
/// solutions, with one feature vector per sample.
struct TrajectorySampleSet {
    std::string question_id;
    std::vector<std::string> samples_s; // generated reasoning
    std::vector<std::string> samples_t; // paraphrased reference rationales
    std::vector<std::vector<double>> features_s;
    std::vector<std::vector<double>> features_t;
    std::vector<long long> token_counts; // per sample of S

    std::size_t size() const { return samples_s.size(); } // N

    /// N >= 2, matching row counts, consistent dimensions per side.
    void validate() const;

    nlohmann::json to_json() const;
    static TrajectorySampleSet from_json(const nlohmann::json& j);
    void save(const std::string& path) const;
    static TrajectorySampleSet load(const std::string& path);
};

enum class BandwidthRule { kMedianHeuristic, kFixed };

/// Gaussian-kernel dependence estimate configuration. The estimator is the
/// biased V-statistic trace(K H L H) / (N-1)^2.
struct HsicConfig {
    BandwidthRule bandwidth_rule = BandwidthRule::kMedianHeuristic;
    double sigma_x = 1.0; // used when fixed
    double sigma_y = 1.0;

    void validate() const;
};

/// Median of the N(N-1)/2 pairwise Euclidean distances (even count: mean of
/// the two middle values). Throws DegenerateBandwidth when the median
/// distance is zero; the caller substitutes sigma = 1.
double median_heuristic(const std::vector<std::vector<double>>& rows);

/// Biased V-statistic dependence score with Gaussian kernels and per-side
/// bandwidths; clamped at zero against negative rounding.
double hsic(const std::vector<std::vector<double>>& features_x,
            const std::vector<std::vector<double>>& features_y, const HsicConfig& cfg);

struct InfoBiasResult {
    double raw = 0.0;       // dependence score between S and T features
    double per_token = 0.0; // raw / mean token count of the S samples
};

/// Dependence between generated and reference trajectories, reported raw
/// and normalized per token.
InfoBiasResult info_bias(const TrajectorySampleSet& set, const HsicConfig& cfg);

/// Leading term sqrt(2 ln(2/delta) / N) of the estimator confidence bound;
/// the O(1/N) remainder is omitted.
double mi_confidence_bound(long long n, double delta);

struct CollectOptions {
    int n = 10;
    int parallelism = 4;
    std::string model;             // generation model id
    std::string paraphrase_model;  // may equal model (single-endpoint mode)
    GenerationParams gen;
    std::string reasoning_instruction; // empty -> default instruction
};

/// Generates n reasoning samples for the question and n paraphrases of the
/// reference solution, then featurizes both sides.
TrajectorySampleSet collect_samples(const BenchmarkItem& item, const std::string& gold_rationale,
                                    CompletionClient& model, CompletionClient& paraphraser,
                                    Featurizer& featurizer, const CollectOptions& opt);

/// Per-step entropy/gain series recomputed from a trace's stored snapshots.
struct GainSeries {
    std::vector<double> entropy_bits;
    std::vector<double> avg_entropy_bits;
    std::vector<double> info_gain_bits; // size = steps - 1
    std::optional<std::vector<double>> targeted_gain_bits;
    std::vector<std::string> warnings;
};

GainSeries trace_infogain(const ThinkTrace& trace, const std::optional<std::string>& gold);

/// One row of the normalized-step curve table behind the uncertainty plots.
struct CurveRow {
    std::string group; // "<mode>/<correct|incorrect|unknown>"
    int bin = 0;
    double mean_entropy = 0.0;
    std::optional<double> mean_p_gold;
    double ci_half_width = 0.0; // 1.96 * sd / sqrt(count), entropy values
    long long count = 0;
};

/// Maps each trace's step indices to [0,1] (i/(n-1); single-step traces map
/// to 0), bins by normalized position and aggregates per (mode x correct)
/// group: mean entropy, mean probability of the gold answer, count and a
/// 95% normal-approximation half-width.
std::vector<CurveRow> aggregate_curves(const std::vector<ThinkTrace>& traces, int bins);

/// CSV with header question_id,group,bin,mean_entropy,mean_p_gold,ci_half_width,count.
std::string curves_to_csv(const std::vector<CurveRow>& rows,
                          const std::string& question_id = "*");

} // namespace thinkgate
