// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#include "thinkgate/infometrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "thinkgate/entropy.hpp"
#include "thinkgate/errors.hpp"
#include "thinkgate/pool.hpp"
#include "thinkgate/prompts.hpp"

namespace thinkgate {

using nlohmann::json;

void TrajectorySampleSet::validate() const {
    const std::size_t n = samples_s.size();
    if (n < 2) {
        throw Error("TrajectorySampleSet: needs at least 2 samples");
    }
    if (samples_t.size() != n || features_s.size() != n || features_t.size() != n ||
        token_counts.size() != n) {
        throw ShapeError("TrajectorySampleSet: row counts do not match N");
    }
    for (const auto* side : {&features_s, &features_t}) {
        const std::size_t d = side->front().size();
        if (d == 0) {
            throw ShapeError("TrajectorySampleSet: empty feature vector");
        }
        for (const auto& row : *side) {
            if (row.size() != d) {
                throw ShapeError("TrajectorySampleSet: inconsistent feature dimension");
            }
        }
    }
}

json TrajectorySampleSet::to_json() const {
    return json{{"question_id", question_id}, {"samples_s", samples_s},
                {"samples_t", samples_t},     {"features_s", features_s},
                {"features_t", features_t},   {"token_counts", token_counts}};
}

TrajectorySampleSet TrajectorySampleSet::from_json(const json& j) {
    TrajectorySampleSet set;
    set.question_id = j.at("question_id").get<std::string>();
    set.samples_s = j.at("samples_s").get<std::vector<std::string>>();
    set.samples_t = j.at("samples_t").get<std::vector<std::string>>();
    set.features_s = j.at("features_s").get<std::vector<std::vector<double>>>();
    set.features_t = j.at("features_t").get<std::vector<std::vector<double>>>();
    set.token_counts = j.at("token_counts").get<std::vector<long long>>();
    return set;
}

void TrajectorySampleSet::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write sample set: " + path);
    }
    out << to_json().dump(2) << "\n";
}

TrajectorySampleSet TrajectorySampleSet::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot read sample set: " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error("malformed sample set " + path + ": " + e.what());
    }
    return from_json(j);
}

void HsicConfig::validate() const {
    if (bandwidth_rule == BandwidthRule::kFixed && (!(sigma_x > 0.0) || !(sigma_y > 0.0))) {
        throw ConfigError("HsicConfig: fixed bandwidths must be strictly positive");
    }
}

namespace {

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sq += d * d;
    }
    return std::sqrt(sq);
}

/// Gram matrix of the Gaussian kernel exp(-|a-b|^2 / (2 sigma^2)).
std::vector<std::vector<double>> gaussian_gram(const std::vector<std::vector<double>>& rows,
                                               double sigma) {
    const std::size_t n = rows.size();
    std::vector<std::vector<double>> k(n, std::vector<double>(n));
    const double denom = 2.0 * sigma * sigma;
    for (std::size_t i = 0; i < n; ++i) {
        k[i][i] = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = euclidean(rows[i], rows[j]);
            const double v = std::exp(-(d * d) / denom);
            k[i][j] = v;
            k[j][i] = v;
        }
    }
    return k;
}

double side_bandwidth(const std::vector<std::vector<double>>& rows, double fixed,
                      BandwidthRule rule) {
    if (rule == BandwidthRule::kFixed) {
        return fixed;
    }
    try {
        return median_heuristic(rows);
    } catch (const DegenerateBandwidth&) {
        return 1.0; // degenerate side: any bandwidth gives the same kernel
    }
}

} // namespace

double median_heuristic(const std::vector<std::vector<double>>& rows) {
    const std::size_t n = rows.size();
    if (n < 2) {
        throw ShapeError("median_heuristic: needs at least 2 rows");
    }
    const std::size_t d = rows.front().size();
    for (const auto& row : rows) {
        if (row.size() != d) {
            throw ShapeError("median_heuristic: inconsistent dimensions");
        }
    }
    std::vector<double> dists;
    dists.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            dists.push_back(euclidean(rows[i], rows[j]));
        }
    }
    std::sort(dists.begin(), dists.end());
    const std::size_t m = dists.size();
    const double median =
        m % 2 == 1 ? dists[m / 2] : 0.5 * (dists[m / 2 - 1] + dists[m / 2]);
    if (!(median > 0.0)) {
        throw DegenerateBandwidth("median pairwise distance is zero");
    }
    return median;
}

double hsic(const std::vector<std::vector<double>>& features_x,
            const std::vector<std::vector<double>>& features_y, const HsicConfig& cfg) {
    cfg.validate();
    const std::size_t n = features_x.size();
    if (n < 2) {
        throw ShapeError("hsic: needs at least 2 rows");
    }
    if (features_y.size() != n) {
        throw ShapeError("hsic: row counts differ");
    }

    const double sigma_x = side_bandwidth(features_x, cfg.sigma_x, cfg.bandwidth_rule);
    const double sigma_y = side_bandwidth(features_y, cfg.sigma_y, cfg.bandwidth_rule);
    const auto k = gaussian_gram(features_x, sigma_x);
    const auto l = gaussian_gram(features_y, sigma_y);

    // Double-center L (H L H) and contract against K; both matrices are
    // symmetric so trace(K H L H) = sum_ij K_ij (HLH)_ij.
    std::vector<double> row_mean(n, 0.0);
    double total_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            row_mean[i] += l[i][j];
        }
        total_mean += row_mean[i];
        row_mean[i] /= static_cast<double>(n);
    }
    total_mean /= static_cast<double>(n) * static_cast<double>(n);

    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double centered = l[i][j] - row_mean[i] - row_mean[j] + total_mean;
            trace += k[i][j] * centered;
        }
    }
    const double scale = static_cast<double>(n - 1) * static_cast<double>(n - 1);
    const double value = trace / scale;
    return value < 0.0 ? 0.0 : value;
}

InfoBiasResult info_bias(const TrajectorySampleSet& set, const HsicConfig& cfg) {
    set.validate();
    InfoBiasResult result;
    result.raw = hsic(set.features_s, set.features_t, cfg);
    double mean_tokens = 0.0;
    for (long long t : set.token_counts) {
        mean_tokens += static_cast<double>(t);
    }
    mean_tokens /= static_cast<double>(set.token_counts.size());
    if (!(mean_tokens > 0.0)) {
        throw Error("info_bias: mean token count must be positive");
    }
    result.per_token = result.raw / mean_tokens;
    return result;
}

double mi_confidence_bound(long long n, double delta) {
    if (n < 1) {
        throw std::domain_error("mi_confidence_bound: N must be >= 1");
    }
    if (!(delta > 0.0) || delta >= 1.0) {
        throw std::domain_error("mi_confidence_bound: delta must be in (0, 1)");
    }
    return std::sqrt(2.0 * std::log(2.0 / delta) / static_cast<double>(n));
}

TrajectorySampleSet collect_samples(const BenchmarkItem& item, const std::string& gold_rationale,
                                    CompletionClient& model, CompletionClient& paraphraser,
                                    Featurizer& featurizer, const CollectOptions& opt) {
    if (opt.n < 2) {
        throw ConfigError("collect_samples: n must be >= 2");
    }
    const std::string instruction = opt.reasoning_instruction.empty()
                                        ? PromptSet::defaults().reasoning_instruction
                                        : opt.reasoning_instruction;
    const std::string gen_prompt = instruction + "\n\n" + item.render() + "\n\n";
    const std::string para_prompt = render_paraphrase_prompt(gold_rationale);

    TrajectorySampleSet set;
    set.question_id = item.id;
    set.samples_s.resize(static_cast<std::size_t>(opt.n));
    set.samples_t.resize(static_cast<std::size_t>(opt.n));
    set.token_counts.resize(static_cast<std::size_t>(opt.n));

    // 2n independent requests: first n generations, then n paraphrases.
    parallel_for(static_cast<std::size_t>(2 * opt.n), opt.parallelism, [&](std::size_t task) {
        CompletionRequest req;
        req.params = opt.gen;
        if (task < static_cast<std::size_t>(opt.n)) {
            req.model = opt.model;
            req.prompt = gen_prompt;
            const CompletionResult res = model.complete(req);
            set.samples_s[task] = res.text;
            set.token_counts[task] = res.completion_tokens;
        } else {
            const std::size_t i = task - static_cast<std::size_t>(opt.n);
            req.model = opt.paraphrase_model.empty() ? opt.model : opt.paraphrase_model;
            req.prompt = para_prompt;
            const CompletionResult res = paraphraser.complete(req);
            set.samples_t[i] = res.text;
        }
    });

    set.features_s = featurizer.featurize(set.samples_s);
    set.features_t = featurizer.featurize(set.samples_t);
    set.validate();
    return set;
}

GainSeries trace_infogain(const ThinkTrace& trace, const std::optional<std::string>& gold) {
    GainSeries series;
    std::vector<const AnswerDistribution*> dists;
    for (const auto& step : trace.steps) {
        if (!step.dist) {
            throw Error("trace_infogain: trace has no per-step distributions (step " +
                        std::to_string(step.index) + ")");
        }
        dists.push_back(&*step.dist);
    }
    for (const auto* dist : dists) {
        series.entropy_bits.push_back(entropy_bits(*dist));
        series.avg_entropy_bits.push_back(avg_entropy_bits(*dist));
    }
    for (std::size_t i = 1; i < series.entropy_bits.size(); ++i) {
        series.info_gain_bits.push_back(
            info_gain_bits(series.entropy_bits[i - 1], series.entropy_bits[i]));
    }
    if (gold && !gold->empty()) {
        std::vector<double> targeted;
        bool ok = !dists.empty();
        std::optional<double> prev;
        for (const auto* dist : dists) {
            const auto p = dist->prob_of(*gold);
            if (!p) {
                ok = false;
                series.warnings.push_back("gold answer '" + *gold +
                                          "' not in candidate set; targeted series omitted");
                break;
            }
            if (prev) {
                targeted.push_back(targeted_gain_bits(*prev, *p));
            }
            prev = *p;
        }
        if (ok) {
            series.targeted_gain_bits = std::move(targeted);
        }
    }
    return series;
}

std::vector<CurveRow> aggregate_curves(const std::vector<ThinkTrace>& traces, int bins) {
    if (bins < 2) {
        throw ConfigError("aggregate_curves: bins must be >= 2");
    }
    struct Accum {
        std::vector<double> entropies;
        std::vector<double> p_golds;
    };
    std::map<std::pair<std::string, int>, Accum> groups;

    for (const auto& trace : traces) {
        const std::size_t n = trace.steps.size();
        if (n == 0) continue;
        std::string correctness = "unknown";
        if (trace.correct.has_value()) {
            correctness = *trace.correct ? "correct" : "incorrect";
        }
        const std::string group = to_string(trace.mode) + "/" + correctness;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& step = trace.steps[i];
            if (!step.dist) continue;
            const double pos =
                n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
            const int bin = std::min(static_cast<int>(pos * bins), bins - 1);
            Accum& acc = groups[{group, bin}];
            acc.entropies.push_back(step.entropy_bits ? *step.entropy_bits
                                                      : entropy_bits(*step.dist));
            if (trace.gold) {
                if (const auto p = step.dist->prob_of(*trace.gold)) {
                    acc.p_golds.push_back(*p);
                }
            }
        }
    }

    std::vector<CurveRow> rows;
    rows.reserve(groups.size());
    for (const auto& [key, acc] : groups) {
        CurveRow row;
        row.group = key.first;
        row.bin = key.second;
        row.count = static_cast<long long>(acc.entropies.size());
        double mean = 0.0;
        for (double h : acc.entropies) mean += h;
        mean /= static_cast<double>(acc.entropies.size());
        row.mean_entropy = mean;
        if (acc.entropies.size() >= 2) {
            double var = 0.0;
            for (double h : acc.entropies) var += (h - mean) * (h - mean);
            var /= static_cast<double>(acc.entropies.size() - 1);
            row.ci_half_width =
                1.96 * std::sqrt(var) / std::sqrt(static_cast<double>(acc.entropies.size()));
        }
        if (!acc.p_golds.empty()) {
            double pg = 0.0;
            for (double p : acc.p_golds) pg += p;
            row.mean_p_gold = pg / static_cast<double>(acc.p_golds.size());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string curves_to_csv(const std::vector<CurveRow>& rows, const std::string& question_id) {
    std::ostringstream out;
    out << "question_id,group,bin,mean_entropy,mean_p_gold,ci_half_width,count\n";
    out.precision(12);
    for (const auto& row : rows) {
        out << question_id << ',' << row.group << ',' << row.bin << ',' << row.mean_entropy
            << ',';
        if (row.mean_p_gold) {
            out << *row.mean_p_gold;
        }
        out << ',' << row.ci_half_width << ',' << row.count << "\n";
    }
    return out.str();
}

} // namespace thinkgate
