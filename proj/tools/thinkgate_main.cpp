// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
//
// thinkgate: run reasoning-mode benchmarks against a logprob-exposing
// completion endpoint, probe single questions, analyze recorded traces and
// serve the scripted mock model.
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "thinkgate/bench.hpp"
#include "thinkgate/controller.hpp"
#include "thinkgate/errors.hpp"
#include "thinkgate/infometrics.hpp"
#include "thinkgate/mock_model.hpp"
#include "thinkgate/prompts.hpp"
#include "thinkgate/text.hpp"

namespace fs = std::filesystem;
using namespace thinkgate;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitTransport = 3;
constexpr int kExitPartialFailure = 4;

struct EndpointArgs {
    std::string endpoint;
    std::string auth_token;
    std::string model;
    std::string mock_script;

    void attach(CLI::App* cmd) {
        cmd->add_option("--endpoint", endpoint,
                        "Completion endpoint base URL (env THINKGATE_BASE_URL)");
        cmd->add_option("--auth-token", auth_token,
                        "Bearer token (env THINKGATE_AUTH_TOKEN)");
        cmd->add_option("--model", model, "Model id sent with every request");
        cmd->add_option("--mock-script", mock_script,
                        "Serve requests in-process from a scripted model file");
    }

    std::unique_ptr<CompletionClient> make_client() const {
        if (!mock_script.empty()) {
            auto model_ptr = std::make_shared<ScriptedModel>(ScriptedModel::load_script(mock_script));
            return std::make_unique<ScriptedClient>(std::move(model_ptr));
        }
        ClientConfig cfg = ClientConfig::from_env();
        if (!endpoint.empty()) cfg.base_url = endpoint;
        if (!auth_token.empty()) cfg.auth_token = auth_token;
        return std::make_unique<HttpCompletionClient>(cfg);
    }
};

struct GenArgs {
    GenerationParams gen;
    bool omit_repetition_penalty = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--temperature", gen.temperature, "Sampling temperature")
            ->capture_default_str();
        cmd->add_option("--top-p", gen.top_p, "Nucleus sampling mass")->capture_default_str();
        cmd->add_option("--repetition-penalty", gen.repetition_penalty,
                        "Repetition penalty extension field")
            ->capture_default_str();
        cmd->add_option("--max-tokens", gen.max_tokens, "Per-request completion cap")
            ->capture_default_str();
        cmd->add_option("--logprobs-k", gen.logprobs_k, "Top alternatives requested per token")
            ->capture_default_str();
        cmd->add_flag("--omit-repetition-penalty", omit_repetition_penalty,
                      "Do not send the repetition_penalty field");
    }
};

struct PolicyArgs {
    StopPolicy policy;

    void attach(CLI::App* cmd) {
        cmd->add_option("--min-step-chars", policy.min_step_chars,
                        "Minimum characters before a step boundary counts")
            ->capture_default_str();
        cmd->add_option("--max-steps", policy.max_steps, "Hard cap on reasoning steps")
            ->capture_default_str();
        cmd->add_option("--max-think-tokens", policy.max_think_tokens,
                        "Hard cap on think-phase tokens")
            ->capture_default_str();
    }
};

struct ProbeArgs {
    int top_k = 5;
    int max_depth = 10;

    void attach(CLI::App* cmd) {
        cmd->add_option("--top-k", top_k, "Open-ended candidates kept / branching factor")
            ->capture_default_str();
        cmd->add_option("--max-depth", max_depth, "Open-ended token tree depth cap")
            ->capture_default_str();
    }
};

DatasetSchema parse_schema(const std::string& s) {
    if (s == "mc") return DatasetSchema::kMultipleChoice;
    if (s == "open") return DatasetSchema::kOpen;
    throw ConfigError("--schema must be mc or open, got '" + s + "'");
}

ModeConfig build_mode_config(const std::string& mode_name, std::optional<double> alpha,
                             const GenArgs& gen_args, const PolicyArgs& policy_args,
                             const ProbeArgs& probe_args, const std::string& model,
                             bool measure) {
    ModeConfig cfg;
    cfg.mode = mode_from_string(mode_name);
    if (cfg.mode == ThinkMode::kAdaptive && !alpha) {
        throw ConfigError("--alpha is required with --mode adaptive");
    }
    if (cfg.mode != ThinkMode::kAdaptive && alpha) {
        throw ConfigError("--alpha is only valid with --mode adaptive");
    }
    cfg.policy = policy_args.policy;
    cfg.policy.alpha = alpha.value_or(0.0);
    cfg.policy.validate();
    cfg.gen = gen_args.gen;
    cfg.probe.top_k = probe_args.top_k;
    cfg.probe.max_depth = probe_args.max_depth;
    cfg.model = model;
    cfg.measure = measure;
    cfg.validate();
    return cfg;
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << content;
}

std::vector<ThinkTrace> load_traces(const fs::path& dir) {
    std::vector<ThinkTrace> traces;
    if (!fs::exists(dir)) {
        throw ConfigError("trace directory does not exist: " + dir.string());
    }
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
        const std::string name = entry.path().filename().string();
        if (name == "manifest.json" || name == "report.json") continue;
        traces.push_back(ThinkTrace::load(entry.path().string()));
    }
    if (traces.empty()) {
        throw ConfigError("no trace files under " + dir.string());
    }
    return traces;
}

RunReport load_report(const fs::path& path) {
    if (fs::is_directory(path)) {
        return RunReport::load((path / "report.json").string());
    }
    return RunReport::load(path.string());
}

// --- subcommand bodies ----------------------------------------------------

int cmd_run(const EndpointArgs& endpoint, const GenArgs& gen, const PolicyArgs& policy,
            const ProbeArgs& probe, const std::string& dataset, const std::string& schema,
            const std::string& mode, std::optional<double> alpha, int runs, int parallelism,
            const std::string& out_dir, bool measure, bool no_resume, double fail_threshold) {
    const auto items = load_dataset(dataset, parse_schema(schema));
    const ModeConfig cfg =
        build_mode_config(mode, alpha, gen, policy, probe, endpoint.model, measure);

    BenchOptions opt;
    opt.runs = runs;
    opt.parallelism = parallelism;
    opt.resume = !no_resume;
    if (!out_dir.empty()) {
        opt.out_dir = fs::path(out_dir);
        fs::create_directories(opt.out_dir);
    }

    auto client = endpoint.make_client();
    std::cerr << "run: dataset=" << dataset << " items=" << items.size() << " mode=" << mode
              << (alpha ? " alpha=" + std::to_string(*alpha) : "") << " runs=" << runs << "\n";
    const RunReport report = run_benchmark(items, cfg, opt, *client, fs::path(dataset).stem().string());

    std::cout << std::fixed << std::setprecision(2)
              << "accuracy_mean=" << report.accuracy_mean
              << " tokens_mean=" << report.tokens_mean
              << " probe_tokens_mean=" << report.probe_tokens_mean << "\n";
    if (report.gate_stats) {
        std::cout << "gate_think=" << report.gate_stats->think
                  << " gate_nothink=" << report.gate_stats->nothink << "\n";
    }
    if (!out_dir.empty()) {
        std::cerr << "report: " << (opt.out_dir / "report.json") << "\n";
    }

    long long failed = 0;
    long long total = 0;
    for (const auto& item : report.per_item) {
        for (const auto& answer : item.answers) {
            ++total;
            if (answer.empty()) ++failed;
        }
    }
    if (total > 0 && static_cast<double>(failed) / static_cast<double>(total) > fail_threshold) {
        std::cerr << "partial-failure threshold exceeded: " << failed << "/" << total
                  << " sessions produced no answer\n";
        return kExitPartialFailure;
    }
    return kExitOk;
}

int cmd_probe(const EndpointArgs& endpoint, const GenArgs& gen, const PolicyArgs& policy,
              const ProbeArgs& probe, const std::string& dataset, const std::string& schema,
              const std::string& id, const std::string& question, const std::string& choices,
              const std::string& gold, std::optional<double> alpha, bool no_think) {
    BenchmarkItem item;
    if (!dataset.empty()) {
        const auto items = load_dataset(dataset, parse_schema(schema));
        const auto found = std::find_if(items.begin(), items.end(),
                                        [&](const BenchmarkItem& i) { return i.id == id; });
        if (found == items.end()) {
            throw ConfigError("item id '" + id + "' not found in " + dataset);
        }
        item = *found;
    } else if (!question.empty()) {
        item.id = "inline";
        item.question = question;
        item.gold = gold;
        if (!choices.empty()) {
            // "A=text one,B=text two" style inline choices.
            std::stringstream ss(choices);
            std::string part;
            while (std::getline(ss, part, ',')) {
                const auto eq = part.find('=');
                if (eq == std::string::npos) {
                    throw ConfigError("--choices entries must look like LABEL=text");
                }
                item.choices.emplace_back(part.substr(0, eq), part.substr(eq + 1));
            }
            item.task_kind = TaskKind::kOptionLetter;
        } else {
            item.task_kind = TaskKind::kBoxed;
        }
    } else {
        throw ConfigError("probe needs --dataset with --id, or an inline --question");
    }

    ModeConfig cfg = build_mode_config(no_think ? "nothink" : "adaptive",
                                       no_think ? std::nullopt : std::optional<double>(alpha.value_or(0.1)),
                                       gen, policy, probe, endpoint.model, no_think);
    auto client = endpoint.make_client();
    Controller controller(*client, cfg);
    const ThinkTrace trace = controller.run(item);

    std::cout << std::left << std::setw(6) << "step" << std::right << std::setw(8) << "chars"
              << std::setw(8) << "tokens" << std::setw(10) << "H" << std::setw(10) << "H_avg"
              << std::setw(10) << "dI" << std::setw(10) << "dI_c" << "  decision\n";
    std::cout << std::fixed << std::setprecision(4);
    const auto num = [](std::optional<double> v) {
        return v ? std::optional<double>(*v) : std::nullopt;
    };
    const auto print_opt = [](std::optional<double> v) {
        std::ostringstream os;
        if (v) {
            os << std::fixed << std::setprecision(4) << std::setw(10) << *v;
        } else {
            os << std::setw(10) << "-";
        }
        return os.str();
    };
    if (trace.initial_probe) {
        std::cout << std::left << std::setw(6) << 0 << std::right << std::setw(8) << "-"
                  << std::setw(8) << "-" << std::setw(10) << trace.initial_probe->entropy_bits
                  << std::setw(10) << trace.initial_probe->avg_entropy_bits << std::setw(10)
                  << "-" << std::setw(10) << "-" << "  intuition\n";
    }
    for (const auto& step : trace.steps) {
        std::cout << std::left << std::setw(6) << (step.index + 1) << std::right << std::setw(8)
                  << utf8_length(step.text) << std::setw(8) << step.token_count;
        std::cout << print_opt(num(step.entropy_bits)) << print_opt(num(step.avg_entropy_bits))
                  << print_opt(num(step.info_gain_bits)) << print_opt(num(step.targeted_gain_bits));
        const bool stopped_here = trace.stop_step && *trace.stop_step == step.index;
        std::cout << (stopped_here ? "  stop" : "  continue") << "\n";
    }
    std::cout << "final_answer=" << trace.final_answer << " total_tokens=" << trace.total_tokens
              << " probe_tokens=" << trace.probe_tokens << "\n";

    // Candidate list of the most recent answer-space snapshot.
    const AnswerDistribution* last = nullptr;
    if (trace.initial_probe) last = &trace.initial_probe->dist;
    for (const auto& step : trace.steps) {
        if (step.dist) last = &*step.dist;
    }
    if (last) {
        std::cout << "candidates:";
        for (std::size_t i = 0; i < last->size(); ++i) {
            std::cout << " " << last->candidates()[i] << "=" << std::setprecision(4)
                      << last->probs()[i];
        }
        std::cout << "\n";
    }
    return kExitOk;
}

int cmd_analyze_infogain(const std::string& traces_dir, int bins, const std::string& out) {
    const auto traces = load_traces(traces_dir);

    // Recompute each trace's gain series from its stored snapshots and
    // flag any drift against the values recorded at run time.
    std::size_t recomputed = 0;
    for (const auto& trace : traces) {
        bool probed = !trace.steps.empty();
        for (const auto& step : trace.steps) {
            probed = probed && step.dist.has_value();
        }
        if (!probed) continue;
        const GainSeries series = trace_infogain(trace, trace.gold);
        ++recomputed;
        for (std::size_t i = 0; i < trace.steps.size(); ++i) {
            const auto& step = trace.steps[i];
            if (step.entropy_bits &&
                std::abs(series.entropy_bits[i] - *step.entropy_bits) > 1e-9) {
                std::cerr << "warning: trace " << trace.question_id << " step " << i
                          << " entropy drifted from its stored value\n";
            }
            if (i > 0 && step.info_gain_bits &&
                std::abs(series.info_gain_bits[i - 1] - *step.info_gain_bits) > 1e-9) {
                std::cerr << "warning: trace " << trace.question_id << " step " << i
                          << " info gain drifted from its stored value\n";
            }
        }
        for (const auto& warning : series.warnings) {
            std::cerr << "note: trace " << trace.question_id << ": " << warning << "\n";
        }
    }

    const auto rows = aggregate_curves(traces, bins);
    const std::string csv = curves_to_csv(rows);
    if (out.empty()) {
        std::cout << csv;
    } else {
        write_text(out, csv);
        std::cerr << "curve table: " << out << " (" << rows.size() << " rows from "
                  << traces.size() << " traces, " << recomputed << " series recomputed)\n";
    }
    return kExitOk;
}

int cmd_analyze_infobias(const std::string& samples_path, const std::string& featurizer_kind,
                         const EndpointArgs& endpoint, double delta, const std::string& out) {
    TrajectorySampleSet set = TrajectorySampleSet::load(samples_path);
    if (!featurizer_kind.empty()) {
        auto featurizer = make_featurizer(featurizer_kind, endpoint.endpoint, endpoint.model,
                                          endpoint.auth_token);
        set.features_s = featurizer->featurize(set.samples_s);
        set.features_t = featurizer->featurize(set.samples_t);
    }
    HsicConfig cfg;
    const auto result = info_bias(set, cfg);
    const double bound = mi_confidence_bound(static_cast<long long>(set.size()), delta);
    std::cout << std::setprecision(10) << "question_id=" << set.question_id
              << " n=" << set.size() << " raw=" << result.raw
              << " per_token=" << result.per_token << " estimator_bound(delta=" << delta
              << ")=" << bound << "\n";
    if (!out.empty()) {
        std::ostringstream csv;
        csv << "question_id,n,raw_hsic,per_token,estimator_bound\n"
            << set.question_id << ',' << set.size() << ',' << std::setprecision(12)
            << result.raw << ',' << result.per_token << ',' << bound << "\n";
        write_text(out, csv.str());
        std::cerr << "infobias table: " << out << "\n";
    }
    return kExitOk;
}

int cmd_analyze_report(const std::string& baseline_path, const std::vector<std::string>& run_paths,
                       const std::string& out_prefix) {
    const RunReport baseline = load_report(baseline_path);
    std::vector<RunReport> others;
    for (const auto& p : run_paths) {
        others.push_back(load_report(p));
    }
    const ReportDocument doc = emit_report(baseline, std::move(others));
    std::cout << doc.human;
    if (!out_prefix.empty()) {
        write_text(out_prefix + ".txt", doc.human);
        write_text(out_prefix + ".csv", doc.csv);
        std::cerr << "report: " << out_prefix << ".txt / .csv\n";
    }
    return kExitOk;
}

int cmd_collect(const EndpointArgs& endpoint, const GenArgs& gen, const std::string& dataset,
                const std::string& schema, const std::string& id, const std::string& rationale,
                const std::string& rationale_file, int n, int parallelism,
                const std::string& featurizer_kind, const std::string& out) {
    const auto items = load_dataset(dataset, parse_schema(schema));
    const auto found = std::find_if(items.begin(), items.end(),
                                    [&](const BenchmarkItem& i) { return i.id == id; });
    if (found == items.end()) {
        throw ConfigError("item id '" + id + "' not found in " + dataset);
    }
    std::string gold_rationale = rationale;
    if (!rationale_file.empty()) {
        std::ifstream in(rationale_file);
        if (!in) {
            throw ConfigError("cannot read --rationale-file " + rationale_file);
        }
        gold_rationale.assign(std::istreambuf_iterator<char>(in),
                              std::istreambuf_iterator<char>());
    }
    if (gold_rationale.empty()) {
        throw ConfigError("collect needs --rationale or --rationale-file");
    }

    auto client = endpoint.make_client();
    auto featurizer = make_featurizer(featurizer_kind, endpoint.endpoint, endpoint.model,
                                      endpoint.auth_token);
    CollectOptions opt;
    opt.n = n;
    opt.parallelism = parallelism;
    opt.model = endpoint.model;
    opt.gen = gen.gen;
    const auto set = collect_samples(*found, gold_rationale, *client, *client, *featurizer, opt);
    set.save(out);
    std::cerr << "sample set: " << out << " (n=" << set.size() << ")\n";
    return kExitOk;
}

int cmd_serve_mock(const std::string& script, const std::string& host, int port) {
    auto model = std::make_shared<ScriptedModel>(ScriptedModel::load_script(script));
    MockServer server(model, host, port);
    std::cout << "mock server listening on " << server.base_url() << " (Ctrl-C to stop)\n";
    static std::atomic<bool> interrupted{false};
    std::signal(SIGINT, [](int) { interrupted.store(true); });
    std::signal(SIGTERM, [](int) { interrupted.store(true); });
    while (!interrupted.load()) {
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
    server.stop();
    std::cerr << "mock server stopped\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"thinkgate: reasoning-mode gateway and measurement toolkit"};
    app.require_subcommand(1);

    // run ------------------------------------------------------------------
    auto* run = app.add_subcommand("run", "Run a benchmark in one reasoning mode");
    EndpointArgs run_endpoint;
    GenArgs run_gen;
    PolicyArgs run_policy;
    ProbeArgs run_probe;
    std::string run_dataset, run_schema = "mc", run_mode = "vanilla", run_out;
    std::optional<double> run_alpha;
    int run_runs = 5, run_parallelism = 4;
    bool run_measure = false, run_no_resume = false;
    double run_fail_threshold = 0.5;
    run->add_option("--dataset", run_dataset, "Newline-delimited dataset file")->required();
    run->add_option("--schema", run_schema, "Dataset schema: mc | open")->capture_default_str();
    run->add_option("--mode", run_mode, "vanilla | nothink | gated | adaptive")
        ->capture_default_str();
    run->add_option("--alpha", run_alpha, "Stop threshold coefficient (adaptive only)");
    run->add_option("--runs", run_runs, "Independent passes to average")->capture_default_str();
    run->add_option("--parallelism", run_parallelism, "Concurrent sessions")
        ->capture_default_str();
    run->add_option("--out", run_out, "Output directory for traces and the report");
    run->add_flag("--measure", run_measure, "Probe every step in vanilla/nothink runs");
    run->add_flag("--no-resume", run_no_resume, "Recompute even when traces exist");
    run->add_option("--fail-threshold", run_fail_threshold,
                    "Exit 4 when the no-answer fraction exceeds this")
        ->capture_default_str();
    run_endpoint.attach(run);
    run_gen.attach(run);
    run_policy.attach(run);
    run_probe.attach(run);

    // probe ----------------------------------------------------------------
    auto* probe = app.add_subcommand("probe", "Trace one adaptive session step by step");
    EndpointArgs probe_endpoint;
    GenArgs probe_gen;
    PolicyArgs probe_policy;
    ProbeArgs probe_probe;
    std::string probe_dataset, probe_schema = "mc", probe_id, probe_question, probe_choices,
                probe_gold;
    std::optional<double> probe_alpha;
    bool probe_no_think = false;
    probe->add_option("--dataset", probe_dataset, "Dataset file to pick --id from");
    probe->add_option("--schema", probe_schema, "Dataset schema: mc | open")
        ->capture_default_str();
    probe->add_option("--id", probe_id, "Item id within --dataset");
    probe->add_option("--question", probe_question, "Inline question text");
    probe->add_option("--choices", probe_choices, "Inline choices: A=text,B=text,…");
    probe->add_option("--gold", probe_gold, "Gold answer for targeted gains");
    probe->add_option("--alpha", probe_alpha, "Stop threshold coefficient")
        ->capture_default_str();
    probe->add_flag("--no-think", probe_no_think, "Probe the direct-answer mode only");
    probe_endpoint.attach(probe);
    probe_gen.attach(probe);
    probe_policy.attach(probe);
    probe_probe.attach(probe);

    // analyze ---------------------------------------------------------------
    auto* analyze = app.add_subcommand("analyze", "Analyses over recorded traces and samples");
    analyze->require_subcommand(1);

    auto* infogain = analyze->add_subcommand("infogain", "Normalized-step curve table");
    std::string ig_traces, ig_out;
    int ig_bins = 20;
    infogain->add_option("--traces", ig_traces, "Directory of trace files")->required();
    infogain->add_option("--bins", ig_bins, "Normalized-position bins")->capture_default_str();
    infogain->add_option("--out", ig_out, "CSV output path (default stdout)");

    auto* infobias = analyze->add_subcommand("infobias", "Trajectory dependence score");
    EndpointArgs ib_endpoint;
    std::string ib_samples, ib_featurizer;
    double ib_delta = 0.05;
    infobias->add_option("--samples", ib_samples, "Sample set file from `collect`")->required();
    infobias->add_option("--featurizer", ib_featurizer,
                         "Recompute features: hashed | embeddings");
    infobias->add_option("--delta", ib_delta, "Confidence level for the estimator bound")
        ->capture_default_str();
    std::string ib_out;
    infobias->add_option("--out", ib_out, "CSV output path");
    ib_endpoint.attach(infobias);

    auto* report = analyze->add_subcommand("report", "Comparison table with deltas");
    std::string rep_baseline, rep_out_prefix;
    std::vector<std::string> rep_runs;
    report->add_option("--baseline", rep_baseline, "Vanilla run directory or report.json")
        ->required();
    report->add_option("--runs", rep_runs, "Run directories or report.json files")
        ->required()
        ->expected(-1);
    report->add_option("--out-prefix", rep_out_prefix, "Write <prefix>.txt and <prefix>.csv");

    // collect ----------------------------------------------------------------
    auto* collect = app.add_subcommand("collect", "Sample generations and paraphrases");
    EndpointArgs collect_endpoint;
    GenArgs collect_gen;
    std::string col_dataset, col_schema = "open", col_id, col_rationale, col_rationale_file,
                col_featurizer = "hashed", col_out = "samples.json";
    int col_n = 10, col_parallelism = 4;
    collect->add_option("--dataset", col_dataset, "Dataset file")->required();
    collect->add_option("--schema", col_schema, "Dataset schema: mc | open")
        ->capture_default_str();
    collect->add_option("--id", col_id, "Item id")->required();
    collect->add_option("--rationale", col_rationale, "Reference solution text");
    collect->add_option("--rationale-file", col_rationale_file, "Reference solution file");
    collect->add_option("--n", col_n, "Samples per side")->capture_default_str();
    collect->add_option("--parallelism", col_parallelism, "Concurrent requests")
        ->capture_default_str();
    collect->add_option("--featurizer", col_featurizer, "hashed | embeddings")
        ->capture_default_str();
    collect->add_option("--out", col_out, "Sample set output file")->capture_default_str();
    collect_endpoint.attach(collect);
    collect_gen.attach(collect);

    // serve-mock --------------------------------------------------------------
    auto* serve = app.add_subcommand("serve-mock", "Serve a scripted model over HTTP");
    std::string serve_script, serve_host = "127.0.0.1";
    int serve_port = 8000;
    serve->add_option("--script", serve_script, "Scripted model file")->required();
    serve->add_option("--host", serve_host, "Bind host")->capture_default_str();
    serve->add_option("--port", serve_port, "Bind port (0 picks a free one)")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            run_gen.gen.validate();
            return cmd_run(run_endpoint, run_gen, run_policy, run_probe, run_dataset, run_schema,
                           run_mode, run_alpha, run_runs, run_parallelism, run_out, run_measure,
                           run_no_resume, run_fail_threshold);
        }
        if (probe->parsed()) {
            return cmd_probe(probe_endpoint, probe_gen, probe_policy, probe_probe, probe_dataset,
                             probe_schema, probe_id, probe_question, probe_choices, probe_gold,
                             probe_alpha, probe_no_think);
        }
        if (analyze->parsed()) {
            if (infogain->parsed()) {
                return cmd_analyze_infogain(ig_traces, ig_bins, ig_out);
            }
            if (infobias->parsed()) {
                return cmd_analyze_infobias(ib_samples, ib_featurizer, ib_endpoint, ib_delta, ib_out);
            }
            if (report->parsed()) {
                return cmd_analyze_report(rep_baseline, rep_runs, rep_out_prefix);
            }
        }
        if (collect->parsed()) {
            return cmd_collect(collect_endpoint, collect_gen, col_dataset, col_schema, col_id,
                               col_rationale, col_rationale_file, col_n, col_parallelism,
                               col_featurizer, col_out);
        }
        if (serve->parsed()) {
            return cmd_serve_mock(serve_script, serve_host, serve_port);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DatasetError& e) {
        std::cerr << "dataset error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ScriptError& e) {
        std::cerr << "script error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const TransportError& e) {
        std::cerr << "transport error: " << e.what() << "\n";
        return kExitTransport;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
