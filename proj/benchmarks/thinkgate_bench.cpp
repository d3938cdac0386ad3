// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#include <random>

#include <benchmark/benchmark.h>

#include "thinkgate/answerspace.hpp"
#include "thinkgate/controller.hpp"
#include "thinkgate/entropy.hpp"
#include "thinkgate/infometrics.hpp"
#include "thinkgate/mock_model.hpp"
#include "thinkgate/segmenter.hpp"

using namespace thinkgate;

namespace {

AnswerDistribution random_distribution(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(0.01, 1.0);
    std::vector<std::string> labels;
    std::vector<double> probs(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back("c" + std::to_string(i));
        probs[i] = uni(rng);
        sum += probs[i];
    }
    for (auto& p : probs) p /= sum;
    return AnswerDistribution(std::move(labels), std::move(probs));
}

void BM_EntropyBits(benchmark::State& state) {
    const auto dist = random_distribution(static_cast<std::size_t>(state.range(0)), 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(entropy_bits(dist));
    }
}
BENCHMARK(BM_EntropyBits)->Arg(4)->Arg(64);

void BM_SegmenterFeed(benchmark::State& state) {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> ch(0, 25);
    std::string stream;
    for (int p = 0; p < 64; ++p) {
        for (int i = 0; i < 160; ++i) stream += static_cast<char>('a' + ch(rng));
        stream += "\n\n";
    }
    const std::size_t chunk = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        Segmenter seg("\n\n", 120);
        for (std::size_t i = 0; i < stream.size(); i += chunk) {
            benchmark::DoNotOptimize(seg.feed(std::string_view(stream).substr(i, chunk)));
        }
        benchmark::DoNotOptimize(seg.flush());
    }
    state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * stream.size()));
}
BENCHMARK(BM_SegmenterFeed)->Arg(64)->Arg(4096);

void BM_Hsic(benchmark::State& state) {
    std::mt19937 rng(13);
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::vector<std::vector<double>> x(n, std::vector<double>(5));
    std::vector<std::vector<double>> y(n, std::vector<double>(5));
    for (auto& row : x) {
        for (auto& v : row) v = normal(rng);
    }
    for (auto& row : y) {
        for (auto& v : row) v = normal(rng);
    }
    HsicConfig cfg;
    for (auto _ : state) {
        benchmark::DoNotOptimize(hsic(x, y, cfg));
    }
}
BENCHMARK(BM_Hsic)->Arg(10)->Arg(50);

void BM_ProbeOpen(benchmark::State& state) {
    ScriptedModel model;
    model.add_distribution({"\\boxed{", {{"4", 0.6}, {"2", 0.4}}});
    model.add_distribution({"\\boxed{4", {{"2", 0.7}, {"}", 0.3}}});
    model.add_distribution({"\\boxed{42", {{"}", 1.0}}});
    model.add_distribution({"\\boxed{2", {{"}", 1.0}}});
    ScriptedClient client(std::make_shared<ScriptedModel>(std::move(model)));
    GenerationParams gen;
    const ProbeSpec spec = ProbeSpec::open_ended(5, 10);
    for (auto _ : state) {
        Prober prober(client, "", gen);
        benchmark::DoNotOptimize(prober.probe_open("Q", "", spec));
    }
}
BENCHMARK(BM_ProbeOpen);

void BM_ExtractAnswer(benchmark::State& state) {
    const std::string text =
        "Working through the partial products once more, the total settles at "
        "$\\boxed{\\frac{42}{1}}$ after simplification.";
    for (auto _ : state) {
        benchmark::DoNotOptimize(extract_answer(text, TaskKind::kBoxed));
    }
}
BENCHMARK(BM_ExtractAnswer);

} // namespace

BENCHMARK_MAIN();
