// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "thinkgate/distribution.hpp"
#include "thinkgate/entropy.hpp"
#include "thinkgate/errors.hpp"
#include "thinkgate/stop_policy.hpp"

using namespace thinkgate;

namespace {

AnswerDistribution dist4(double a, double b, double c, double d) {
    return AnswerDistribution({"A", "B", "C", "D"}, {a, b, c, d});
}

std::vector<double> random_probs(std::mt19937& rng, std::size_t n) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> p(n);
    double sum = 0.0;
    for (auto& x : p) {
        x = uni(rng);
        sum += x;
    }
    if (sum == 0.0) {
        p[0] = 1.0;
        sum = 1.0;
    }
    for (auto& x : p) x /= sum;
    return p;
}

std::vector<std::string> labels(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back("c" + std::to_string(i));
    return out;
}

} // namespace

TEST_CASE("AnswerDistribution invariants are rejected at construction") {
    CHECK_THROWS_AS(AnswerDistribution({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(AnswerDistribution({"A"}, {0.5}), std::invalid_argument); // sum != 1
    CHECK_THROWS_AS(AnswerDistribution({"A", "B"}, {1.5, -0.5}), std::invalid_argument);
    CHECK_THROWS_AS(AnswerDistribution({"A", "A"}, {0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(AnswerDistribution({"A", "B"}, {1.0}), std::invalid_argument);
    const auto d = AnswerDistribution::uniform({"x", "y", "z"});
    CHECK(d.size() == 3);
    CHECK(*d.prob_of("y") == doctest::Approx(1.0 / 3));
    CHECK(!d.prob_of("w").has_value());
}

TEST_CASE("entropy_bits on pinned distributions") {
    CHECK(entropy_bits(AnswerDistribution::uniform({"a", "b", "c", "d"})) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(entropy_bits(AnswerDistribution({"a"}, {1.0})) == 0.0);
    CHECK(entropy_bits(AnswerDistribution({"a", "b"}, {0.5, 0.5})) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // Independently evaluated: -sum p log2 p for (0.9, 0.05, 0.03, 0.02).
    CHECK(entropy_bits(dist4(0.9, 0.05, 0.03, 0.02)) ==
          doctest::Approx(0.61754312331201465).epsilon(1e-12));
}

TEST_CASE("entropy treats zero probabilities as contributing zero") {
    const AnswerDistribution d({"a", "b", "c"}, {1.0, 0.0, 0.0});
    CHECK(entropy_bits(d) == 0.0);
    CHECK(avg_entropy_bits(d) == 0.0);
}

TEST_CASE("avg_entropy_bits on pinned distributions") {
    CHECK(avg_entropy_bits(AnswerDistribution::uniform({"a", "b", "c", "d"})) ==
          doctest::Approx(0.5).epsilon(1e-12));
    // Independently evaluated: H(0.97, 0.01, 0.01, 0.01) / 4.
    CHECK(avg_entropy_bits(dist4(0.97, 0.01, 0.01, 0.01)) ==
          doctest::Approx(0.060485183213302712).epsilon(1e-12));
}

TEST_CASE("info_gain_bits is plain entropy difference, negatives legal") {
    CHECK(info_gain_bits(2.0, 1.5) == doctest::Approx(0.5));
    CHECK(info_gain_bits(1.0, 1.0) == 0.0);
    CHECK(info_gain_bits(0.8, 1.1) == doctest::Approx(-0.3));
}

TEST_CASE("targeted_gain_bits is the signed log ratio") {
    CHECK(targeted_gain_bits(0.25, 0.5) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(targeted_gain_bits(0.5, 0.5) == 0.0);
    CHECK(targeted_gain_bits(0.5, 0.25) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(targeted_gain_bits(0.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(targeted_gain_bits(0.5, -0.1), std::domain_error);
    CHECK_THROWS_AS(targeted_gain_bits(1.5, 0.5), std::domain_error);
}

TEST_CASE("targeted gain antisymmetry") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uni(1e-6, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double a = uni(rng);
        const double b = uni(rng);
        CHECK(targeted_gain_bits(a, b) == doctest::Approx(-targeted_gain_bits(b, a)).epsilon(1e-12));
    }
}

TEST_CASE("StopPolicy threshold and validation") {
    CHECK(StopPolicy::with_alpha(0.0).threshold_bits() == 0.0);
    // alpha / (e ln 2), evaluated independently to 40 digits.
    CHECK(StopPolicy::with_alpha(0.1).threshold_bits() ==
          doctest::Approx(0.053073784542304299).epsilon(1e-13));
    CHECK(StopPolicy::with_alpha(1.0).threshold_bits() ==
          doctest::Approx(0.53073784542304299).epsilon(1e-13));
    CHECK_THROWS_AS(StopPolicy::with_alpha(-0.1), ConfigError);
    CHECK_THROWS_AS(StopPolicy::with_alpha(1.1), ConfigError);
}

TEST_CASE("stop_decision boundary is <=") {
    CHECK(stop_decision(0.05, StopPolicy::with_alpha(0.1)) == StopDecision::kStop);
    CHECK(stop_decision(0.54, StopPolicy::with_alpha(1.0)) == StopDecision::kContinue);
    CHECK(stop_decision(0.0, StopPolicy::with_alpha(0.0)) == StopDecision::kStop);
    const StopPolicy p = StopPolicy::with_alpha(0.3);
    CHECK(stop_decision(p.threshold_bits(), p) == StopDecision::kStop);
    CHECK(stop_decision(std::nextafter(p.threshold_bits(), 1.0), p) == StopDecision::kContinue);
}

TEST_CASE("stop_decision is monotone in alpha") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double h = uni(rng) * kMaxPerCandidateEntropyBits;
        const double a1 = uni(rng);
        const double a2 = a1 + (1.0 - a1) * uni(rng); // a2 >= a1
        if (stop_decision(h, StopPolicy::with_alpha(a1)) == StopDecision::kStop) {
            CHECK(stop_decision(h, StopPolicy::with_alpha(a2)) == StopDecision::kStop);
        }
    }
}

TEST_CASE("entropy bounds and oracle agreement over random distributions") {
    std::mt19937 rng(1234);
    std::uniform_int_distribution<std::size_t> size_dist(1, 64);
    for (int i = 0; i < 1000; ++i) {
        const std::size_t n = size_dist(rng);
        const auto probs = random_probs(rng, n);
        const AnswerDistribution d(labels(n), probs);
        const double h = entropy_bits(d);
        CHECK(h >= 0.0);
        CHECK(h <= std::log2(static_cast<double>(n)) + 1e-9);
        const double oracle = static_cast<double>(testing::entropy_bits_oracle(probs));
        CHECK(h == doctest::Approx(oracle).epsilon(1e-10));
        CHECK(avg_entropy_bits(d) <= kMaxPerCandidateEntropyBits + 1e-12);
        CHECK(avg_entropy_bits(d) == doctest::Approx(h / static_cast<double>(n)).epsilon(1e-12));
    }
}

TEST_CASE("uniform distributions attain the log2(l) entropy bound") {
    for (std::size_t n : {1, 2, 3, 8, 33, 64}) {
        const auto d = AnswerDistribution::uniform(labels(n));
        CHECK(entropy_bits(d) == doctest::Approx(std::log2(static_cast<double>(n))).epsilon(1e-12));
    }
}

TEST_CASE("info gain telescopes across a random entropy path") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> uni(0.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> h;
        for (int i = 0; i < 12; ++i) h.push_back(uni(rng));
        double sum = 0.0;
        for (std::size_t i = 1; i < h.size(); ++i) sum += info_gain_bits(h[i - 1], h[i]);
        CHECK(sum == doctest::Approx(h.front() - h.back()).epsilon(1e-9));
    }
}
