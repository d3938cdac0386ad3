// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
//
// Independent reference implementations used to pin down the production
// code. Each oracle recomputes its quantity along a different route than
// the implementation it checks and must stay that way.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace thinkgate::testing {

/// Long-double evaluation of -sum p*log2(p).
inline long double entropy_bits_oracle(const std::vector<double>& probs) {
    long double h = 0.0L;
    for (double p : probs) {
        if (p > 0.0) {
            h -= static_cast<long double>(p) * std::log2(static_cast<long double>(p));
        }
    }
    return h < 0.0L ? 0.0L : h;
}

// --- dense-matrix HSIC oracle -------------------------------------------

using Matrix = std::vector<std::vector<double>>;

inline Matrix matmul(const Matrix& a, const Matrix& b) {
    const std::size_t n = a.size();
    const std::size_t m = b.front().size();
    const std::size_t k = b.size();
    Matrix c(n, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            double s = 0.0;
            for (std::size_t t = 0; t < k; ++t) {
                s += a[i][t] * b[t][j];
            }
            c[i][j] = s;
        }
    }
    return c;
}

inline Matrix gaussian_gram_oracle(const Matrix& rows, double sigma) {
    const std::size_t n = rows.size();
    Matrix k(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double sq = 0.0;
            for (std::size_t t = 0; t < rows[i].size(); ++t) {
                const double d = rows[i][t] - rows[j][t];
                sq += d * d;
            }
            k[i][j] = std::exp(-sq / (2.0 * sigma * sigma));
        }
    }
    return k;
}

/// trace(K H L H) / (N-1)^2 via explicit centering-matrix products.
inline double hsic_oracle(const Matrix& x, const Matrix& y, double sigma_x, double sigma_y) {
    const std::size_t n = x.size();
    const Matrix k = gaussian_gram_oracle(x, sigma_x);
    const Matrix l = gaussian_gram_oracle(y, sigma_y);
    Matrix h(n, std::vector<double>(n, -1.0 / static_cast<double>(n)));
    for (std::size_t i = 0; i < n; ++i) {
        h[i][i] += 1.0;
    }
    const Matrix product = matmul(matmul(matmul(k, h), l), h);
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        trace += product[i][i];
    }
    const double value = trace / (static_cast<double>(n - 1) * static_cast<double>(n - 1));
    return value < 0.0 ? 0.0 : value;
}

/// Median by full enumeration of the pairwise distances.
inline double median_pairwise_oracle(const Matrix& rows) {
    std::vector<double> d;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            double sq = 0.0;
            for (std::size_t t = 0; t < rows[i].size(); ++t) {
                const double diff = rows[i][t] - rows[j][t];
                sq += diff * diff;
            }
            d.push_back(std::sqrt(sq));
        }
    }
    std::sort(d.begin(), d.end());
    const std::size_t m = d.size();
    return m % 2 == 1 ? d[m / 2] : 0.5 * (d[m / 2 - 1] + d[m / 2]);
}

// --- brute-force token-tree oracle --------------------------------------

/// A scripted token trie: path (concatenated token texts) -> next-token
/// distribution. Mirrors what the mock serves, owned by the test.
struct TrieSpec {
    std::map<std::string, std::map<std::string, double>> nodes; // path -> dist
    std::string terminator = "}";
    int top_k = 5;
    int max_depth = 10;
};

/// Exhaustive enumeration of every token path to the depth cap, keeping
/// completed candidates, merging duplicates, truncating to top_k and
/// renormalizing. The per-node alternatives follow the endpoint's top-k
/// reporting rule (highest probability first, lexicographic tie-break).
inline std::map<std::string, double> enumerate_trie(const TrieSpec& trie) {
    std::map<std::string, double> completed;
    const std::size_t term_len = trie.terminator.size();

    struct Frame {
        std::string path;
        int depth;
        double logprob;
    };
    std::vector<Frame> stack{{"", 0, 0.0}};
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        const auto it = trie.nodes.find(f.path);
        if (it == trie.nodes.end()) continue;

        // Endpoint-style top-k truncation of the node's alternatives.
        std::vector<std::pair<std::string, double>> alts(it->second.begin(), it->second.end());
        std::sort(alts.begin(), alts.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        if (static_cast<int>(alts.size()) > trie.top_k) {
            alts.resize(static_cast<std::size_t>(trie.top_k));
        }

        for (const auto& [tok, p] : alts) {
            const std::string child = f.path + tok;
            const double lp = f.logprob + std::log(p);
            const std::size_t from =
                f.path.size() >= term_len - 1 ? f.path.size() - (term_len - 1) : 0;
            const std::size_t pos = child.find(trie.terminator, from);
            if (pos != std::string::npos) {
                completed[child.substr(0, pos)] += std::exp(lp);
            } else if (f.depth + 1 < trie.max_depth) {
                stack.push_back({child, f.depth + 1, lp});
            }
        }
    }
    return completed;
}

/// Truncate-to-top-k and renormalize, candidates ordered by descending
/// probability with lexicographic tie-break.
inline std::vector<std::pair<std::string, double>>
truncate_and_normalize(const std::map<std::string, double>& completed, int top_k) {
    std::vector<std::pair<std::string, double>> ranked(completed.begin(), completed.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (static_cast<int>(ranked.size()) > top_k) {
        ranked.resize(static_cast<std::size_t>(top_k));
    }
    double total = 0.0;
    for (const auto& [text, p] : ranked) total += p;
    for (auto& [text, p] : ranked) p /= total;
    return ranked;
}

/// Total-variation distance between two distributions given as
/// (candidate, probability) lists.
inline double total_variation(const std::vector<std::pair<std::string, double>>& a,
                              const std::vector<std::pair<std::string, double>>& b) {
    std::map<std::string, double> pa(a.begin(), a.end());
    std::map<std::string, double> pb(b.begin(), b.end());
    std::map<std::string, double> all = pa;
    all.insert(pb.begin(), pb.end());
    double tv = 0.0;
    for (const auto& [key, unused] : all) {
        const double x = pa.count(key) ? pa[key] : 0.0;
        const double y = pb.count(key) ? pb[key] : 0.0;
        tv += std::abs(x - y);
    }
    return 0.5 * tv;
}

} // namespace thinkgate::testing
