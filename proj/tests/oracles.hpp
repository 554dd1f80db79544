// oracles.hpp
//
// Independent reference computations used to derive expected values.
// None of these call into the code paths they check.

#ifndef BURSTKIT_TESTS_ORACLES_HPP
#define BURSTKIT_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

namespace oracles {

/// counts of `values` per half-open bin [e_j, e_{j+1}), last bin closed,
/// out-of-range values clamped; straight linear scan
inline std::vector<std::size_t> bin_counts(const std::vector<double> &values, const std::vector<double> &edges) {
    const std::size_t b = edges.size() - 1;
    std::vector<std::size_t> counts(b, 0);
    for (double v : values) {
        std::size_t bin = 0;
        if (v >= edges[b]) {
            bin = b - 1;
        } else {
            for (std::size_t j = 0; j < b; ++j) {
                if (v >= edges[j] && v < edges[j + 1]) {
                    bin = j;
                }
            }
        }
        ++counts[bin];
    }
    return counts;
}

/// k-NN by sorting every training point by (distance, index)
inline std::pair<int, double> knn_oracle(const std::vector<std::vector<double>> &train, const std::vector<int> &labels,
                                         const std::vector<double> &query, std::size_t k, bool manhattan = false) {
    std::vector<std::pair<double, std::size_t>> d;
    for (std::size_t i = 0; i < train.size(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < query.size(); ++j) {
            const double x = train[i][j] - query[j];
            acc += manhattan ? std::abs(x) : x * x;
        }
        d.push_back({manhattan ? acc : std::sqrt(acc), i});
    }
    std::sort(d.begin(), d.end());
    std::map<int, std::pair<int, double>> tally;
    for (std::size_t j = 0; j < k; ++j) {
        tally[labels[d[j].second]].first += 1;
        tally[labels[d[j].second]].second += d[j].first;
    }
    int best = 0;
    int best_votes = -1;
    double best_sum = 0.0;
    for (auto &[label, vs] : tally) {
        const bool better = vs.first > best_votes || (vs.first == best_votes && vs.second < best_sum);
        if (better) {
            best = label;
            best_votes = vs.first;
            best_sum = vs.second;
        }
    }
    return {best, static_cast<double>(best_votes) / static_cast<double>(k)};
}

/// mutual information (bits) between the site W (uniform prior) and a
/// discrete observation whose conditional table is p_obs_given_site[w][o]
inline double discrete_leakage(const std::vector<std::vector<double>> &p_obs_given_site) {
    const std::size_t n = p_obs_given_site.size();
    const std::size_t outcomes = p_obs_given_site[0].size();
    double info = 0.0;
    for (std::size_t o = 0; o < outcomes; ++o) {
        double p_o = 0.0;
        for (std::size_t w = 0; w < n; ++w) {
            p_o += p_obs_given_site[w][o] / static_cast<double>(n);
        }
        for (std::size_t w = 0; w < n; ++w) {
            const double joint = p_obs_given_site[w][o] / static_cast<double>(n);
            if (joint > 0.0) {
                info += joint * std::log2(joint / (p_o / static_cast<double>(n)));
            }
        }
    }
    return info;
}

/// leakage (bits) of a feature distributed N(means[w], sd^2) per site,
/// by midpoint quadrature of E_x[H(W|x)]
inline double gaussian_sites_leakage(const std::vector<double> &means, double sd) {
    const std::size_t n = means.size();
    const double lo = *std::min_element(means.begin(), means.end()) - 10 * sd;
    const double hi = *std::max_element(means.begin(), means.end()) + 10 * sd;
    const int steps = 200000;
    const double dx = (hi - lo) / steps;
    double expected_h = 0.0;
    for (int s = 0; s < steps; ++s) {
        const double x = lo + (s + 0.5) * dx;
        std::vector<double> dens(n);
        double total = 0.0;
        for (std::size_t w = 0; w < n; ++w) {
            const double u = (x - means[w]) / sd;
            dens[w] = std::exp(-0.5 * u * u) / (sd * std::sqrt(2.0 * 3.14159265358979323846));
            total += dens[w];
        }
        if (total <= 0.0) {
            continue;
        }
        double h = 0.0;
        for (double d : dens) {
            const double p = d / total;
            if (p > 0.0) {
                h -= p * std::log2(p);
            }
        }
        expected_h += total / static_cast<double>(n) * h * dx;
    }
    return std::log2(static_cast<double>(n)) - expected_h;
}

inline double mean(const std::vector<double> &v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double sample_sd(const std::vector<double> &v) {
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) {
        ss += (x - m) * (x - m);
    }
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace oracles

#endif  // BURSTKIT_TESTS_ORACLES_HPP
