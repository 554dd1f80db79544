// kde.cpp

#include "burstkit/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace burstkit {

namespace {

double quantile_sorted(const std::vector<double> &sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

double robust_scale(std::span<const double> samples) {
    const std::size_t n = samples.size();
    if (n < 2) {
        return 0.0;
    }
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double v : samples) {
        ss += (v - mean) * (v - mean);
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    return iqr > 0.0 ? std::min(sd, iqr / 1.349) : sd;
}

double silverman_bandwidth(double scale, std::size_t n, std::size_t dims, double floor) {
    const double d = static_cast<double>(dims);
    const double factor = std::pow(4.0 / ((d + 2.0) * static_cast<double>(n)), 1.0 / (d + 4.0));
    return std::max(scale * factor, floor);
}

Kde Kde::fit(const std::vector<std::vector<double>> &columns, double floor) {
    if (columns.empty()) {
        throw std::invalid_argument{"density needs at least one dimension"};
    }
    const std::size_t n = columns[0].size();
    if (n < 2) {
        throw std::invalid_argument{"density needs at least 2 samples"};
    }
    Kde kde;
    kde.n_ = n;
    const std::size_t d = columns.size();
    kde.points_.resize(n * d);
    for (std::size_t j = 0; j < d; ++j) {
        if (columns[j].size() != n) {
            throw std::invalid_argument{"density columns differ in length"};
        }
        const double scale = robust_scale(columns[j]);
        if (!(scale > 0.0)) {
            kde.degenerate_ = true;
        }
        kde.bandwidth_.push_back(silverman_bandwidth(scale, n, d, floor));
        for (std::size_t i = 0; i < n; ++i) {
            kde.points_[i * d + j] = columns[j][i];
        }
    }
    kde.log_norm_ = -std::log(static_cast<double>(n));
    for (double h : kde.bandwidth_) {
        kde.log_norm_ -= std::log(h * std::sqrt(2.0 * std::numbers::pi));
    }
    return kde;
}

double Kde::log_pdf(std::span<const double> x) const {
    const std::size_t d = dims();
    if (x.size() != d) {
        throw std::invalid_argument{"density evaluated at a point of the wrong dimension"};
    }
    // log-sum-exp over kernels
    double max_e = -INFINITY;
    thread_local std::vector<double> expo;
    expo.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        double e = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double u = (x[j] - points_[i * d + j]) / bandwidth_[j];
            e -= 0.5 * u * u;
        }
        expo[i] = e;
        max_e = std::max(max_e, e);
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        sum += std::exp(expo[i] - max_e);
    }
    return log_norm_ + max_e + std::log(sum);
}

double Kde::pdf(std::span<const double> x) const {
    return std::exp(log_pdf(x));
}

void Kde::sample(std::mt19937_64 &rng, std::span<double> out) const {
    std::uniform_int_distribution<std::size_t> pick{0, n_ - 1};
    std::normal_distribution<double> noise{0.0, 1.0};
    const std::size_t i = pick(rng);
    for (std::size_t j = 0; j < dims(); ++j) {
        out[j] = points_[i * dims() + j] + bandwidth_[j] * noise(rng);
    }
}

double Kde::sample(std::mt19937_64 &rng) const {
    double x = 0.0;
    sample(rng, std::span<double>{&x, 1});
    return x;
}

}  // namespace burstkit
