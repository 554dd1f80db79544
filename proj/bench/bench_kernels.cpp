// bench_kernels.cpp
//
// Serial reference kernels against their OpenMP counterparts.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "burstkit/knn.hpp"
#include "burstkit/leakage.hpp"
#include "burstkit/representations.hpp"
#include "burstkit/timing_features.hpp"
#include "fixtures.hpp"

using namespace burstkit;

namespace {

const std::vector<Trace> &traces() {
    static const std::vector<Trace> t = [] {
        std::mt19937_64 rng{1};
        std::vector<Trace> out;
        for (int i = 0; i < 400; ++i) out.push_back(fixtures::random_trace(rng, 200, 3000));
        return out;
    }();
    return t;
}

const BinSet &bins() {
    static const BinSet b = build_bin_set(traces(), 20);
    return b;
}

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::mt19937_64 rng{seed};
    std::normal_distribution<double> g;
    Matrix m{rows, cols};
    for (std::size_t i = 0; i < rows; ++i) {
        for (auto &x : m.row(i)) x = g(rng);
    }
    return m;
}

void features_serial(benchmark::State &s) {
    for (auto _ : s) benchmark::DoNotOptimize(extract_feature_matrix_serial(traces(), bins()));
}
void features_parallel(benchmark::State &s) {
    for (auto _ : s) benchmark::DoNotOptimize(extract_feature_matrix(traces(), bins()));
}

void encode_serial(benchmark::State &s) {
    for (auto _ : s) benchmark::DoNotOptimize(encode_batch_serial(traces(), Encoding::directional_time));
}
void encode_parallel(benchmark::State &s) {
    for (auto _ : s) benchmark::DoNotOptimize(encode_batch(traces(), Encoding::directional_time));
}

const KnnModel &model() {
    static const KnnModel m = [] {
        std::vector<int> labels(2000);
        for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(i % 50);
        return KnnModel::fit(random_matrix(2000, 160, 2), labels, 5);
    }();
    return m;
}
const Matrix &queries() {
    static const Matrix q = random_matrix(200, 160, 3);
    return q;
}

void knn_serial(benchmark::State &s) {
    for (auto _ : s) benchmark::DoNotOptimize(model().predict_batch_serial(queries()));
}
void knn_parallel(benchmark::State &s) {
    for (auto _ : s) benchmark::DoNotOptimize(model().predict_batch(queries()));
}

LeakageDataset leakage_data() {
    LeakageDataset d;
    d.values = random_matrix(200, 40, 4);
    for (std::size_t i = 0; i < 200; ++i) {
        d.sites.push_back(static_cast<int>(i % 10));
        for (auto &x : d.values.row(i)) x += 0.3 * static_cast<double>(i % 10);
    }
    return d;
}

LeakageOptions leakage_options() {
    LeakageOptions o;
    o.mc_samples = 1000;
    return o;
}

void leakage_serial(benchmark::State &s) {
    const auto d = leakage_data();
    for (auto _ : s) benchmark::DoNotOptimize(individual_leakages_serial(d, leakage_options()));
}
void leakage_parallel(benchmark::State &s) {
    const auto d = leakage_data();
    for (auto _ : s) benchmark::DoNotOptimize(individual_leakages(d, leakage_options()));
}

void redundancy_serial(benchmark::State &s) {
    const auto d = leakage_data();
    for (auto _ : s) benchmark::DoNotOptimize(redundancy_matrix_serial(d.values, leakage_options()));
}
void redundancy_parallel(benchmark::State &s) {
    const auto d = leakage_data();
    for (auto _ : s) benchmark::DoNotOptimize(redundancy_matrix(d.values, leakage_options()));
}

}  // namespace

BENCHMARK(features_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(features_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(encode_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(encode_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(knn_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(knn_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(leakage_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(leakage_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(redundancy_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(redundancy_parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
