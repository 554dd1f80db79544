// timing_features.cpp

#include "burstkit/timing_features.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include <json.hpp>

namespace burstkit {

namespace {

constexpr std::array<std::string_view, feature_kind_count> kind_names{
    "MED", "VARIANCE", "BURST_LENGTH", "IMD", "IBD_FF", "IBD_LF", "IBD_IFF", "IBD_OFF"};

double burst_median(const Burst &b) {
    // burst timestamps come from a trace, so they are already sorted
    return median_of_sorted(b.timestamps);
}

/// first-to-first interval between consecutive bursts of one direction
std::vector<double> same_direction_intervals(std::span<const Burst> bursts, Direction dir) {
    std::vector<double> out;
    const Burst *previous = nullptr;
    for (const auto &b : bursts) {
        if (b.direction != dir) {
            continue;
        }
        if (previous) {
            out.push_back(b.first() - previous->first());
        }
        previous = &b;
    }
    return out;
}

void check_nonempty(std::span<const Trace> traces) {
    for (std::size_t i = 0; i < traces.size(); ++i) {
        if (traces[i].empty()) {
            throw empty_trace_error{};
        }
    }
}

}  // namespace

std::string_view to_string(FeatureKind kind) {
    return kind_names[static_cast<std::size_t>(kind)];
}

FeatureKind feature_kind_from_string(std::string_view name) {
    std::string canon;
    for (char c : name) {
        canon += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    for (std::size_t i = 0; i < kind_names.size(); ++i) {
        if (canon == kind_names[i]) {
            return all_feature_kinds[i];
        }
    }
    throw std::invalid_argument{"unknown feature kind '" + std::string{name} + "'"};
}

double median_of_sorted(std::span<const double> sorted) {
    if (sorted.empty()) {
        throw std::invalid_argument{"median of an empty sequence"};
    }
    const std::size_t n = sorted.size();
    if (n % 2 == 1) {
        return sorted[n / 2];
    }
    return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

double population_variance(std::span<const double> values) {
    if (values.empty()) {
        return 0.0;
    }
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    return ss / values.size();
}

std::vector<double> extract_values(std::span<const Burst> bursts, FeatureKind kind) {
    std::vector<double> out;
    switch (kind) {
    case FeatureKind::med:
        for (const auto &b : bursts) out.push_back(burst_median(b));
        break;
    case FeatureKind::variance:
        for (const auto &b : bursts) out.push_back(population_variance(b.timestamps));
        break;
    case FeatureKind::burst_length:
        for (const auto &b : bursts) out.push_back(b.last() - b.first());
        break;
    case FeatureKind::imd:
        for (std::size_t i = 1; i < bursts.size(); ++i)
            out.push_back(burst_median(bursts[i]) - burst_median(bursts[i - 1]));
        break;
    case FeatureKind::ibd_ff:
        for (std::size_t i = 1; i < bursts.size(); ++i) out.push_back(bursts[i].first() - bursts[i - 1].first());
        break;
    case FeatureKind::ibd_lf:
        for (std::size_t i = 1; i < bursts.size(); ++i) out.push_back(bursts[i].first() - bursts[i - 1].last());
        break;
    case FeatureKind::ibd_iff:
        out = same_direction_intervals(bursts, Direction::incoming);
        break;
    case FeatureKind::ibd_off:
        out = same_direction_intervals(bursts, Direction::outgoing);
        break;
    }
    return out;
}

std::vector<double> extract_values(const Trace &trace, FeatureKind kind) {
    if (trace.empty()) {
        throw empty_trace_error{};
    }
    const auto bursts = segment_bursts(trace);
    return extract_values(bursts, kind);
}

FeatureValues extract_all_values(const Trace &trace) {
    if (trace.empty()) {
        throw empty_trace_error{};
    }
    const auto bursts = segment_bursts(trace);
    FeatureValues out;
    for (std::size_t k = 0; k < feature_kind_count; ++k) {
        out[k] = extract_values(bursts, all_feature_kinds[k]);
    }
    return out;
}

std::size_t GlobalBins::bin_of(double value) const {
    const std::size_t b = bin_count();
    // last edge index j with edges[j] <= value, clamped into [0, b-1]
    const auto it = std::upper_bound(edges.begin(), edges.end(), value);
    if (it == edges.begin()) {
        return 0;
    }
    const auto j = static_cast<std::size_t>(it - edges.begin()) - 1;
    return std::min(j, b - 1);
}

GlobalBins build_global_bins(std::span<const double> values, std::size_t b, FeatureKind kind) {
    const std::size_t n = values.size();
    if (n == 0) {
        throw std::invalid_argument{"cannot bin " + std::string{to_string(kind)} + ": no values"};
    }
    if (b == 0) {
        throw std::invalid_argument{"bin count must be positive"};
    }
    if (b > n) {
        throw std::invalid_argument{"cannot split " + std::to_string(n) + " " + std::string{to_string(kind)} +
                                    " values into " + std::to_string(b) + " non-empty bins"};
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    GlobalBins bins;
    bins.kind = kind;
    bins.edges.reserve(b + 1);
    for (std::size_t j = 0; j < b; ++j) {
        bins.edges.push_back(sorted[j * n / b]);
    }
    bins.edges.push_back(sorted.back());
    return bins;
}

std::vector<double> instance_histogram(std::span<const double> values, const GlobalBins &bins) {
    std::vector<double> hist(bins.bin_count(), 0.0);
    if (values.empty()) {
        return hist;
    }
    for (double v : values) {
        hist[bins.bin_of(v)] += 1.0;
    }
    const double total = static_cast<double>(values.size());
    for (auto &h : hist) {
        h /= total;
    }
    return hist;
}

BinSet::BinSet(std::array<GlobalBins, feature_kind_count> bins) : bins_{std::move(bins)} {
    const std::size_t b = bins_[0].bin_count();
    for (std::size_t k = 0; k < feature_kind_count; ++k) {
        if (bins_[k].kind != all_feature_kinds[k]) {
            throw std::invalid_argument{"bin set entries must follow feature kind order"};
        }
        if (bins_[k].bin_count() != b || b == 0) {
            throw std::invalid_argument{"bin set kinds must share one positive bin count"};
        }
        if (!std::is_sorted(bins_[k].edges.begin(), bins_[k].edges.end())) {
            throw std::invalid_argument{"bin edges must be non-decreasing"};
        }
    }
}

std::string BinSet::to_json() const {
    nlohmann::json j;
    j["bins"] = bin_count();
    for (const auto &gb : bins_) {
        j["edges"][std::string{to_string(gb.kind)}] = gb.edges;
    }
    return j.dump(2);
}

BinSet BinSet::from_json(const std::string &text) {
    try {
        const auto j = nlohmann::json::parse(text);
        std::array<GlobalBins, feature_kind_count> bins;
        for (std::size_t k = 0; k < feature_kind_count; ++k) {
            bins[k].kind = all_feature_kinds[k];
            bins[k].edges = j.at("edges").at(std::string{kind_names[k]}).get<std::vector<double>>();
        }
        return BinSet{std::move(bins)};
    } catch (const nlohmann::json::exception &e) {
        throw data_error{std::string{"malformed bin file: "} + e.what()};
    } catch (const std::invalid_argument &e) {
        throw data_error{std::string{"malformed bin file: "} + e.what()};
    }
}

BinSet build_bin_set(std::span<const Trace> traces, std::size_t b) {
    check_nonempty(traces);
    std::array<std::vector<double>, feature_kind_count> pooled;
    for (const auto &t : traces) {
        auto values = extract_all_values(t);
        for (std::size_t k = 0; k < feature_kind_count; ++k) {
            pooled[k].insert(pooled[k].end(), values[k].begin(), values[k].end());
        }
    }
    std::array<GlobalBins, feature_kind_count> bins;
    for (std::size_t k = 0; k < feature_kind_count; ++k) {
        bins[k] = build_global_bins(pooled[k], b, all_feature_kinds[k]);
    }
    return BinSet{std::move(bins)};
}

namespace {

void fill_feature_row(const Trace &trace, const BinSet &bins, std::span<double> row) {
    const auto values = extract_all_values(trace);
    const std::size_t b = bins.bin_count();
    for (std::size_t k = 0; k < feature_kind_count; ++k) {
        const auto hist = instance_histogram(values[k], bins[all_feature_kinds[k]]);
        std::copy(hist.begin(), hist.end(), row.begin() + k * b);
    }
}

}  // namespace

FeatureVector extract_feature_vector(const Trace &trace, const BinSet &bins) {
    if (trace.empty()) {
        throw empty_trace_error{};
    }
    FeatureVector fv;
    fv.bins_per_kind = bins.bin_count();
    fv.values.assign(bins.feature_count(), 0.0);
    fill_feature_row(trace, bins, fv.values);
    return fv;
}

Matrix extract_feature_matrix_serial(std::span<const Trace> traces, const BinSet &bins) {
    check_nonempty(traces);
    Matrix m{traces.size(), bins.feature_count()};
    for (std::size_t i = 0; i < traces.size(); ++i) {
        fill_feature_row(traces[i], bins, m.row(i));
    }
    return m;
}

Matrix extract_feature_matrix(std::span<const Trace> traces, const BinSet &bins) {
    check_nonempty(traces);
    Matrix m{traces.size(), bins.feature_count()};
    const auto n = static_cast<std::ptrdiff_t>(traces.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        fill_feature_row(traces[i], bins, m.row(static_cast<std::size_t>(i)));
    }
    return m;
}

}  // namespace burstkit
