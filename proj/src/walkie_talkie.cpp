// walkie_talkie.cpp

#include "burstkit/walkie_talkie.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace burstkit {

BurstSequence::BurstSequence(std::vector<std::size_t> s) : sizes{std::move(s)} {
    if (std::find(sizes.begin(), sizes.end(), std::size_t{0}) != sizes.end()) {
        throw std::invalid_argument{"burst sizes must be positive"};
    }
}

std::size_t BurstSequence::total_packets() const noexcept {
    return std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
}

BurstSequence supersequence(const BurstSequence &a, const BurstSequence &b) {
    const std::size_t n = std::max(a.size(), b.size());
    std::vector<std::size_t> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::max(a.at_or_zero(i), b.at_or_zero(i));
    }
    return BurstSequence{std::move(out)};
}

BurstSequence burst_sequence(const Trace &trace, double threshold) {
    return BurstSequence{burst_sizes(segment_bursts_by_time(trace, threshold))};
}

std::size_t MoldingPlan::dummy_packets() const noexcept {
    return std::accumulate(padding.begin(), padding.end(), std::size_t{0}) +
           std::accumulate(tail_sizes.begin(), tail_sizes.end(), std::size_t{0});
}

namespace {

std::vector<double> inter_burst_gaps(const std::vector<Burst> &bursts) {
    std::vector<double> gaps;
    for (std::size_t i = 1; i < bursts.size(); ++i) {
        gaps.push_back(bursts[i].first() - bursts[i - 1].last());
    }
    return gaps;
}

double median_or(std::vector<double> v, double fallback) {
    if (v.empty()) {
        return fallback;
    }
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

MoldResult mold_trace(const Trace &real, const BurstSequence &target, const MoldingOptions &options) {
    if (target.empty()) {
        throw std::invalid_argument{"empty molding target"};
    }
    if (real.empty()) {
        throw empty_trace_error{};
    }
    const auto bursts = segment_bursts_by_time(real, options.threshold);
    const double fake_gap = options.fake_burst_gap.value_or(median_or(inter_burst_gaps(bursts), options.threshold));
    if (!(fake_gap >= 0.0) || !std::isfinite(fake_gap)) {
        throw std::invalid_argument{"fake burst gap must be finite and non-negative"};
    }

    MoldResult result;
    MoldingPlan &plan = result.plan;
    plan.target = target;
    std::vector<Packet> packets;
    packets.reserve(std::max(real.size(), target.total_packets()));

    double flush = 0.0;
    Direction last_dir = Direction::incoming;
    for (std::size_t i = 0; i < bursts.size(); ++i) {
        const Burst &b = bursts[i];
        const std::size_t want = target.at_or_zero(i);
        const std::size_t emit = std::max(b.size(), want);
        plan.real_sizes.push_back(b.size());
        plan.padding.push_back(emit - b.size());
        if (b.size() > want) {
            plan.overflow.push_back(i);
        }
        plan.emitted.push_back(emit);
        flush = b.last() + options.threshold;
        packets.insert(packets.end(), emit, Packet{flush, b.direction});
        last_dir = b.direction;
    }
    for (std::size_t i = bursts.size(); i < target.size(); ++i) {
        flush += fake_gap;
        last_dir = opposite(last_dir);
        plan.tail_sizes.push_back(target.sizes[i]);
        plan.emitted.push_back(target.sizes[i]);
        packets.insert(packets.end(), target.sizes[i], Packet{flush, last_dir});
    }
    result.defended = Trace{std::move(packets), real.metadata()};
    return result;
}

double median_inter_burst_gap(std::span<const Trace> traces, double threshold) {
    std::vector<double> gaps;
    for (const auto &t : traces) {
        auto g = inter_burst_gaps(segment_bursts_by_time(t, threshold));
        gaps.insert(gaps.end(), g.begin(), g.end());
    }
    return median_or(std::move(gaps), threshold);
}

Overheads overheads(const Trace &real, const Trace &defended) {
    if (real.empty() || defended.empty()) {
        throw empty_trace_error{};
    }
    constexpr double eps = 1e-9;
    const double bandwidth = static_cast<double>(defended.size()) / static_cast<double>(real.size());
    double latency = 1.0;
    if (real.duration() > eps || defended.duration() > eps) {
        latency = defended.duration() / std::max(real.duration(), eps);
    }
    return {bandwidth, latency};
}

OverheadSummary summarize_overheads(std::span<const Overheads> items) {
    OverheadSummary s;
    s.traces = items.size();
    if (items.empty()) {
        return s;
    }
    const double n = static_cast<double>(items.size());
    for (const auto &o : items) {
        s.bandwidth_mean += o.bandwidth / n;
        s.latency_mean += o.latency / n;
    }
    if (items.size() > 1) {
        double sb = 0.0;
        double sl = 0.0;
        for (const auto &o : items) {
            sb += (o.bandwidth - s.bandwidth_mean) * (o.bandwidth - s.bandwidth_mean);
            sl += (o.latency - s.latency_mean) * (o.latency - s.latency_mean);
        }
        s.bandwidth_sd = std::sqrt(sb / (n - 1.0));
        s.latency_sd = std::sqrt(sl / (n - 1.0));
    }
    return s;
}

std::vector<SitePairing> pair_sites(std::span<const int> monitored, std::span<const int> nonsensitive,
                                    std::size_t batches, std::uint64_t seed) {
    if (monitored.empty() || nonsensitive.empty()) {
        throw std::invalid_argument{"pairing needs monitored and nonsensitive sites"};
    }
    std::vector<std::vector<int>> orders;
    for (std::size_t m = 0; m < monitored.size(); ++m) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(m)};
        std::mt19937_64 rng{seq};
        std::vector<int> order(nonsensitive.begin(), nonsensitive.end());
        std::shuffle(order.begin(), order.end(), rng);
        orders.push_back(std::move(order));
    }
    std::vector<SitePairing> schedule;
    schedule.reserve(2 * batches * monitored.size());
    for (std::size_t b = 0; b < batches; ++b) {
        for (std::size_t m = 0; m < monitored.size(); ++m) {
            const int decoy = orders[m][b % orders[m].size()];
            schedule.push_back({monitored[m], decoy, b, false});
            schedule.push_back({decoy, monitored[m], b, true});
        }
    }
    return schedule;
}

}  // namespace burstkit
