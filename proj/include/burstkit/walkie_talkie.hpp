// walkie_talkie.hpp
//
// Burst-molding simulation of the Walkie-Talkie defense.
//
// A visit and its decoy are reduced to burst-size sequences; the
// padding target is their elementwise maximum (the supersequence).
// Bursts are detected with a time threshold, queued, and flushed once
// the burst is over, padded with dummy packets up to the target size.
// Target bursts beyond the end of the real traffic are sent as fake
// tail bursts.  Real packets are never dropped: a burst larger than its
// target is sent as is and recorded as an overflow.

#ifndef BURSTKIT_WALKIE_TALKIE_HPP
#define BURSTKIT_WALKIE_TALKIE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "burstkit/trace.hpp"

namespace burstkit {

inline constexpr double default_burst_threshold = 0.300;   /// seconds

/// burst sizes, alternating direction starting with the client request
struct BurstSequence {
    std::vector<std::size_t> sizes;

    BurstSequence() = default;
    /// throws std::invalid_argument when a size is 0
    explicit BurstSequence(std::vector<std::size_t> s);

    std::size_t size() const noexcept { return sizes.size(); }
    bool empty() const noexcept { return sizes.empty(); }
    std::size_t at_or_zero(std::size_t i) const noexcept { return i < sizes.size() ? sizes[i] : 0; }
    std::size_t total_packets() const noexcept;

    bool operator==(const BurstSequence &) const = default;
};

/// elementwise maximum, missing entries counting as 0
BurstSequence supersequence(const BurstSequence &a, const BurstSequence &b);

/// sizes of the time-threshold bursts of a trace
BurstSequence burst_sequence(const Trace &trace, double threshold = default_burst_threshold);

struct MoldingOptions {
    double threshold = default_burst_threshold;
    /// spacing of fake tail bursts; defaults to the median gap between
    /// the real bursts of the trace (the threshold when there is none)
    std::optional<double> fake_burst_gap;
};

struct MoldingPlan {
    BurstSequence target;
    std::vector<std::size_t> real_sizes;    /// per real burst
    std::vector<std::size_t> padding;       /// dummies added to each real burst
    std::vector<std::size_t> overflow;      /// indices of real bursts larger than their target
    std::vector<std::size_t> tail_sizes;    /// fake bursts appended after the real traffic
    std::vector<std::size_t> emitted;       /// burst sizes of the defended trace

    bool perfect() const noexcept { return overflow.empty() && emitted == target.sizes; }
    std::size_t dummy_packets() const noexcept;
};

struct MoldResult {
    Trace defended;
    MoldingPlan plan;
};

/// every packet of defended burst i carries the flush time of real
/// burst i (its last packet time plus the threshold); fake bursts
/// alternate direction from the preceding burst
///
/// Throws std::invalid_argument for an empty target or a non-positive
/// threshold and empty_trace_error for an empty real trace.
MoldResult mold_trace(const Trace &real, const BurstSequence &target, const MoldingOptions &options = {});

/// median gap between consecutive time-threshold bursts over a corpus,
/// or the threshold when no trace has two bursts
double median_inter_burst_gap(std::span<const Trace> traces, double threshold = default_burst_threshold);

struct Overheads {
    double bandwidth;   /// defended packets / real packets
    double latency;     /// defended duration / real duration
};

/// zero-duration real traces use a 1e-9 s floor; two zero-duration
/// traces have latency multiplier 1
Overheads overheads(const Trace &real, const Trace &defended);

struct OverheadSummary {
    std::size_t traces = 0;
    double bandwidth_mean = 0.0;
    double bandwidth_sd = 0.0;   /// sample standard deviation (n - 1)
    double latency_mean = 0.0;
    double latency_sd = 0.0;
};

OverheadSummary summarize_overheads(std::span<const Overheads> items);

struct SitePairing {
    int visited;          /// the site actually loaded
    int decoy;            /// the site it is molded to resemble
    std::size_t instance; /// collection batch
    bool reverse;         /// nonsensitive site visited with a sensitive decoy

    bool operator==(const SitePairing &) const = default;
};

/// pairing schedule: in every batch each monitored site gets the next
/// decoy from its own seeded permutation of the nonsensitive sites, and
/// each forward pairing is followed by its reverse
///
/// Throws std::invalid_argument when either list is empty.
std::vector<SitePairing> pair_sites(std::span<const int> monitored, std::span<const int> nonsensitive,
                                    std::size_t batches, std::uint64_t seed);

}  // namespace burstkit

#endif  // BURSTKIT_WALKIE_TALKIE_HPP
