// timing_features.hpp
//
// Burst-level timing features and their histogram encoding.
//
// Eight value streams are extracted from the direction bursts of a
// trace.  Three describe single bursts (MED, VARIANCE, BURST_LENGTH);
// five describe consecutive pairs of bursts (IMD, IBD_FF, IBD_LF) or
// consecutive bursts of the same direction (IBD_IFF for incoming,
// IBD_OFF for outgoing).  Each stream is then turned into a b-bin
// histogram whose bin ranges come from an equal-frequency split of the
// pooled training values, giving a feature vector of length 8*b.

#ifndef BURSTKIT_TIMING_FEATURES_HPP
#define BURSTKIT_TIMING_FEATURES_HPP

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "burstkit/matrix.hpp"
#include "burstkit/trace.hpp"

namespace burstkit {

enum class FeatureKind { med, variance, burst_length, imd, ibd_ff, ibd_lf, ibd_iff, ibd_off };

inline constexpr std::size_t feature_kind_count = 8;

/// vector layout order
inline constexpr std::array<FeatureKind, feature_kind_count> all_feature_kinds{
    FeatureKind::med,    FeatureKind::variance, FeatureKind::burst_length, FeatureKind::imd,
    FeatureKind::ibd_ff, FeatureKind::ibd_lf,   FeatureKind::ibd_iff,      FeatureKind::ibd_off};

inline constexpr std::size_t default_bin_count = 20;

std::string_view to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(std::string_view name);   /// "MED", "IBD_FF", ... (case-insensitive, '-' ok)

/// median of a sorted sequence; even lengths average the middle pair
double median_of_sorted(std::span<const double> sorted);

/// population variance
double population_variance(std::span<const double> values);

/// values of one kind for the given direction bursts
std::vector<double> extract_values(std::span<const Burst> bursts, FeatureKind kind);

/// throws empty_trace_error for an empty trace; pairwise kinds with too
/// few bursts give an empty list
std::vector<double> extract_values(const Trace &trace, FeatureKind kind);

using FeatureValues = std::array<std::vector<double>, feature_kind_count>;

/// all eight streams from a single segmentation pass
FeatureValues extract_all_values(const Trace &trace);

/// bin edges of one feature kind: b+1 non-decreasing boundaries
///
/// Bin i covers [edges[i], edges[i+1]) and the last bin is closed on the
/// right.  Values below the first edge count in bin 0 and values at or
/// above the last edge count in the last bin.
///
struct GlobalBins {
    FeatureKind kind = FeatureKind::med;
    std::vector<double> edges;

    std::size_t bin_count() const noexcept { return edges.empty() ? 0 : edges.size() - 1; }
    std::size_t bin_of(double value) const;
};

/// equal-frequency split of the pooled values into b bins
///
/// With the values sorted, bin j receives positions [floor(j*n/b),
/// floor((j+1)*n/b)), so occupancies differ by at most one; the edges
/// are the first value of every bin plus the overall maximum.  Ties
/// straddling a split point all land in the higher bin.  Throws
/// std::invalid_argument for empty input, b == 0 or b > n.
GlobalBins build_global_bins(std::span<const double> values, std::size_t b, FeatureKind kind);

/// per-instance histogram normalized by the number of values; empty
/// input gives all zeros
std::vector<double> instance_histogram(std::span<const double> values, const GlobalBins &bins);

/// one GlobalBins per kind, sharing a common bin count
class BinSet {
public:
    BinSet() = default;
    explicit BinSet(std::array<GlobalBins, feature_kind_count> bins);

    std::size_t bin_count() const noexcept { return bins_[0].bin_count(); }
    std::size_t feature_count() const noexcept { return feature_kind_count * bin_count(); }
    const GlobalBins &operator[](FeatureKind kind) const { return bins_[static_cast<std::size_t>(kind)]; }
    const std::array<GlobalBins, feature_kind_count> &bins() const noexcept { return bins_; }

    std::string to_json() const;
    static BinSet from_json(const std::string &text);

private:
    std::array<GlobalBins, feature_kind_count> bins_;
};

/// pools the values of every trace and builds the equal-frequency bins
BinSet build_bin_set(std::span<const Trace> traces, std::size_t b);

struct FeatureVector {
    std::size_t bins_per_kind = 0;
    std::vector<double> values;   /// 8*b entries, each in [0,1]

    std::span<const double> block(FeatureKind kind) const {
        return std::span<const double>{values}.subspan(static_cast<std::size_t>(kind) * bins_per_kind,
                                                       bins_per_kind);
    }
};

FeatureVector extract_feature_vector(const Trace &trace, const BinSet &bins);

/// one feature vector per trace, rows in input order
Matrix extract_feature_matrix(std::span<const Trace> traces, const BinSet &bins);
Matrix extract_feature_matrix_serial(std::span<const Trace> traces, const BinSet &bins);

}  // namespace burstkit

#endif  // BURSTKIT_TIMING_FEATURES_HPP
