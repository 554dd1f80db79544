// splitting.hpp
//
// Circuit-aware train/validation/test splits.  Visits made over one
// circuit share network conditions, so every circuit is kept inside a
// single partition.

#ifndef BURSTKIT_SPLITTING_HPP
#define BURSTKIT_SPLITTING_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "burstkit/corpus.hpp"
#include "burstkit/trace.hpp"

namespace burstkit {

struct IndexEntry {
    std::string trace_ref;
    int site;
    long circuit;
    double page_load_time;   /// last timestamp of the trace
};

class CorpusIndex {
public:
    CorpusIndex() = default;

    static CorpusIndex from_corpus(const Corpus &corpus);

    /// page load time is taken from the trace
    void add(std::string trace_ref, int site, long circuit, const Trace &trace);

    std::span<const IndexEntry> entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    const IndexEntry &operator[](std::size_t i) const { return entries_[i]; }

    /// distinct site labels, ascending
    std::vector<int> sites() const;

private:
    std::vector<IndexEntry> entries_;
};

enum class Partition : std::uint8_t { train, validation, test };

std::string_view to_string(Partition p);
Partition partition_from_string(std::string_view s);

struct SplitRatio {
    unsigned train = 8;
    unsigned validation = 1;
    unsigned test = 1;
};

/// parses "8:1:1"
SplitRatio split_ratio_from_string(const std::string &s);

/// per-entry partition assignment, aligned with CorpusIndex entries
struct Split {
    std::vector<Partition> assignment;

    std::vector<std::size_t> indices(Partition p) const;
    std::vector<std::size_t> train() const { return indices(Partition::train); }
    std::vector<std::size_t> validation() const { return indices(Partition::validation); }
    std::vector<std::size_t> test() const { return indices(Partition::test); }
};

/// number of circuits per partition for n circuits
///
/// train = round(n*a/s) (halves up), validation = floor(n*b/s), test
/// takes the remainder; then every partition with a non-zero ratio is
/// raised to at least one circuit, taken from the largest partition.
/// 40 -> 32/4/4, 36 -> 29/3/4, 3 -> 1/1/1.
std::array<std::size_t, 3> circuit_allocation(std::size_t circuits, const SplitRatio &ratio);

/// circuits ordered by id (or shuffled with shuffle_seed) and assigned
/// contiguously in the ratio; throws data_error with too few circuits
Split split_by_circuit(const CorpusIndex &index, const SplitRatio &ratio = {},
                       std::optional<std::uint64_t> shuffle_seed = std::nullopt);

enum class SpeedExtreme { slowest, fastest };

/// per site, the selected extreme fraction of circuits (ranked by mean
/// page load time, ties by circuit id) is the test set; the remaining
/// circuits split evenly by id into train then validation
///
/// Throws std::invalid_argument unless 0 < fraction < 1 and data_error
/// when the fraction selects no circuit for some site.
Split split_by_speed(const CorpusIndex &index, SpeedExtreme which, double fraction);

struct CircuitLoadTime {
    long circuit;
    double mean_seconds;
    std::size_t visits;
};

/// per-circuit mean load times of one site, ascending (ties by id);
/// throws std::out_of_range for an unknown site
std::vector<CircuitLoadTime> load_time_stats(const CorpusIndex &index, int site);

struct SpeedGap {
    double median_gap = 0.0;    /// median over sites of slowest mean - fastest mean
    double median_slowest = 0.0;
    double median_fastest = 0.0;
};

SpeedGap speed_gap(const CorpusIndex &index);

/// filename,partition
void write_split_manifest(const std::string &path, const CorpusIndex &index, const Split &split);

/// filename -> partition
std::vector<std::pair<std::string, Partition>> read_split_manifest(const std::string &path);

}  // namespace burstkit

#endif  // BURSTKIT_SPLITTING_HPP
