// trace.hpp
//
// Packet traces, the trace file format, and burst segmentation.

#ifndef BURSTKIT_TRACE_HPP
#define BURSTKIT_TRACE_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace burstkit {

/// packet direction as seen from the client
///
enum class Direction : std::int8_t { outgoing = 1, incoming = -1 };

inline int sign(Direction d) { return static_cast<int>(d); }

inline Direction opposite(Direction d) {
    return d == Direction::outgoing ? Direction::incoming : Direction::outgoing;
}

/// site label used for visits to sites outside the monitored set
///
inline constexpr int unmonitored_label = -1;

std::string label_to_string(int label);

/// parses an integer label or the literal "unmonitored"; throws
/// std::invalid_argument otherwise
int label_from_string(const std::string &s);

struct Packet {
    double timestamp;   /// seconds since the first packet of the trace
    Direction direction;

    bool operator==(const Packet &) const = default;
};

struct TraceMetadata {
    std::optional<int> site_label;
    std::optional<long> instance_id;
    std::optional<long> circuit_id;
};

/// base class of all data errors raised by the toolkit (malformed
/// input, empty traces, inconsistent manifests)
///
class data_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class parse_error : public data_error {
public:
    parse_error(std::size_t line, const std::string &what)
        : data_error{"line " + std::to_string(line) + ": " + what}, line_{line} {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class empty_trace_error : public data_error {
public:
    empty_trace_error() : data_error{"empty trace"} {}
};

/// an ordered, immutable packet sequence
///
/// Invariants: timestamps are finite, non-negative and non-decreasing.
/// Traces produced by parse_trace() additionally start at 0.
///
class Trace {
public:
    Trace() = default;

    /// throws data_error when the invariants do not hold
    explicit Trace(std::vector<Packet> packets, TraceMetadata meta = {});

    /// shifts every timestamp so the first packet is at 0
    static Trace normalized(std::vector<Packet> packets, TraceMetadata meta = {});

    std::span<const Packet> packets() const noexcept { return packets_; }
    const TraceMetadata &metadata() const noexcept { return meta_; }
    void set_metadata(TraceMetadata meta) { meta_ = std::move(meta); }

    std::size_t size() const noexcept { return packets_.size(); }
    bool empty() const noexcept { return packets_.empty(); }
    const Packet &operator[](std::size_t i) const { return packets_[i]; }

    /// timestamp of the last packet (0 for an empty trace)
    double duration() const noexcept { return packets_.empty() ? 0.0 : packets_.back().timestamp; }

private:
    std::vector<Packet> packets_;
    TraceMetadata meta_;
};

/// reads `timestamp<TAB>direction` lines; blank lines are skipped
///
/// Direction may be spelled as an integer or a float (1, -1, 1.0,
/// -1.0).  Timestamps are normalized so the first packet is at 0.
/// Throws parse_error (with line number) or empty_trace_error.
///
Trace parse_trace(std::istream &in);
Trace parse_trace_string(const std::string &text);
Trace read_trace_file(const std::string &path);

/// writes the trace in the same format read by parse_trace, using the
/// shortest decimal form that round-trips each timestamp exactly
void write_trace(std::ostream &out, const Trace &trace);
void write_trace_file(const std::string &path, const Trace &trace);

struct Burst {
    Direction direction;
    std::vector<double> timestamps;   /// length >= 1

    std::size_t size() const noexcept { return timestamps.size(); }
    double first() const { return timestamps.front(); }
    double last() const { return timestamps.back(); }
};

/// splits the trace into maximal runs of same-direction packets; an
/// empty trace gives an empty list
std::vector<Burst> segment_bursts(const Trace &trace);

/// like segment_bursts, but a burst also ends when the gap to the next
/// packet exceeds threshold seconds (strictly greater)
///
/// threshold may be +infinity; throws std::invalid_argument when it is
/// not positive.
std::vector<Burst> segment_bursts_by_time(const Trace &trace, double threshold);

std::vector<std::size_t> burst_sizes(std::span<const Burst> bursts);

}  // namespace burstkit

#endif  // BURSTKIT_TRACE_HPP
