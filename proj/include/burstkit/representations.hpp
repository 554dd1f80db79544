// representations.hpp
//
// Fixed-length per-packet encodings used as classifier input: packet
// direction (+1/-1), raw timestamps, and directional time (timestamp
// times direction).  Traces longer than the length are truncated and
// shorter ones zero-padded.

#ifndef BURSTKIT_REPRESENTATIONS_HPP
#define BURSTKIT_REPRESENTATIONS_HPP

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "burstkit/matrix.hpp"
#include "burstkit/trace.hpp"

namespace burstkit {

enum class Encoding { direction, raw_timing, directional_time };

inline constexpr std::size_t default_sequence_length = 5000;

std::string_view to_string(Encoding e);

/// accepts "direction", "raw"/"raw_timing", "directional"/"directional_time"
Encoding encoding_from_string(std::string_view name);

struct Representation {
    Encoding encoding;
    std::vector<double> values;   /// exactly `length` entries
};

/// throws empty_trace_error for an empty trace and
/// std::invalid_argument for length 0
Representation encode(const Trace &trace, Encoding encoding, std::size_t length = default_sequence_length);

Matrix encode_batch(std::span<const Trace> traces, Encoding encoding, std::size_t length = default_sequence_length);
Matrix encode_batch_serial(std::span<const Trace> traces, Encoding encoding,
                           std::size_t length = default_sequence_length);

}  // namespace burstkit

#endif  // BURSTKIT_REPRESENTATIONS_HPP
