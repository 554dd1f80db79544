// representations.cpp

#include "burstkit/representations.hpp"

#include <algorithm>
#include <string>

namespace burstkit {

namespace {

void encode_into(const Trace &trace, Encoding encoding, std::span<double> out) {
    const std::size_t n = std::min(trace.size(), out.size());
    for (std::size_t i = 0; i < n; ++i) {
        const Packet &p = trace[i];
        switch (encoding) {
        case Encoding::direction:
            out[i] = sign(p.direction);
            break;
        case Encoding::raw_timing:
            out[i] = p.timestamp;
            break;
        case Encoding::directional_time:
            out[i] = sign(p.direction) * p.timestamp;
            break;
        }
    }
    std::fill(out.begin() + static_cast<std::ptrdiff_t>(n), out.end(), 0.0);
}

void check_batch(std::span<const Trace> traces, std::size_t length) {
    if (length == 0) {
        throw std::invalid_argument{"sequence length must be positive"};
    }
    for (const auto &t : traces) {
        if (t.empty()) {
            throw empty_trace_error{};
        }
    }
}

}  // namespace

std::string_view to_string(Encoding e) {
    switch (e) {
    case Encoding::direction:
        return "direction";
    case Encoding::raw_timing:
        return "raw_timing";
    case Encoding::directional_time:
        return "directional_time";
    }
    return "?";
}

Encoding encoding_from_string(std::string_view name) {
    if (name == "direction") return Encoding::direction;
    if (name == "raw" || name == "raw_timing") return Encoding::raw_timing;
    if (name == "directional" || name == "directional_time") return Encoding::directional_time;
    throw std::invalid_argument{"unknown encoding '" + std::string{name} + "'"};
}

Representation encode(const Trace &trace, Encoding encoding, std::size_t length) {
    check_batch(std::span<const Trace>{&trace, 1}, length);
    Representation r{encoding, std::vector<double>(length)};
    encode_into(trace, encoding, r.values);
    return r;
}

Matrix encode_batch_serial(std::span<const Trace> traces, Encoding encoding, std::size_t length) {
    check_batch(traces, length);
    Matrix m{traces.size(), length};
    for (std::size_t i = 0; i < traces.size(); ++i) {
        encode_into(traces[i], encoding, m.row(i));
    }
    return m;
}

Matrix encode_batch(std::span<const Trace> traces, Encoding encoding, std::size_t length) {
    check_batch(traces, length);
    Matrix m{traces.size(), length};
    const auto n = static_cast<std::ptrdiff_t>(traces.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        encode_into(traces[i], encoding, m.row(static_cast<std::size_t>(i)));
    }
    return m;
}

}  // namespace burstkit
