// trace.cpp

#include "burstkit/trace.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

namespace burstkit {

std::string label_to_string(int label) {
    return label == unmonitored_label ? std::string{"unmonitored"} : std::to_string(label);
}

int label_from_string(const std::string &s) {
    if (s == "unmonitored") {
        return unmonitored_label;
    }
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || value < unmonitored_label) {
        throw std::invalid_argument{"invalid site label '" + s + "'"};
    }
    return value;
}

namespace {

void check_packets(const std::vector<Packet> &packets) {
    double previous = 0.0;
    for (std::size_t i = 0; i < packets.size(); ++i) {
        const Packet &p = packets[i];
        if (!std::isfinite(p.timestamp) || p.timestamp < 0.0) {
            throw data_error{"packet " + std::to_string(i) + ": timestamp must be finite and non-negative"};
        }
        if (p.direction != Direction::outgoing && p.direction != Direction::incoming) {
            throw data_error{"packet " + std::to_string(i) + ": direction must be +1 or -1"};
        }
        if (i > 0 && p.timestamp < previous) {
            throw data_error{"packet " + std::to_string(i) + ": timestamps must be non-decreasing"};
        }
        previous = p.timestamp;
    }
}

std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

bool parse_double(std::string_view token, double &out) {
    if (!token.empty() && token.front() == '+') {
        token.remove_prefix(1);
    }
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    return ec == std::errc{} && ptr == token.data() + token.size();
}

}  // namespace

Trace::Trace(std::vector<Packet> packets, TraceMetadata meta)
    : packets_{std::move(packets)}, meta_{std::move(meta)} {
    check_packets(packets_);
}

Trace Trace::normalized(std::vector<Packet> packets, TraceMetadata meta) {
    if (!packets.empty()) {
        const double origin = packets.front().timestamp;
        for (auto &p : packets) {
            p.timestamp -= origin;
        }
    }
    return Trace{std::move(packets), std::move(meta)};
}

Trace parse_trace(std::istream &in) {
    std::vector<Packet> packets;
    std::string line;
    std::size_t line_no = 0;
    double previous = -INFINITY;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view body = trim(line);
        if (body.empty()) {
            continue;
        }
        const auto sep = body.find_first_of(" \t");
        if (sep == std::string_view::npos) {
            throw parse_error{line_no, "expected '<timestamp>\\t<direction>'"};
        }
        const std::string_view ts_token = body.substr(0, sep);
        const std::string_view dir_token = trim(body.substr(sep));
        if (dir_token.find_first_of(" \t") != std::string_view::npos) {
            throw parse_error{line_no, "too many fields"};
        }
        double ts = 0.0;
        if (!parse_double(ts_token, ts) || !std::isfinite(ts)) {
            throw parse_error{line_no, "malformed timestamp '" + std::string{ts_token} + "'"};
        }
        double dir = 0.0;
        if (!parse_double(dir_token, dir)) {
            throw parse_error{line_no, "malformed direction '" + std::string{dir_token} + "'"};
        }
        if (dir != 1.0 && dir != -1.0) {
            throw parse_error{line_no, "direction must be 1 or -1, got '" + std::string{dir_token} + "'"};
        }
        if (ts < previous) {
            throw parse_error{line_no, "timestamp decreases"};
        }
        previous = ts;
        packets.push_back({ts, dir > 0 ? Direction::outgoing : Direction::incoming});
    }
    if (packets.empty()) {
        throw empty_trace_error{};
    }
    return Trace::normalized(std::move(packets));
}

Trace parse_trace_string(const std::string &text) {
    std::istringstream in{text};
    return parse_trace(in);
}

Trace read_trace_file(const std::string &path) {
    std::ifstream in{path};
    if (!in) {
        throw data_error{"cannot open trace file " + path};
    }
    try {
        return parse_trace(in);
    } catch (const parse_error &e) {
        throw data_error{path + ": " + e.what()};
    } catch (const empty_trace_error &) {
        throw data_error{path + ": empty trace"};
    }
}

void write_trace(std::ostream &out, const Trace &trace) {
    char buf[64];
    for (const Packet &p : trace.packets()) {
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, p.timestamp);
        (void)ec;
        out.write(buf, end - buf);
        out << '\t' << sign(p.direction) << '\n';
    }
}

void write_trace_file(const std::string &path, const Trace &trace) {
    std::ofstream out{path};
    if (!out) {
        throw data_error{"cannot write trace file " + path};
    }
    write_trace(out, trace);
}

namespace {

template <typename SplitHere>
std::vector<Burst> segment(const Trace &trace, SplitHere split_here) {
    std::vector<Burst> bursts;
    const auto packets = trace.packets();
    for (std::size_t i = 0; i < packets.size(); ++i) {
        if (i == 0 || split_here(packets[i - 1], packets[i])) {
            bursts.push_back({packets[i].direction, {}});
        }
        bursts.back().timestamps.push_back(packets[i].timestamp);
    }
    return bursts;
}

}  // namespace

std::vector<Burst> segment_bursts(const Trace &trace) {
    return segment(trace, [](const Packet &prev, const Packet &cur) {
        return prev.direction != cur.direction;
    });
}

std::vector<Burst> segment_bursts_by_time(const Trace &trace, double threshold) {
    if (!(threshold > 0.0)) {
        throw std::invalid_argument{"burst time threshold must be positive"};
    }
    return segment(trace, [threshold](const Packet &prev, const Packet &cur) {
        return prev.direction != cur.direction || cur.timestamp - prev.timestamp > threshold;
    });
}

std::vector<std::size_t> burst_sizes(std::span<const Burst> bursts) {
    std::vector<std::size_t> sizes;
    sizes.reserve(bursts.size());
    for (const auto &b : bursts) {
        sizes.push_back(b.size());
    }
    return sizes;
}

}  // namespace burstkit
