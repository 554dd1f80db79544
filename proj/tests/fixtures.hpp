// fixtures.hpp
//
// Shared test data: the four-burst worked example, random traces and
// synthetic on-disk corpora.

#ifndef BURSTKIT_TESTS_FIXTURES_HPP
#define BURSTKIT_TESTS_FIXTURES_HPP

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "burstkit/trace.hpp"

namespace fixtures {

/// four bursts: B1 out [0.00 0.10 0.20], B2 in [0.40 0.50 0.60],
/// B3 out [0.65 0.70], B4 in [0.75 0.80 0.85]
inline const char *four_burst_text =
    "0.0\t1\n0.10\t1\n0.20\t1\n"
    "0.40\t-1\n0.50\t-1\n0.60\t-1\n"
    "0.65\t1\n0.70\t1\n"
    "0.75\t-1\n0.80\t-1\n0.85\t-1\n";

inline burstkit::Trace four_burst_trace() {
    return burstkit::parse_trace_string(four_burst_text);
}

inline burstkit::Trace make_trace(const std::vector<std::pair<double, int>> &packets) {
    std::vector<burstkit::Packet> p;
    for (auto [t, d] : packets) {
        p.push_back({t, d > 0 ? burstkit::Direction::outgoing : burstkit::Direction::incoming});
    }
    return burstkit::Trace{std::move(p)};
}

/// random trace of alternating bursts; `profile` shifts the timing so
/// that different profiles are distinguishable
inline burstkit::Trace random_trace(std::mt19937_64 &rng, std::size_t min_packets = 20, std::size_t max_packets = 200,
                                    double profile = 1.0) {
    std::uniform_int_distribution<std::size_t> len{min_packets, max_packets};
    std::uniform_int_distribution<int> burst{1, 8};
    std::exponential_distribution<double> gap{20.0 / profile};
    std::bernoulli_distribution start_out{0.8};
    const std::size_t n = len(rng);
    std::vector<burstkit::Packet> packets;
    double t = 0.0;
    auto dir = start_out(rng) ? burstkit::Direction::outgoing : burstkit::Direction::incoming;
    while (packets.size() < n) {
        const int b = burst(rng);
        for (int i = 0; i < b && packets.size() < n; ++i) {
            packets.push_back({t, dir});
            t += gap(rng) * 0.2;
        }
        t += gap(rng);
        dir = burstkit::opposite(dir);
    }
    return burstkit::Trace::normalized(std::move(packets));
}

/// site-specific trace: burst count and inter-burst delay depend on the
/// site, with per-visit jitter and a per-circuit slowdown
inline burstkit::Trace site_trace(int site, long circuit, std::mt19937_64 &rng) {
    std::normal_distribution<double> jitter{1.0, 0.05};
    const double slow = 1.0 + 0.1 * static_cast<double>(circuit % 3);
    const int bursts = 6 + 3 * site;
    const double delay = (0.05 + 0.04 * site) * slow;
    std::vector<burstkit::Packet> packets;
    double t = 0.0;
    for (int b = 0; b < bursts; ++b) {
        const auto dir = b % 2 == 0 ? burstkit::Direction::outgoing : burstkit::Direction::incoming;
        const int size = 1 + (b * (site + 2)) % 5;
        for (int i = 0; i < size; ++i) {
            packets.push_back({t, dir});
            t += 0.01 * (1 + site % 3) * std::max(0.1, jitter(rng));
        }
        t += delay * std::max(0.1, jitter(rng));
    }
    return burstkit::Trace{std::move(packets)};
}

/// writes sites x circuits x per_circuit traces plus a manifest.csv
inline void write_synthetic_corpus(const std::filesystem::path &dir, int sites, int circuits, int per_circuit,
                                   std::uint64_t seed, int unmonitored = 0) {
    std::filesystem::create_directories(dir);
    std::mt19937_64 rng{seed};
    std::ofstream manifest{dir / "manifest.csv"};
    manifest << "filename,site_label,circuit_id\n";
    for (int s = 0; s < sites; ++s) {
        for (int c = 0; c < circuits; ++c) {
            for (int i = 0; i < per_circuit; ++i) {
                const int instance = c * per_circuit + i;
                const std::string name = std::to_string(s) + "-" + std::to_string(instance);
                burstkit::write_trace_file((dir / name).string(), site_trace(s, c, rng));
                manifest << name << ',' << s << ',' << c << '\n';
            }
        }
    }
    for (int u = 0; u < unmonitored; ++u) {
        const std::string name = std::to_string(u);
        burstkit::write_trace_file((dir / name).string(), random_trace(rng, 20, 80));
        manifest << name << ",unmonitored," << (u % circuits) << '\n';
    }
}

inline std::filesystem::path temp_dir(const std::string &name) {
    auto p = std::filesystem::temp_directory_path() / ("burstkit_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace fixtures

#endif  // BURSTKIT_TESTS_FIXTURES_HPP
