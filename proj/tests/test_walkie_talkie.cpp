// test_walkie_talkie.cpp

#include <doctest.h>

#include <stdexcept>

#include <random>
#include <set>

#include "burstkit/walkie_talkie.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace burstkit;

namespace {

BurstSequence random_sequence(std::mt19937_64 &rng) {
    std::uniform_int_distribution<std::size_t> len{1, 30};
    std::uniform_int_distribution<std::size_t> size{1, 50};
    std::vector<std::size_t> s(len(rng));
    for (auto &x : s) x = size(rng);
    return BurstSequence{s};
}

/// trace with the given time-threshold burst sizes: packets 10 ms apart
/// inside a burst, `gap` seconds between bursts
Trace trace_of(const std::vector<std::size_t> &sizes, double gap = 0.5) {
    std::vector<Packet> p;
    double t = 0.0;
    for (std::size_t b = 0; b < sizes.size(); ++b) {
        const auto dir = b % 2 == 0 ? Direction::outgoing : Direction::incoming;
        for (std::size_t i = 0; i < sizes[b]; ++i) {
            p.push_back({t, dir});
            t += 0.01;
        }
        t += gap;
    }
    return Trace{std::move(p)};
}

}  // namespace

TEST_CASE("supersequence by hand") {
    const BurstSequence a{{3, 1, 4}};
    const BurstSequence b{{1, 5, 2, 6}};
    CHECK(supersequence(a, b).sizes == std::vector<std::size_t>{3, 5, 4, 6});
    CHECK(supersequence(a, BurstSequence{}).sizes == a.sizes);
    CHECK_THROWS_AS(BurstSequence({1, 0, 2}), std::invalid_argument);
}

TEST_CASE("supersequence properties") {
    std::mt19937_64 rng{1};
    for (int i = 0; i < 1000; ++i) {
        const auto a = random_sequence(rng);
        const auto b = random_sequence(rng);
        const auto c = random_sequence(rng);
        const auto s = supersequence(a, b);
        CHECK(s == supersequence(b, a));
        CHECK(supersequence(a, a) == a);
        CHECK(supersequence(s, c) == supersequence(a, supersequence(b, c)));
        CHECK(s.size() == std::max(a.size(), b.size()));
        for (std::size_t j = 0; j < s.size(); ++j) {
            CHECK(s.sizes[j] >= a.at_or_zero(j));
            CHECK(s.sizes[j] >= b.at_or_zero(j));
        }
    }
}

TEST_CASE("burst_sequence uses the time threshold") {
    const Trace t = fixtures::make_trace({{0.0, 1}, {0.1, 1}, {0.6, 1}, {0.7, -1}});
    CHECK(burst_sequence(t).sizes == std::vector<std::size_t>{2, 1, 1});
    CHECK(burst_sequence(t, 1.0).sizes == std::vector<std::size_t>{3, 1});
}

TEST_CASE("molding pads bursts and appends fake tail bursts") {
    const Trace real = trace_of({2, 3});
    const BurstSequence target{{4, 3, 2, 5}};
    const auto r = mold_trace(real, target);
    CHECK(r.plan.real_sizes == std::vector<std::size_t>{2, 3});
    CHECK(r.plan.padding == std::vector<std::size_t>{2, 0});
    CHECK(r.plan.tail_sizes == std::vector<std::size_t>{2, 5});
    CHECK(r.plan.overflow.empty());
    CHECK(r.plan.perfect());
    CHECK(r.plan.dummy_packets() == 9);
    CHECK(r.defended.size() == 14);
    CHECK(burst_sequence(r.defended).sizes == target.sizes);
    // first burst flushes threshold after its last real packet
    CHECK(r.defended[0].timestamp == doctest::Approx(0.01 + default_burst_threshold));
    // fake bursts alternate direction after the last real burst
    const auto bursts = segment_bursts(r.defended);
    REQUIRE(bursts.size() == 4);
    CHECK(bursts[2].direction == Direction::outgoing);
    CHECK(bursts[3].direction == Direction::incoming);
}

TEST_CASE("overflow is recorded and nothing is dropped") {
    const Trace real = trace_of({6, 1, 3});
    const BurstSequence target{{4, 2}};
    const auto r = mold_trace(real, target);
    CHECK(r.plan.overflow == std::vector<std::size_t>{0, 2});
    CHECK_FALSE(r.plan.perfect());
    CHECK(r.plan.emitted == std::vector<std::size_t>{6, 2, 3});
    CHECK(r.defended.size() >= real.size());
    CHECK(burst_sequence(r.defended).sizes == r.plan.emitted);
}

TEST_CASE("perfect molding makes two visits indistinguishable") {
    std::mt19937_64 rng{2};
    std::uniform_int_distribution<std::size_t> len{1, 15};
    std::uniform_int_distribution<std::size_t> size{1, 20};
    std::uniform_real_distribution<double> gap{0.31, 2.0};
    int perfect = 0;
    for (int i = 0; i < 300; ++i) {
        std::vector<std::size_t> sa(len(rng));
        std::vector<std::size_t> sb(len(rng));
        for (auto &x : sa) x = size(rng);
        for (auto &x : sb) x = size(rng);
        const Trace a = trace_of(sa, gap(rng));
        const Trace b = trace_of(sb, gap(rng));
        const auto s = supersequence(burst_sequence(a), burst_sequence(b));
        const auto ma = mold_trace(a, s);
        const auto mb = mold_trace(b, s);
        // the supersequence dominates both, so neither overflows
        REQUIRE(ma.plan.perfect());
        REQUIRE(mb.plan.perfect());
        CHECK(burst_sequence(ma.defended).sizes == s.sizes);
        CHECK(burst_sequence(mb.defended).sizes == s.sizes);
        CHECK(burst_sizes(segment_bursts(ma.defended)) == burst_sizes(segment_bursts(mb.defended)));
        ++perfect;
    }
    CHECK(perfect == 300);
}

TEST_CASE("molding random traces never loses packets") {
    std::mt19937_64 rng{3};
    for (int i = 0; i < 200; ++i) {
        const Trace real = fixtures::random_trace(rng, 5, 150);
        const auto target = random_sequence(rng);
        const auto r = mold_trace(real, target);
        CHECK(r.defended.size() >= real.size());
        CHECK(r.defended.size() == real.size() + r.plan.dummy_packets());
        CHECK(burst_sequence(r.defended).sizes == r.plan.emitted);
        std::set<std::size_t> overflow(r.plan.overflow.begin(), r.plan.overflow.end());
        for (std::size_t j = 0; j < r.plan.real_sizes.size(); ++j) {
            CHECK(overflow.count(j) == (r.plan.real_sizes[j] > target.at_or_zero(j) ? 1u : 0u));
        }
    }
}

TEST_CASE("molding errors") {
    CHECK_THROWS_AS(mold_trace(fixtures::four_burst_trace(), BurstSequence{}), std::invalid_argument);
    CHECK_THROWS_AS(mold_trace(Trace{}, BurstSequence{{1}}), empty_trace_error);
    MoldingOptions bad;
    bad.threshold = 0.0;
    CHECK_THROWS_AS(mold_trace(fixtures::four_burst_trace(), BurstSequence{{1}}, bad), std::invalid_argument);
    MoldingOptions neg;
    neg.fake_burst_gap = -1.0;
    CHECK_THROWS_AS(mold_trace(fixtures::four_burst_trace(), BurstSequence{{1}}, neg), std::invalid_argument);
}

TEST_CASE("explicit fake burst gap") {
    MoldingOptions o;
    o.fake_burst_gap = 0.25;
    const auto r = mold_trace(trace_of({1}), BurstSequence{{1, 1, 1}}, o);
    const double flush = default_burst_threshold;
    CHECK(r.defended[1].timestamp == doctest::Approx(flush + 0.25));
    CHECK(r.defended[2].timestamp == doctest::Approx(flush + 0.5));
}

TEST_CASE("median inter-burst gap") {
    const std::vector<Trace> traces{trace_of({1, 1, 1}, 0.4), trace_of({1, 1}, 1.0)};
    CHECK(median_inter_burst_gap(traces) == doctest::Approx(0.4 + 0.01));
    const std::vector<Trace> single{trace_of({3})};
    CHECK(median_inter_burst_gap(single) == default_burst_threshold);
}

TEST_CASE("overheads") {
    const Trace real = fixtures::four_burst_trace();
    const auto same = overheads(real, real);
    CHECK(same.bandwidth == 1.0);
    CHECK(same.latency == doctest::Approx(1.0));
    const auto r = mold_trace(real, BurstSequence{{6, 6, 6, 6, 6}});
    const auto o = overheads(real, r.defended);
    CHECK(o.bandwidth == doctest::Approx(30.0 / 11.0));
    CHECK(o.latency == doctest::Approx(r.defended.duration() / 0.85));
    const Trace point = fixtures::make_trace({{0.0, 1}});
    CHECK(overheads(point, point).latency == 1.0);
    CHECK_THROWS_AS(overheads(Trace{}, real), empty_trace_error);
}

TEST_CASE("overhead summary matches a hand computation") {
    const std::vector<Overheads> items{{1.0, 1.0}, {1.5, 1.2}, {2.0, 1.1}, {1.25, 1.0}, {1.75, 1.7}};
    const auto s = summarize_overheads(items);
    std::vector<double> bw;
    std::vector<double> lat;
    for (const auto &o : items) {
        bw.push_back(o.bandwidth);
        lat.push_back(o.latency);
    }
    CHECK(s.traces == 5);
    CHECK(s.bandwidth_mean == doctest::Approx(1.5));
    CHECK(s.latency_mean == doctest::Approx(1.2));
    CHECK(s.bandwidth_sd == doctest::Approx(oracles::sample_sd(bw)));
    CHECK(s.latency_sd == doctest::Approx(oracles::sample_sd(lat)));
    CHECK(s.bandwidth_sd == doctest::Approx(std::sqrt(0.625 / 4)));
    CHECK(summarize_overheads(std::vector<Overheads>{{2.0, 3.0}}).bandwidth_sd == 0.0);
    CHECK(summarize_overheads({}).traces == 0);
}

TEST_CASE("site pairing schedule") {
    const std::vector<int> monitored{0, 1, 2};
    const std::vector<int> decoys{10, 11, 12, 13};
    const auto sched = pair_sites(monitored, decoys, 8, 5);
    CHECK(sched.size() == 2 * 8 * 3);
    CHECK(sched == pair_sites(monitored, decoys, 8, 5));
    for (std::size_t i = 0; i < sched.size(); i += 2) {
        CHECK_FALSE(sched[i].reverse);
        CHECK(sched[i + 1].reverse);
        CHECK(sched[i + 1].visited == sched[i].decoy);
        CHECK(sched[i + 1].decoy == sched[i].visited);
    }
    // every decoy used once per site in each round of four batches
    for (int m : monitored) {
        std::multiset<int> used;
        for (const auto &p : sched) {
            if (!p.reverse && p.visited == m && p.instance < 4) used.insert(p.decoy);
        }
        CHECK(std::set<int>(used.begin(), used.end()) == std::set<int>(decoys.begin(), decoys.end()));
        CHECK(used.size() == 4);
    }
    CHECK_THROWS_AS(pair_sites({}, decoys, 1, 0), std::invalid_argument);
}
