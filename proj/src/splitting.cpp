// splitting.cpp

#include "burstkit/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "csv.hpp"

namespace burstkit {

CorpusIndex CorpusIndex::from_corpus(const Corpus &corpus) {
    CorpusIndex index;
    for (const auto &e : corpus.entries) {
        index.add(e.name, e.site(), e.circuit(), e.trace);
    }
    return index;
}

void CorpusIndex::add(std::string trace_ref, int site, long circuit, const Trace &trace) {
    entries_.push_back({std::move(trace_ref), site, circuit, trace.duration()});
}

std::vector<int> CorpusIndex::sites() const {
    std::set<int> s;
    for (const auto &e : entries_) {
        s.insert(e.site);
    }
    return {s.begin(), s.end()};
}

std::string_view to_string(Partition p) {
    switch (p) {
    case Partition::train:
        return "train";
    case Partition::validation:
        return "validation";
    case Partition::test:
        return "test";
    }
    return "?";
}

Partition partition_from_string(std::string_view s) {
    if (s == "train") return Partition::train;
    if (s == "validation" || s == "val") return Partition::validation;
    if (s == "test") return Partition::test;
    throw std::invalid_argument{"unknown partition '" + std::string{s} + "'"};
}

SplitRatio split_ratio_from_string(const std::string &s) {
    SplitRatio r;
    char c1 = 0;
    char c2 = 0;
    int a = -1;
    int b = -1;
    int c = -1;
    if (std::sscanf(s.c_str(), "%d%c%d%c%d", &a, &c1, &b, &c2, &c) != 5 || c1 != ':' || c2 != ':' || a <= 0 ||
        b < 0 || c <= 0) {
        throw std::invalid_argument{"ratio must look like 8:1:1 (train and test parts positive)"};
    }
    r.train = static_cast<unsigned>(a);
    r.validation = static_cast<unsigned>(b);
    r.test = static_cast<unsigned>(c);
    return r;
}

std::vector<std::size_t> Split::indices(Partition p) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] == p) {
            out.push_back(i);
        }
    }
    return out;
}

std::array<std::size_t, 3> circuit_allocation(std::size_t n, const SplitRatio &ratio) {
    const std::array<std::size_t, 3> parts{ratio.train, ratio.validation, ratio.test};
    const std::size_t s = parts[0] + parts[1] + parts[2];
    if (s == 0) {
        throw std::invalid_argument{"split ratio must have a positive part"};
    }
    const auto needed = static_cast<std::size_t>(std::count_if(parts.begin(), parts.end(), [](auto p) { return p > 0; }));
    if (n < needed) {
        throw data_error{"need at least " + std::to_string(needed) + " circuits to split, found " +
                         std::to_string(n)};
    }
    std::array<std::size_t, 3> out{};
    out[0] = (2 * n * parts[0] + s) / (2 * s);
    out[1] = n * parts[1] / s;
    out[0] = std::min(out[0], n);
    out[1] = std::min(out[1], n - out[0]);
    out[2] = n - out[0] - out[1];
    for (std::size_t p = 0; p < 3; ++p) {
        if (parts[p] == 0 && out[p] > 0) {
            // a zero part never keeps circuits; hand them to train
            out[0] += out[p];
            out[p] = 0;
        }
    }
    for (std::size_t p = 0; p < 3; ++p) {
        while (parts[p] > 0 && out[p] == 0) {
            const auto donor = static_cast<std::size_t>(std::max_element(out.begin(), out.end()) - out.begin());
            --out[donor];
            ++out[p];
        }
    }
    return out;
}

Split split_by_circuit(const CorpusIndex &index, const SplitRatio &ratio, std::optional<std::uint64_t> shuffle_seed) {
    std::vector<long> circuits;
    {
        std::set<long> distinct;
        for (const auto &e : index.entries()) {
            distinct.insert(e.circuit);
        }
        circuits.assign(distinct.begin(), distinct.end());
    }
    if (shuffle_seed) {
        std::mt19937_64 rng{*shuffle_seed};
        std::shuffle(circuits.begin(), circuits.end(), rng);
    }
    const auto alloc = circuit_allocation(circuits.size(), ratio);

    std::map<long, Partition> where;
    std::size_t pos = 0;
    for (std::size_t p = 0; p < 3; ++p) {
        for (std::size_t i = 0; i < alloc[p]; ++i) {
            where[circuits[pos++]] = static_cast<Partition>(p);
        }
    }
    Split split;
    split.assignment.reserve(index.size());
    for (const auto &e : index.entries()) {
        split.assignment.push_back(where.at(e.circuit));
    }
    return split;
}

namespace {

/// site -> circuit -> (sum, count)
std::map<int, std::map<long, std::pair<double, std::size_t>>> load_sums(const CorpusIndex &index) {
    std::map<int, std::map<long, std::pair<double, std::size_t>>> sums;
    for (const auto &e : index.entries()) {
        auto &acc = sums[e.site][e.circuit];
        acc.first += e.page_load_time;
        acc.second += 1;
    }
    return sums;
}

std::vector<CircuitLoadTime> ranked(const std::map<long, std::pair<double, std::size_t>> &per_circuit) {
    std::vector<CircuitLoadTime> out;
    for (const auto &[circuit, acc] : per_circuit) {
        out.push_back({circuit, acc.first / static_cast<double>(acc.second), acc.second});
    }
    std::sort(out.begin(), out.end(), [](const CircuitLoadTime &a, const CircuitLoadTime &b) {
        return a.mean_seconds != b.mean_seconds ? a.mean_seconds < b.mean_seconds : a.circuit < b.circuit;
    });
    return out;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

Split split_by_speed(const CorpusIndex &index, SpeedExtreme which, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw std::invalid_argument{"speed split fraction must be in (0, 1)"};
    }
    std::map<std::pair<int, long>, Partition> where;
    for (const auto &[site, per_circuit] : load_sums(index)) {
        const auto order = ranked(per_circuit);
        const auto n = order.size();
        const auto count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
        if (count == 0) {
            throw data_error{"fraction " + std::to_string(fraction) + " selects no circuit for site " +
                             label_to_string(site) + " (" + std::to_string(n) + " circuits)"};
        }
        if (count >= n) {
            throw data_error{"fraction " + std::to_string(fraction) + " leaves no training circuit for site " +
                             label_to_string(site)};
        }
        std::vector<long> rest;
        for (std::size_t i = 0; i < n; ++i) {
            const bool selected = which == SpeedExtreme::fastest ? i < count : i >= n - count;
            if (selected) {
                where[{site, order[i].circuit}] = Partition::test;
            } else {
                rest.push_back(order[i].circuit);
            }
        }
        std::sort(rest.begin(), rest.end());
        const std::size_t train_count = (rest.size() + 1) / 2;
        for (std::size_t i = 0; i < rest.size(); ++i) {
            where[{site, rest[i]}] = i < train_count ? Partition::train : Partition::validation;
        }
    }
    Split split;
    for (const auto &e : index.entries()) {
        split.assignment.push_back(where.at({e.site, e.circuit}));
    }
    return split;
}

std::vector<CircuitLoadTime> load_time_stats(const CorpusIndex &index, int site) {
    const auto sums = load_sums(index);
    const auto it = sums.find(site);
    if (it == sums.end()) {
        throw std::out_of_range{"site " + label_to_string(site) + " not in corpus"};
    }
    return ranked(it->second);
}

SpeedGap speed_gap(const CorpusIndex &index) {
    std::vector<double> gaps;
    std::vector<double> slow;
    std::vector<double> fast;
    for (const auto &[site, per_circuit] : load_sums(index)) {
        const auto order = ranked(per_circuit);
        slow.push_back(order.back().mean_seconds);
        fast.push_back(order.front().mean_seconds);
        gaps.push_back(order.back().mean_seconds - order.front().mean_seconds);
    }
    if (gaps.empty()) {
        throw data_error{"empty corpus index"};
    }
    return {median(gaps), median(slow), median(fast)};
}

void write_split_manifest(const std::string &path, const CorpusIndex &index, const Split &split) {
    if (split.assignment.size() != index.size()) {
        throw std::invalid_argument{"split does not match corpus index"};
    }
    std::ofstream out{path};
    if (!out) {
        throw data_error{"cannot write " + path};
    }
    out << "filename,partition\n";
    for (std::size_t i = 0; i < index.size(); ++i) {
        out << index[i].trace_ref << ',' << to_string(split.assignment[i]) << '\n';
    }
}

std::vector<std::pair<std::string, Partition>> read_split_manifest(const std::string &path) {
    std::ifstream in{path};
    if (!in) {
        throw data_error{"cannot open " + path};
    }
    std::vector<std::pair<std::string, Partition>> out;
    const auto rows = csv::read_rows(in);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto &r = rows[i];
        if (i == 0 && r[0] == "filename") {
            continue;
        }
        if (r.size() != 2) {
            throw data_error{path + ": row " + std::to_string(i + 1) + ": expected filename,partition"};
        }
        try {
            out.push_back({r[0], partition_from_string(r[1])});
        } catch (const std::invalid_argument &e) {
            throw data_error{path + ": row " + std::to_string(i + 1) + ": " + e.what()};
        }
    }
    return out;
}

}  // namespace burstkit
