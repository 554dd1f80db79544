// cmd_prepare.cpp
//
// features, represent and split: commands that turn a corpus into
// matrices and partitions.

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "burstkit/matrix_io.hpp"
#include "burstkit/representations.hpp"
#include "burstkit/timing_features.hpp"
#include "common.hpp"

namespace cli {

namespace {

std::vector<burstkit::RowInfo> row_info(const burstkit::Corpus &corpus) {
    std::vector<burstkit::RowInfo> rows;
    for (const auto &e : corpus.entries) {
        rows.push_back({e.name, e.site(), e.circuit()});
    }
    return rows;
}

std::vector<burstkit::Trace> traces_of(const burstkit::Corpus &corpus) {
    std::vector<burstkit::Trace> out;
    out.reserve(corpus.entries.size());
    for (const auto &e : corpus.entries) {
        out.push_back(e.trace);
    }
    return out;
}

std::string slurp(const std::string &path) {
    std::ifstream in{path};
    if (!in) {
        throw burstkit::data_error{"cannot open " + path};
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_features(const fs::path &dir, std::span<const burstkit::Trace> traces,
                    const std::vector<burstkit::RowInfo> &rows, const burstkit::BinSet &bins, json config) {
    fs::create_directories(dir);
    const burstkit::Matrix m = burstkit::extract_feature_matrix(traces, bins);
    burstkit::write_feature_csv((dir / "features.csv").string(), m, rows);
    burstkit::write_matrix_file((dir / "features.bin").string(), m);
    burstkit::write_row_index((dir / "rows.csv").string(), rows);
    std::ofstream{dir / "bins.json"} << bins.to_json() << '\n';
    config["bins"] = bins.bin_count();
    config["columns"] = m.cols();
    config["rows"] = m.rows();
    write_run_config(dir, "features", std::move(config));
    std::cout << dir.string() << ": " << m.rows() << " x " << m.cols() << '\n';
}

}  // namespace

void run_features(const FeaturesArgs &args) {
    const fs::path out = prepare_out(args.out);
    const burstkit::Corpus corpus = load(args.corpus, out);
    const auto traces = traces_of(corpus);
    const auto rows = row_info(corpus);

    // traces the bins are fitted on
    std::vector<burstkit::Trace> fit = traces;
    std::string bin_source = "all";
    if (!args.split.empty()) {
        std::vector<std::string> names;
        for (const auto &r : rows) {
            names.push_back(r.filename);
        }
        const auto parts = partitions_for(names, read_split_map(args.split), args.split);
        fit.clear();
        for (std::size_t i = 0; i < traces.size(); ++i) {
            if (parts[i] == burstkit::Partition::train) {
                fit.push_back(traces[i]);
            }
        }
        if (fit.empty()) {
            throw burstkit::data_error{"split manifest " + args.split + " has no training traces"};
        }
        bin_source = "train";
    }

    json config{{"corpus", corpus_json(args.corpus)}, {"split", args.split}, {"bin_source", bin_source},
                {"traces", traces.size()}, {"skipped", corpus.skipped.size()}};

    if (!args.bins_from.empty()) {
        if (args.sweep) {
            throw usage_error{"--sweep and --bins-from are mutually exclusive"};
        }
        const auto bins = burstkit::BinSet::from_json(slurp(args.bins_from));
        config["bin_source"] = args.bins_from;
        write_features(out, traces, rows, bins, config);
        return;
    }
    if (args.sweep) {
        for (std::size_t b = 5; b <= 50; b += 5) {
            char name[8];
            std::snprintf(name, sizeof name, "b%02zu", b);
            write_features(out / name, traces, rows, burstkit::build_bin_set(fit, b), config);
        }
        return;
    }
    if (args.bins == 0) {
        throw usage_error{"--bins must be positive"};
    }
    write_features(out, traces, rows, burstkit::build_bin_set(fit, args.bins), config);
}

void run_represent(const RepresentArgs &args) {
    if (args.length == 0) {
        throw usage_error{"--length must be positive"};
    }
    std::vector<burstkit::Encoding> encodings;
    if (args.encoding == "all") {
        encodings = {burstkit::Encoding::direction, burstkit::Encoding::raw_timing,
                     burstkit::Encoding::directional_time};
    } else {
        try {
            encodings = {burstkit::encoding_from_string(args.encoding)};
        } catch (const std::invalid_argument &e) {
            throw usage_error{e.what()};
        }
    }
    const fs::path out = prepare_out(args.out);
    const burstkit::Corpus corpus = load(args.corpus, out);
    const auto traces = traces_of(corpus);
    std::vector<std::string> files;
    for (auto e : encodings) {
        const std::string file = std::string{burstkit::to_string(e)} + ".bin";
        burstkit::write_matrix_file((out / file).string(), burstkit::encode_batch(traces, e, args.length));
        files.push_back(file);
    }
    burstkit::write_row_index((out / "rows.csv").string(), row_info(corpus));
    write_run_config(out, "represent",
                     {{"corpus", corpus_json(args.corpus)}, {"encoding", args.encoding}, {"length", args.length},
                      {"files", files}, {"rows", traces.size()}});
    std::cout << out.string() << ": " << traces.size() << " x " << args.length << " per encoding\n";
}

void run_split(const SplitArgs &args) {
    const fs::path out = prepare_out(args.out);
    const burstkit::Corpus corpus = load(args.corpus, out);
    const auto index = burstkit::CorpusIndex::from_corpus(corpus);

    burstkit::Split split;
    json config{{"corpus", corpus_json(args.corpus)}, {"seed", args.seed}};
    if (args.speed.empty()) {
        burstkit::SplitRatio ratio;
        try {
            ratio = burstkit::split_ratio_from_string(args.ratio);
        } catch (const std::invalid_argument &e) {
            throw usage_error{e.what()};
        }
        std::optional<std::uint64_t> shuffle;
        if (args.shuffle) {
            shuffle = args.seed;
        }
        split = burstkit::split_by_circuit(index, ratio, shuffle);
        config["mode"] = "circuit";
        config["ratio"] = args.ratio;
        config["shuffle"] = args.shuffle;
    } else {
        const auto which = args.speed == "fastest" ? burstkit::SpeedExtreme::fastest : burstkit::SpeedExtreme::slowest;
        split = burstkit::split_by_speed(index, which, args.fraction);
        config["mode"] = "speed";
        config["speed"] = args.speed;
        config["fraction"] = args.fraction;
    }
    burstkit::write_split_manifest((out / "split.csv").string(), index, split);

    // per-partition counts and the circuits behind them
    json summary;
    for (auto p : {burstkit::Partition::train, burstkit::Partition::validation, burstkit::Partition::test}) {
        const auto idx = split.indices(p);
        std::set<std::pair<int, long>> circuits;
        std::set<long> circuit_ids;
        for (auto i : idx) {
            circuits.insert({index[i].site, index[i].circuit});
            circuit_ids.insert(index[i].circuit);
        }
        summary[std::string{burstkit::to_string(p)}] = {
            {"traces", idx.size()}, {"circuits", circuit_ids.size()}, {"site_circuits", circuits.size()}};
    }
    config["partitions"] = summary;

    std::ofstream lt{out / "load_times.csv"};
    lt << "site,circuit,mean_seconds,visits\n";
    for (int site : index.sites()) {
        for (const auto &c : burstkit::load_time_stats(index, site)) {
            lt << burstkit::label_to_string(site) << ',' << c.circuit << ',' << c.mean_seconds << ',' << c.visits
               << '\n';
        }
    }
    const auto gap = burstkit::speed_gap(index);
    write_json(out / "speed_gap.json", {{"median_gap_seconds", gap.median_gap},
                                        {"median_slowest_seconds", gap.median_slowest},
                                        {"median_fastest_seconds", gap.median_fastest}});
    write_run_config(out, "split", config);
    std::cout << "train " << summary["train"]["traces"] << ", validation " << summary["validation"]["traces"]
              << ", test " << summary["test"]["traces"] << '\n';
}

}  // namespace cli
