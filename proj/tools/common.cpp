// common.cpp

#include "common.hpp"

#include <fstream>
#include <iostream>

namespace cli {

fs::path prepare_out(const std::string &out) {
    if (out.empty()) {
        throw usage_error{"--out is required"};
    }
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) {
        throw burstkit::data_error{"cannot create output directory " + out + ": " + ec.message()};
    }
    return fs::path{out};
}

burstkit::Corpus load(const CorpusArgs &args, const fs::path &out) {
    burstkit::CorpusOptions options;
    options.instances_per_circuit = args.instances_per_circuit;
    if (!args.manifest.empty()) {
        options.manifest_path = args.manifest;
    } else if (fs::exists(fs::path{args.dir} / "manifest.csv")) {
        options.manifest_path = (fs::path{args.dir} / "manifest.csv").string();
    }
    burstkit::Corpus corpus = burstkit::load_corpus(args.dir, options);
    if (!corpus.skipped.empty()) {
        std::ofstream skipped{out / "skipped.csv"};
        skipped << "filename,reason\n";
        for (const auto &s : corpus.skipped) {
            std::cerr << "skipped " << s.name << ": " << s.reason << '\n';
            skipped << s.name << ",\"" << s.reason << "\"\n";
        }
        std::cerr << corpus.skipped.size() << " file(s) skipped, " << corpus.entries.size() << " loaded\n";
    }
    if (corpus.entries.empty()) {
        throw burstkit::data_error{"no traces found in " + args.dir};
    }
    return corpus;
}

json corpus_json(const CorpusArgs &args) {
    return {{"dir", args.dir}, {"manifest", args.manifest}, {"instances_per_circuit", args.instances_per_circuit}};
}

void write_json(const fs::path &path, const json &j) {
    std::ofstream out{path};
    if (!out) {
        throw burstkit::data_error{"cannot write " + path.string()};
    }
    out << j.dump(2) << '\n';
}

void write_run_config(const fs::path &out, const std::string &command, json config) {
    json j;
    j["command"] = command;
    j["version"] = BURSTKIT_VERSION;
    j["seed"] = config.contains("seed") ? config["seed"] : json(nullptr);
    j["config"] = std::move(config);
    write_json(out / "run_config.json", j);
}

std::map<std::string, burstkit::Partition> read_split_map(const std::string &path) {
    std::map<std::string, burstkit::Partition> out;
    for (auto &[name, p] : burstkit::read_split_manifest(path)) {
        if (!out.emplace(name, p).second) {
            throw burstkit::data_error{path + ": " + name + " listed twice"};
        }
    }
    return out;
}

std::vector<burstkit::Partition> partitions_for(const std::vector<std::string> &names,
                                                const std::map<std::string, burstkit::Partition> &split,
                                                const std::string &split_path) {
    std::vector<burstkit::Partition> out;
    out.reserve(names.size());
    for (const auto &n : names) {
        const auto it = split.find(n);
        if (it == split.end()) {
            throw burstkit::data_error{"split manifest " + split_path + " has no entry for " + n};
        }
        out.push_back(it->second);
    }
    return out;
}

}  // namespace cli
