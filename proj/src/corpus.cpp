// corpus.cpp

#include "burstkit/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <tuple>

#include "csv.hpp"

namespace fs = std::filesystem;

namespace burstkit {

namespace {

bool parse_long(const std::string &s, long &out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size() && !s.empty();
}

}  // namespace

std::optional<std::pair<int, long>> parse_trace_filename(const std::string &name) {
    const auto dash = name.find('-');
    long a = 0;
    if (dash == std::string::npos) {
        if (parse_long(name, a) && a >= 0) {
            return std::pair<int, long>{unmonitored_label, a};
        }
        return std::nullopt;
    }
    long b = 0;
    if (parse_long(name.substr(0, dash), a) && parse_long(name.substr(dash + 1), b) && a >= 0 && b >= 0) {
        return std::pair<int, long>{static_cast<int>(a), b};
    }
    return std::nullopt;
}

std::vector<std::pair<std::string, ManifestRow>> read_corpus_manifest(const std::string &path) {
    std::ifstream in{path};
    if (!in) {
        throw data_error{"cannot open manifest " + path};
    }
    std::vector<std::pair<std::string, ManifestRow>> out;
    const auto rows = csv::read_rows(in);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto &r = rows[i];
        if (i == 0 && !r.empty() && r[0] == "filename") {
            continue;
        }
        if (r.size() != 3) {
            throw data_error{path + ": row " + std::to_string(i + 1) + ": expected filename,site_label,circuit_id"};
        }
        long circuit = 0;
        if (!parse_long(r[2], circuit)) {
            throw data_error{path + ": row " + std::to_string(i + 1) + ": bad circuit id '" + r[2] + "'"};
        }
        int label = 0;
        try {
            label = label_from_string(r[1]);
        } catch (const std::invalid_argument &e) {
            throw data_error{path + ": row " + std::to_string(i + 1) + ": " + e.what()};
        }
        out.push_back({r[0], {label, circuit}});
    }
    return out;
}

Corpus load_corpus(const std::string &dir, const CorpusOptions &options) {
    if (!fs::is_directory(dir)) {
        throw data_error{"corpus directory not found: " + dir};
    }
    std::map<std::string, ManifestRow> manifest;
    if (options.manifest_path) {
        for (auto &[name, row] : read_corpus_manifest(*options.manifest_path)) {
            manifest[name] = row;
        }
    }

    Corpus corpus;
    std::vector<std::string> names;
    for (const auto &item : fs::directory_iterator{dir}) {
        if (item.is_regular_file()) {
            names.push_back(item.path().filename().string());
        }
    }
    std::sort(names.begin(), names.end());

    for (const auto &name : names) {
        if (name.starts_with('.')) {
            continue;
        }
        const auto from_name = parse_trace_filename(name);
        const auto in_manifest = manifest.find(name);
        if (!from_name && in_manifest == manifest.end()) {
            // manifests, configs and other sidecars live next to traces
            const auto ext = fs::path{name}.extension().string();
            if (ext != ".csv" && ext != ".json" && ext != ".txt" && ext != ".cfg" && ext != ".toml") {
                corpus.skipped.push_back({name, "filename is neither <site>-<instance> nor <instance>"});
            }
            continue;
        }
        Trace trace;
        try {
            trace = read_trace_file((fs::path{dir} / name).string());
        } catch (const data_error &e) {
            corpus.skipped.push_back({name, e.what()});
            continue;
        }
        TraceMetadata meta;
        long instance = from_name ? from_name->second : 0;
        meta.instance_id = instance;
        if (in_manifest != manifest.end()) {
            meta.site_label = in_manifest->second.site_label;
            meta.circuit_id = in_manifest->second.circuit_id;
        } else {
            meta.site_label = from_name->first;
            if (options.instances_per_circuit > 0) {
                meta.circuit_id = instance / options.instances_per_circuit;
            }
        }
        trace.set_metadata(meta);
        corpus.entries.push_back({name, std::move(trace)});
    }

    auto key = [](const CorpusEntry &e) {
        const int site = e.site();
        return std::tuple{site == unmonitored_label, site, *e.trace.metadata().instance_id, e.name};
    };
    std::sort(corpus.entries.begin(), corpus.entries.end(),
              [&](const CorpusEntry &a, const CorpusEntry &b) { return key(a) < key(b); });

    // every visit on its own circuit: number them in corpus order
    long next_circuit = 0;
    for (const auto &e : corpus.entries) {
        if (e.trace.metadata().circuit_id) {
            next_circuit = std::max(next_circuit, *e.trace.metadata().circuit_id + 1);
        }
    }
    for (auto &e : corpus.entries) {
        if (!e.trace.metadata().circuit_id) {
            TraceMetadata meta = e.trace.metadata();
            meta.circuit_id = next_circuit++;
            e.trace.set_metadata(meta);
        }
    }
    return corpus;
}

}  // namespace burstkit
