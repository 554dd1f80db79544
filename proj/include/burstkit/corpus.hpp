// corpus.hpp
//
// Loading a directory of trace files.  Monitored visits are named
// `<site>-<instance>` and unmonitored visits `<instance>`.  An optional
// manifest CSV (filename,site_label,circuit_id) overrides the labels
// and supplies circuit ids.

#ifndef BURSTKIT_CORPUS_HPP
#define BURSTKIT_CORPUS_HPP

#include <optional>
#include <string>
#include <vector>

#include "burstkit/trace.hpp"

namespace burstkit {

struct CorpusEntry {
    std::string name;   /// file name relative to the corpus directory
    Trace trace;        /// metadata always carries site, instance and circuit

    int site() const { return *trace.metadata().site_label; }
    long circuit() const { return *trace.metadata().circuit_id; }
};

struct SkippedFile {
    std::string name;
    std::string reason;
};

struct Corpus {
    std::vector<CorpusEntry> entries;
    std::vector<SkippedFile> skipped;
};

struct CorpusOptions {
    /// optional manifest CSV: filename,site_label,circuit_id
    std::optional<std::string> manifest_path;
    /// visits per circuit when neither the manifest nor the filename
    /// gives a circuit: circuit = instance / instances_per_circuit.
    /// 0 means every visit has its own circuit.
    long instances_per_circuit = 0;
};

struct ManifestRow {
    int site_label;
    long circuit_id;
};

/// reads filename,site_label,circuit_id rows; a header row is allowed
std::vector<std::pair<std::string, ManifestRow>> read_corpus_manifest(const std::string &path);

/// filename convention: "12-305" -> (12, 305), "305" -> (unmonitored, 305)
std::optional<std::pair<int, long>> parse_trace_filename(const std::string &name);

/// loads every trace file in dir; unreadable or unrecognized files are
/// reported in Corpus::skipped and loading continues
///
/// Entries are ordered monitored-first by (site, instance, name), so
/// the result is independent of directory iteration order.  Throws
/// data_error when the directory is missing or the manifest is
/// malformed.
Corpus load_corpus(const std::string &dir, const CorpusOptions &options = {});

}  // namespace burstkit

#endif  // BURSTKIT_CORPUS_HPP
