// common.hpp
//
// Plumbing shared by the subcommands.

#ifndef BURSTKIT_TOOLS_COMMON_HPP
#define BURSTKIT_TOOLS_COMMON_HPP

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "burstkit/corpus.hpp"
#include "burstkit/splitting.hpp"
#include "commands.hpp"

namespace cli {

namespace fs = std::filesystem;
using nlohmann::json;

/// creates the output directory
fs::path prepare_out(const std::string &out);

/// loads the corpus, reports skipped files on stderr and in
/// <out>/skipped.csv; throws data_error when nothing loads
burstkit::Corpus load(const CorpusArgs &args, const fs::path &out);

json corpus_json(const CorpusArgs &args);

/// writes <out>/run_config.json: command, resolved options, seed, version
void write_run_config(const fs::path &out, const std::string &command, json config);

void write_json(const fs::path &path, const json &j);

/// filename -> partition; throws data_error on duplicates
std::map<std::string, burstkit::Partition> read_split_map(const std::string &path);

/// partition of every name, in order; throws data_error naming the
/// first file that the split manifest does not cover
std::vector<burstkit::Partition> partitions_for(const std::vector<std::string> &names,
                                                const std::map<std::string, burstkit::Partition> &split,
                                                const std::string &split_path);

}  // namespace cli

#endif  // BURSTKIT_TOOLS_COMMON_HPP
