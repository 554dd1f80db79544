// commands.hpp
//
// Subcommands of burstkit-cli.  Each takes a fully resolved option set,
// writes its results under the output directory and throws
// burstkit::data_error (exit 2) or usage_error (exit 1) on failure.

#ifndef BURSTKIT_TOOLS_COMMANDS_HPP
#define BURSTKIT_TOOLS_COMMANDS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

class usage_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CorpusArgs {
    std::string dir;
    std::string manifest;              /// empty: <dir>/manifest.csv when present
    long instances_per_circuit = 0;
};

struct FeaturesArgs {
    CorpusArgs corpus;
    std::string out;
    std::size_t bins = 20;
    bool sweep = false;                /// b = 5, 10, ..., 50, one subdirectory each
    std::string split;                 /// bins from the training partition only
    std::string bins_from;             /// reuse a bins.json
};

struct RepresentArgs {
    CorpusArgs corpus;
    std::string out;
    std::string encoding = "all";
    std::size_t length = 5000;
};

struct SplitArgs {
    CorpusArgs corpus;
    std::string out;
    std::string ratio = "8:1:1";
    bool shuffle = false;
    std::uint64_t seed = 0;
    std::string speed;                 /// "", "slowest" or "fastest"
    double fraction = 0.2;
};

struct KnnArgs {
    std::string data;                  /// directory with features.bin + rows.csv (or any <name>.bin)
    std::string matrix;                /// explicit matrix file, overrides data/features.bin
    std::string split;
    std::string out;
    std::size_t k = 5;
    std::string distance = "euclidean";
    std::string eval = "test";
    std::string world = "auto";        /// auto, closed, open
    std::string positive = "exact";
};

struct LeakageArgs {
    std::string features;              /// features.csv
    std::string out;
    std::string split;                 /// restrict to training rows (rows.csv beside features.csv)
    std::size_t mc_samples = 5000;
    std::uint64_t seed = 0;
    std::string categories = "auto";   /// auto, kinds, each, all
    double redundancy_threshold = 0.90;
    double cluster_threshold = 0.40;
    std::size_t max_mi_instances = 1000;
};

struct WtArgs {
    CorpusArgs corpus;
    std::string out;
    std::vector<int> sensitive;        /// empty: lower half of the site labels
    std::size_t batches = 0;           /// 0: fewest visits of any paired site
    double threshold_ms = 300.0;
    std::optional<double> fake_gap_ms;
    std::uint64_t seed = 0;
};

void run_features(const FeaturesArgs &args);
void run_represent(const RepresentArgs &args);
void run_split(const SplitArgs &args);
void run_knn(const KnnArgs &args);
void run_leakage(const LeakageArgs &args);
void run_wt(const WtArgs &args);

}  // namespace cli

#endif  // BURSTKIT_TOOLS_COMMANDS_HPP
