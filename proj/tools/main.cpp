// burstkit-cli
//
//   burstkit-cli features  <corpus> --out DIR [--bins 20 | --sweep] [--split split.csv]
//   burstkit-cli represent <corpus> --out DIR [--encoding all] [--length 5000]
//   burstkit-cli split     <corpus> --out DIR [--ratio 8:1:1] [--speed slowest --fraction 0.2]
//   burstkit-cli knn       --data DIR --split split.csv --out DIR [--knn-k 5]
//   burstkit-cli leakage   --features features.csv --out DIR [--split split.csv] [--mc-samples 5000]
//   burstkit-cli wt        <corpus> --out DIR [--sensitive 0,1] [--threshold-ms 300]
//
// Options may also come from --config FILE (key=value lines, one
// [section] per subcommand); flags on the command line win.
//
// Exit status: 0 success, 1 usage error, 2 data error.

#include <iostream>

#include <CLI11.hpp>

#include "burstkit/trace.hpp"
#include "commands.hpp"

namespace {

void corpus_options(CLI::App *sub, cli::CorpusArgs &c) {
    sub->add_option("corpus", c.dir, "directory of trace files")->required()->check(CLI::ExistingDirectory);
    sub->add_option("--manifest", c.manifest, "filename,site_label,circuit_id CSV (default <corpus>/manifest.csv)");
    sub->add_option("--instances-per-circuit", c.instances_per_circuit,
                    "visits per circuit when no manifest gives circuits (0: one circuit per visit)")
        ->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"burstkit: website fingerprinting features, classifiers, leakage and defense simulation"};
    app.set_version_flag("--version", std::string{BURSTKIT_VERSION});
    app.set_config("--config", "", "key=value config file; command-line flags override it");
    app.require_subcommand(1);

    cli::FeaturesArgs fa;
    auto *features = app.add_subcommand("features", "burst timing feature vectors");
    corpus_options(features, fa.corpus);
    features->add_option("--out", fa.out, "output directory")->required();
    features->add_option("--bins", fa.bins, "bins per feature kind")->capture_default_str()->check(CLI::PositiveNumber);
    features->add_flag("--sweep", fa.sweep, "one output per b = 5, 10, ..., 50");
    features->add_option("--split", fa.split, "split manifest; bins are fitted on its training traces");
    features->add_option("--bins-from", fa.bins_from, "reuse the bins.json of an earlier run")
        ->check(CLI::ExistingFile);

    cli::RepresentArgs ra;
    auto *represent = app.add_subcommand("represent", "fixed-length per-packet encodings");
    corpus_options(represent, ra.corpus);
    represent->add_option("--out", ra.out, "output directory")->required();
    represent->add_option("--encoding", ra.encoding, "direction, raw_timing, directional_time or all")
        ->capture_default_str()
        ->check(CLI::IsMember({"all", "direction", "raw", "raw_timing", "directional", "directional_time"}));
    represent->add_option("--length", ra.length, "sequence length")->capture_default_str()->check(CLI::PositiveNumber);

    cli::SplitArgs sa;
    auto *split = app.add_subcommand("split", "circuit-aware train/validation/test split");
    corpus_options(split, sa.corpus);
    split->add_option("--out", sa.out, "output directory")->required();
    split->add_option("--ratio", sa.ratio, "train:validation:test circuit ratio")->capture_default_str();
    split->add_flag("--shuffle", sa.shuffle, "shuffle circuits with --seed before assigning");
    split->add_option("--seed", sa.seed, "random seed")->capture_default_str();
    split->add_option("--speed", sa.speed, "test on the slowest or fastest circuits of every site")
        ->check(CLI::IsMember({"slowest", "fastest"}));
    split->add_option("--fraction", sa.fraction, "share of circuits in the speed test set")->capture_default_str();

    cli::KnnArgs ka;
    auto *knn = app.add_subcommand("knn", "k-NN closed- or open-world evaluation");
    knn->add_option("--data", ka.data, "directory holding features.bin and rows.csv");
    knn->add_option("--matrix", ka.matrix, "matrix file (rows.csv is read from --data or its directory)");
    knn->add_option("--split", ka.split, "split manifest")->required()->check(CLI::ExistingFile);
    knn->add_option("--out", ka.out, "output directory")->required();
    knn->add_option("--knn-k", ka.k, "neighbors")->capture_default_str()->check(CLI::PositiveNumber);
    knn->add_option("--distance", ka.distance, "euclidean or manhattan")
        ->capture_default_str()
        ->check(CLI::IsMember({"euclidean", "manhattan"}));
    knn->add_option("--eval", ka.eval, "partition to evaluate on")
        ->capture_default_str()
        ->check(CLI::IsMember({"test", "validation"}));
    knn->add_option("--world", ka.world, "auto, closed or open")
        ->capture_default_str()
        ->check(CLI::IsMember({"auto", "closed", "open"}));
    knn->add_option("--positive", ka.positive, "open-world true positive: exact site or binary")
        ->capture_default_str()
        ->check(CLI::IsMember({"exact", "binary"}));

    cli::LeakageArgs la;
    auto *leakage = app.add_subcommand("leakage", "information leakage of features");
    leakage->add_option("--features", la.features, "features.csv")->required()->check(CLI::ExistingFile);
    leakage->add_option("--out", la.out, "output directory")->required();
    leakage->add_option("--split", la.split, "split manifest; only its training rows are analyzed")
        ->check(CLI::ExistingFile);
    leakage->add_option("--mc-samples", la.mc_samples, "Monte Carlo samples")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    leakage->add_option("--seed", la.seed, "random seed")->capture_default_str();
    leakage->add_option("--categories", la.categories, "auto, kinds, each or all")
        ->capture_default_str()
        ->check(CLI::IsMember({"auto", "kinds", "each", "all"}));
    leakage->add_option("--redundancy-threshold", la.redundancy_threshold)->capture_default_str()->check(CLI::Range(0.0, 1.0));
    leakage->add_option("--cluster-threshold", la.cluster_threshold)->capture_default_str()->check(CLI::Range(0.0, 1.0));
    leakage->add_option("--max-mi-instances", la.max_mi_instances, "instances used for redundancy (0: all)")
        ->capture_default_str();

    cli::WtArgs wa;
    double fake_gap_ms = -1.0;
    auto *wt = app.add_subcommand("wt", "Walkie-Talkie burst molding and overheads");
    corpus_options(wt, wa.corpus);
    wt->add_option("--out", wa.out, "output directory")->required();
    wt->add_option("--sensitive", wa.sensitive, "sensitive site labels (default: lower half)")->delimiter(',');
    wt->add_option("--batches", wa.batches, "collection batches (0: fewest visits of any site)")->capture_default_str();
    wt->add_option("--threshold-ms", wa.threshold_ms, "burst time threshold")->capture_default_str();
    auto *gap = wt->add_option("--fake-gap-ms", fake_gap_ms, "spacing of fake bursts (default: median real gap)");
    wt->add_option("--seed", wa.seed, "random seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    if (gap->count() > 0) {
        wa.fake_gap_ms = fake_gap_ms;
    }

    try {
        if (features->parsed()) cli::run_features(fa);
        if (represent->parsed()) cli::run_represent(ra);
        if (split->parsed()) cli::run_split(sa);
        if (knn->parsed()) cli::run_knn(ka);
        if (leakage->parsed()) cli::run_leakage(la);
        if (wt->parsed()) cli::run_wt(wa);
    } catch (const cli::usage_error &e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
