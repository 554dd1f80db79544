// cmd_evaluate.cpp
//
// knn, leakage and wt: commands that consume prepared data.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "burstkit/knn.hpp"
#include "burstkit/leakage.hpp"
#include "burstkit/matrix_io.hpp"
#include "burstkit/timing_features.hpp"
#include "burstkit/walkie_talkie.hpp"
#include "common.hpp"

namespace cli {

namespace {

json point_json(const burstkit::PrPoint &p) {
    return {{"threshold", p.threshold}, {"tp", p.tp},         {"fp", p.fp},
            {"fn", p.fn},               {"tn", p.tn},         {"precision", p.precision},
            {"recall", p.recall}};
}

}  // namespace

void run_knn(const KnnArgs &args) {
    if (args.split.empty()) {
        throw usage_error{"--split is required"};
    }
    fs::path matrix_path = args.matrix;
    fs::path rows_path;
    if (matrix_path.empty()) {
        if (args.data.empty()) {
            throw usage_error{"give --data or --matrix"};
        }
        matrix_path = fs::path{args.data} / "features.bin";
        rows_path = fs::path{args.data} / "rows.csv";
    } else {
        rows_path = (args.data.empty() ? matrix_path.parent_path() : fs::path{args.data}) / "rows.csv";
    }
    const fs::path out = prepare_out(args.out);
    const burstkit::Matrix m = burstkit::read_matrix_file(matrix_path.string());
    const auto rows = burstkit::read_row_index(rows_path.string());
    if (rows.size() != m.rows()) {
        throw burstkit::data_error{rows_path.string() + " lists " + std::to_string(rows.size()) + " rows but " +
                                   matrix_path.string() + " has " + std::to_string(m.rows())};
    }
    std::vector<std::string> names;
    for (const auto &r : rows) {
        names.push_back(r.filename);
    }
    const auto parts = partitions_for(names, read_split_map(args.split), args.split);
    const auto eval_part = burstkit::partition_from_string(args.eval);

    bool open = args.world == "open";
    if (args.world == "auto") {
        open = std::any_of(rows.begin(), rows.end(), [](const auto &r) { return r.label == burstkit::unmonitored_label; });
    }
    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> eval_idx;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!open && rows[i].label == burstkit::unmonitored_label) {
            continue;   // the closed world has no background class
        }
        if (parts[i] == burstkit::Partition::train) {
            train_idx.push_back(i);
        } else if (parts[i] == eval_part) {
            eval_idx.push_back(i);
        }
    }
    if (train_idx.empty() || eval_idx.empty()) {
        throw burstkit::data_error{"split " + args.split + " leaves no training or " + args.eval + " rows"};
    }
    std::vector<int> train_labels;
    std::vector<int> eval_labels;
    for (auto i : train_idx) train_labels.push_back(rows[i].label);
    for (auto i : eval_idx) eval_labels.push_back(rows[i].label);

    const auto model = burstkit::KnnModel::fit(m.select_rows(train_idx), train_labels, args.k,
                                               burstkit::distance_from_string(args.distance));
    const auto preds = model.predict_batch(m.select_rows(eval_idx));

    std::ofstream pc{out / "predictions.csv"};
    pc << "filename,label,predicted,confidence\n";
    for (std::size_t j = 0; j < eval_idx.size(); ++j) {
        pc << rows[eval_idx[j]].filename << ',' << burstkit::label_to_string(eval_labels[j]) << ','
           << burstkit::label_to_string(preds[j].label) << ',' << preds[j].confidence << '\n';
    }

    json result{{"world", open ? "open" : "closed"}, {"k", args.k},  {"distance", args.distance},
                {"train_rows", train_idx.size()},   {"eval_rows", eval_idx.size()}, {"eval", args.eval}};
    if (!open) {
        const auto r = burstkit::score_closed(preds, eval_labels);
        result["accuracy"] = r.accuracy;
        result["correct"] = r.correct;
        result["total"] = r.total;
        std::ofstream cc{out / "confusion.csv"};
        cc << "label";
        for (int c : r.classes) cc << ',' << burstkit::label_to_string(c);
        cc << '\n';
        for (std::size_t a = 0; a < r.classes.size(); ++a) {
            cc << burstkit::label_to_string(r.classes[a]);
            for (auto n : r.confusion[a]) cc << ',' << n;
            cc << '\n';
        }
        std::cout << "accuracy " << r.accuracy << " (" << r.correct << "/" << r.total << ")\n";
    } else {
        const auto rule = args.positive == "binary" ? burstkit::PositiveRule::binary : burstkit::PositiveRule::exact_site;
        const auto thresholds = burstkit::default_thresholds(args.k);
        const auto r = burstkit::score_open(preds, eval_labels, thresholds, rule);
        result["positive_rule"] = args.positive;
        result["tuned_for_precision"] = point_json(r.tuned_for_precision);
        result["tuned_for_recall"] = point_json(r.tuned_for_recall);
        json curve = json::array();
        std::ofstream pr{out / "pr_curve.csv"};
        pr << "threshold,tp,fp,fn,tn,precision,recall\n";
        for (const auto &p : r.curve) {
            curve.push_back(point_json(p));
            pr << p.threshold << ',' << p.tp << ',' << p.fp << ',' << p.fn << ',' << p.tn << ',' << p.precision << ','
               << p.recall << '\n';
        }
        result["curve"] = curve;
        std::cout << "precision " << r.tuned_for_precision.precision << " / recall "
                  << r.tuned_for_precision.recall << " (tuned for precision)\n";
    }
    write_json(out / "knn.json", result);
    write_run_config(out, "knn",
                     {{"matrix", matrix_path.string()}, {"rows", rows_path.string()}, {"split", args.split},
                      {"k", args.k}, {"distance", args.distance}, {"eval", args.eval}, {"world", args.world},
                      {"positive", args.positive}});
}

void run_leakage(const LeakageArgs &args) {
    if (args.features.empty()) {
        throw usage_error{"--features is required"};
    }
    const fs::path out = prepare_out(args.out);
    const auto table = burstkit::read_feature_csv(args.features);

    // with a split, only training rows are analyzed
    std::vector<bool> eligible(table.labels.size(), true);
    if (!args.split.empty()) {
        const fs::path rows_path = fs::path{args.features}.parent_path() / "rows.csv";
        const auto rows = burstkit::read_row_index(rows_path.string());
        if (rows.size() != table.labels.size()) {
            throw burstkit::data_error{rows_path.string() + " has " + std::to_string(rows.size()) + " rows, " +
                                       args.features + " has " + std::to_string(table.labels.size())};
        }
        std::vector<std::string> names;
        for (const auto &r : rows) names.push_back(r.filename);
        const auto parts = partitions_for(names, read_split_map(args.split), args.split);
        for (std::size_t i = 0; i < parts.size(); ++i) {
            eligible[i] = parts[i] == burstkit::Partition::train;
        }
    }

    burstkit::LeakageDataset data;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < table.labels.size(); ++i) {
        if (eligible[i] && table.labels[i] != burstkit::unmonitored_label) {
            keep.push_back(i);
            data.sites.push_back(table.labels[i]);
        }
    }
    data.values = table.values.select_rows(keep);
    const std::size_t nf = data.features();
    if (nf == 0 || keep.empty()) {
        throw burstkit::data_error{args.features + " has no monitored rows or no feature columns"};
    }

    std::string mode = args.categories;
    if (mode == "auto") {
        mode = nf % burstkit::feature_kind_count == 0 ? "kinds" : "each";
    }
    std::vector<burstkit::Category> cats;
    if (mode == "kinds") {
        if (nf % burstkit::feature_kind_count != 0) {
            throw usage_error{"--categories kinds needs a multiple of 8 feature columns"};
        }
        const std::size_t b = nf / burstkit::feature_kind_count;
        for (std::size_t k = 0; k < burstkit::feature_kind_count; ++k) {
            burstkit::Category c{std::string{burstkit::to_string(burstkit::all_feature_kinds[k])}, {}};
            for (std::size_t j = 0; j < b; ++j) c.features.push_back(k * b + j);
            cats.push_back(std::move(c));
        }
    } else if (mode == "each") {
        for (std::size_t f = 0; f < nf; ++f) cats.push_back({table.column_names[f], {f}});
    } else {
        burstkit::Category all{"all", {}};
        for (std::size_t f = 0; f < nf; ++f) all.features.push_back(f);
        cats.push_back(std::move(all));
    }

    burstkit::LeakageOptions options;
    options.mc_samples = args.mc_samples;
    options.seed = args.seed;
    options.max_mi_instances = args.max_mi_instances;
    const auto report =
        burstkit::analyze_leakage(data, cats, options, args.redundancy_threshold, args.cluster_threshold);

    std::map<std::size_t, const burstkit::RedundantPair *> removed;
    for (const auto &r : report.redundancy.removed) removed[r.removed] = &r;

    std::ofstream ic{out / "individual.csv"};
    ic << "feature,name,bits,kept,duplicate_of,score\n";
    json individual = json::array();
    for (std::size_t f = 0; f < nf; ++f) {
        const auto it = removed.find(f);
        ic << f << ',' << table.column_names[f] << ',' << report.individual[f] << ',' << (it == removed.end());
        if (it != removed.end()) {
            ic << ',' << table.column_names[it->second->kept] << ',' << it->second->score;
        } else {
            ic << ",,";
        }
        ic << '\n';
        individual.push_back({{"feature", f}, {"name", table.column_names[f]}, {"bits", report.individual[f]},
                              {"kept", it == removed.end()}});
    }
    std::vector<std::size_t> ranking(nf);
    for (std::size_t f = 0; f < nf; ++f) ranking[f] = f;
    std::stable_sort(ranking.begin(), ranking.end(),
                     [&](std::size_t a, std::size_t b) { return report.individual[a] > report.individual[b]; });
    json ranked = json::array();
    for (auto f : ranking) ranked.push_back(table.column_names[f]);

    json clusters = json::array();
    for (const auto &c : report.clusters.clusters) {
        json members = json::array();
        for (auto f : c) members.push_back(table.column_names[f]);
        clusters.push_back(members);
    }
    std::ofstream cc{out / "categories.csv"};
    cc << "category,features,bits\n";
    json categories = json::array();
    for (const auto &c : report.categories) {
        cc << c.name << ',' << c.features.size() << ',' << c.bits << '\n';
        categories.push_back({{"name", c.name}, {"features", c.features.size()}, {"bits", c.bits}});
    }
    json redundant = json::array();
    for (const auto &r : report.redundancy.removed) {
        redundant.push_back(
            {{"removed", table.column_names[r.removed]}, {"kept", table.column_names[r.kept]}, {"score", r.score}});
    }
    write_json(out / "leakage.json", {{"sites", report.sites},
                                      {"instances", keep.size()},
                                      {"max_bits", std::log2(static_cast<double>(report.sites))},
                                      {"individual", individual},
                                      {"ranking", ranked},
                                      {"redundant", redundant},
                                      {"clusters", clusters},
                                      {"categories", categories}});
    write_run_config(out, "leakage",
                     {{"features", args.features}, {"split", args.split}, {"mc_samples", args.mc_samples}, {"seed", args.seed},
                      {"categories", mode}, {"redundancy_threshold", args.redundancy_threshold},
                      {"cluster_threshold", args.cluster_threshold}, {"max_mi_instances", args.max_mi_instances}});
    std::cout << report.sites << " sites, " << nf << " features, " << report.redundancy.removed.size()
              << " redundant, " << report.clusters.clusters.size() << " clusters\n";
}

void run_wt(const WtArgs &args) {
    if (!(args.threshold_ms > 0.0)) {
        throw usage_error{"--threshold-ms must be positive"};
    }
    const fs::path out = prepare_out(args.out);
    const burstkit::Corpus corpus = load(args.corpus, out);

    std::map<int, std::vector<const burstkit::CorpusEntry *>> by_site;
    for (const auto &e : corpus.entries) {
        if (e.site() != burstkit::unmonitored_label) {
            by_site[e.site()].push_back(&e);
        }
    }
    if (by_site.size() < 2) {
        throw burstkit::data_error{"pairing needs at least two labeled sites in " + args.corpus.dir};
    }
    std::vector<int> sensitive = args.sensitive;
    if (sensitive.empty()) {
        std::size_t half = by_site.size() / 2;
        for (auto it = by_site.begin(); half > 0; ++it, --half) sensitive.push_back(it->first);
    }
    const std::set<int> sensitive_set(sensitive.begin(), sensitive.end());
    std::vector<int> nonsensitive;
    for (const auto &[site, entries] : by_site) {
        if (!sensitive_set.count(site)) nonsensitive.push_back(site);
    }
    for (int s : sensitive) {
        if (!by_site.count(s)) {
            throw burstkit::data_error{"sensitive site " + std::to_string(s) + " has no traces"};
        }
    }
    std::size_t batches = args.batches;
    if (batches == 0) {
        batches = SIZE_MAX;
        for (const auto &[site, entries] : by_site) batches = std::min(batches, entries.size());
    }

    burstkit::MoldingOptions mold;
    mold.threshold = args.threshold_ms / 1000.0;
    if (args.fake_gap_ms) {
        mold.fake_burst_gap = *args.fake_gap_ms / 1000.0;
    } else {
        std::vector<burstkit::Trace> all;
        for (const auto &e : corpus.entries) all.push_back(e.trace);
        mold.fake_burst_gap = burstkit::median_inter_burst_gap(all, mold.threshold);
    }
    const auto schedule = burstkit::pair_sites(sensitive, nonsensitive, batches, args.seed);

    const fs::path defended_dir = out / "defended";
    fs::create_directories(defended_dir);
    std::ofstream manifest{defended_dir / "manifest.csv"};
    manifest << "filename,site_label,circuit_id\n";
    std::ofstream pairs{out / "pairs.csv"};
    pairs << "filename,visited,decoy,batch,reverse,source,decoy_source,perfect,overflow_bursts,dummy_packets,"
             "bandwidth,latency\n";
    std::ofstream oc{out / "overheads.csv"};
    oc << "filename,bandwidth,latency\n";

    std::map<int, std::size_t> visits;   // next trace of each site
    std::vector<burstkit::Overheads> all;
    json plans = json::array();
    std::size_t perfect = 0;
    for (const auto &p : schedule) {
        const auto &vs = by_site.at(p.visited);
        const auto &ds = by_site.at(p.decoy);
        const std::size_t n = visits[p.visited]++;
        const burstkit::CorpusEntry &real = *vs[n % vs.size()];
        const burstkit::CorpusEntry &decoy = *ds[p.instance % ds.size()];
        const auto target = burstkit::supersequence(burstkit::burst_sequence(real.trace, mold.threshold),
                                                    burstkit::burst_sequence(decoy.trace, mold.threshold));
        const auto r = burstkit::mold_trace(real.trace, target, mold);
        const auto o = burstkit::overheads(real.trace, r.defended);
        all.push_back(o);
        perfect += r.plan.perfect();

        const std::string name = std::to_string(p.visited) + "-" + std::to_string(n);
        burstkit::write_trace_file((defended_dir / name).string(), r.defended);
        manifest << name << ',' << p.visited << ',' << real.circuit() << '\n';
        pairs << name << ',' << p.visited << ',' << p.decoy << ',' << p.instance << ',' << p.reverse << ','
              << real.name << ',' << decoy.name << ',' << r.plan.perfect() << ',' << r.plan.overflow.size() << ','
              << r.plan.dummy_packets() << ',' << o.bandwidth << ',' << o.latency << '\n';
        oc << name << ',' << o.bandwidth << ',' << o.latency << '\n';
        plans.push_back({{"filename", name},
                         {"target", r.plan.target.sizes},
                         {"real_sizes", r.plan.real_sizes},
                         {"padding", r.plan.padding},
                         {"overflow", r.plan.overflow},
                         {"tail_sizes", r.plan.tail_sizes}});
    }
    write_json(out / "plans.json", plans);
    const auto s = burstkit::summarize_overheads(all);
    write_json(out / "overheads.json", {{"traces", s.traces},
                                        {"perfect", perfect},
                                        {"bandwidth_mean", s.bandwidth_mean},
                                        {"bandwidth_sd", s.bandwidth_sd},
                                        {"latency_mean", s.latency_mean},
                                        {"latency_sd", s.latency_sd}});
    json config{{"corpus", corpus_json(args.corpus)}, {"sensitive", sensitive},    {"nonsensitive", nonsensitive},
                {"batches", batches},                 {"threshold_ms", args.threshold_ms}, {"seed", args.seed}};
    config["fake_gap_ms"] = *mold.fake_burst_gap * 1000.0;
    config["fake_gap_source"] = args.fake_gap_ms ? "flag" : "corpus median";
    write_run_config(out, "wt", config);
    std::cout << s.traces << " defended traces, bandwidth x" << s.bandwidth_mean << ", latency x" << s.latency_mean
              << '\n';
}

}  // namespace cli
