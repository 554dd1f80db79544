// leakage.cpp

#include "burstkit/leakage.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

#include "burstkit/kde.hpp"

namespace burstkit {

namespace {

// stream tags; every estimator owns its stream regardless of schedule
enum : std::uint64_t {
    tag_leakage = 1,
    tag_mi_index = 2,
    tag_mi_noise = 3,
    tag_mi_self_noise = 4,
    tag_mi_subsample = 5,
};

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(tag),  static_cast<std::uint32_t>(tag >> 32),
                      static_cast<std::uint32_t>(id),   static_cast<std::uint32_t>(id >> 32)};
    return std::mt19937_64{seq};
}

/// one site's density over a feature vector: independent groups of
/// coordinates, each a product-kernel KDE
struct SiteModel {
    std::vector<Kde> groups;
};

struct GroupLayout {
    std::vector<std::vector<std::size_t>> positions;   /// vector coordinates of each group
    std::size_t dims = 0;
};

double conditional_entropy_leakage(const std::vector<SiteModel> &sites, const GroupLayout &layout, std::size_t mc,
                                   std::mt19937_64 &rng) {
    const std::size_t n_sites = sites.size();
    const double max_bits = std::log2(static_cast<double>(n_sites));
    if (mc == 0) {
        throw std::invalid_argument{"mc_samples must be positive"};
    }
    std::vector<double> x(layout.dims);
    std::vector<double> part;
    std::vector<double> logp(n_sites);
    double entropy_sum = 0.0;
    for (std::size_t m = 0; m < mc; ++m) {
        const std::size_t w = m % n_sites;
        for (std::size_t g = 0; g < layout.positions.size(); ++g) {
            const auto &pos = layout.positions[g];
            part.resize(pos.size());
            sites[w].groups[g].sample(rng, part);
            for (std::size_t j = 0; j < pos.size(); ++j) {
                x[pos[j]] = part[j];
            }
        }
        double max_lp = -INFINITY;
        for (std::size_t s = 0; s < n_sites; ++s) {
            double lp = 0.0;
            for (std::size_t g = 0; g < layout.positions.size(); ++g) {
                const auto &pos = layout.positions[g];
                part.resize(pos.size());
                for (std::size_t j = 0; j < pos.size(); ++j) {
                    part[j] = x[pos[j]];
                }
                lp += sites[s].groups[g].log_pdf(part);
            }
            logp[s] = lp;
            max_lp = std::max(max_lp, lp);
        }
        double z = 0.0;
        for (double lp : logp) {
            z += std::exp(lp - max_lp);
        }
        double h = 0.0;
        for (double lp : logp) {
            const double p = std::exp(lp - max_lp) / z;
            if (p > 0.0) {
                h -= p * std::log2(p);
            }
        }
        entropy_sum += h;
    }
    const double leak = max_bits - entropy_sum / static_cast<double>(mc);
    return std::clamp(leak, 0.0, max_bits);
}

void check_sample(const FeatureSample &sample) {
    if (sample.per_site.size() < 2) {
        throw std::invalid_argument{"leakage needs at least 2 sites"};
    }
    for (const auto &s : sample.per_site) {
        if (s.size() < 2) {
            throw std::invalid_argument{"every site needs at least 2 samples"};
        }
    }
}

double leakage_of_sample(const FeatureSample &sample, const LeakageOptions &options, std::uint64_t stream_id) {
    check_sample(sample);
    std::vector<SiteModel> sites;
    for (const auto &values : sample.per_site) {
        sites.push_back({{Kde::fit_1d(values, options.bandwidth_floor)}});
    }
    GroupLayout layout{{{0}}, 1};
    auto rng = make_stream(options.seed, tag_leakage, stream_id);
    return conditional_entropy_leakage(sites, layout, options.mc_samples, rng);
}

/// site label -> instance rows, ascending label
std::map<int, std::vector<std::size_t>> rows_by_site(const LeakageDataset &data) {
    if (data.sites.size() != data.values.rows()) {
        throw std::invalid_argument{"site labels do not match dataset rows"};
    }
    std::map<int, std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < data.sites.size(); ++i) {
        out[data.sites[i]].push_back(i);
    }
    return out;
}

}  // namespace

FeatureSample LeakageDataset::feature_sample(std::size_t feature) const {
    FeatureSample s;
    for (const auto &[site, rows] : rows_by_site(*this)) {
        std::vector<double> v;
        for (auto r : rows) {
            v.push_back(values(r, feature));
        }
        s.per_site.push_back(std::move(v));
    }
    return s;
}

std::vector<double> LeakageDataset::column(std::size_t feature) const {
    std::vector<double> v(values.rows());
    for (std::size_t r = 0; r < values.rows(); ++r) {
        v[r] = values(r, feature);
    }
    return v;
}

double individual_leakage(const FeatureSample &sample, const LeakageOptions &options) {
    return leakage_of_sample(sample, options, 0);
}

std::vector<double> individual_leakages_serial(const LeakageDataset &data, const LeakageOptions &options) {
    std::vector<double> out(data.features());
    for (std::size_t f = 0; f < data.features(); ++f) {
        out[f] = leakage_of_sample(data.feature_sample(f), options, f);
    }
    return out;
}

std::vector<double> individual_leakages(const LeakageDataset &data, const LeakageOptions &options) {
    const std::size_t nf = data.features();
    std::vector<FeatureSample> samples;
    samples.reserve(nf);
    for (std::size_t f = 0; f < nf; ++f) {
        samples.push_back(data.feature_sample(f));
        check_sample(samples.back());
    }
    std::vector<double> out(nf);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t f = 0; f < static_cast<std::ptrdiff_t>(nf); ++f) {
        const auto fi = static_cast<std::size_t>(f);
        out[fi] = leakage_of_sample(samples[fi], options, fi);
    }
    return out;
}

// ---------------------------------------------------------------------------
// redundancy

namespace {

/// Monte Carlo design shared by every feature: draw m jitters the point
/// of instance index[m] by bandwidth * noise[f][m] in feature f
struct MiDraws {
    std::size_t n = 0;                        /// instances
    std::size_t features = 0;
    std::size_t mc = 0;
    std::vector<double> values;               /// features x n
    std::vector<double> bandwidth;            /// per feature
    std::vector<std::uint32_t> index;         /// mc
    std::vector<double> noise;                /// features x mc
    std::vector<double> self_noise;           /// features x mc

    double value(std::size_t f, std::size_t i) const { return values[f * n + i]; }
    double point(std::size_t f, std::size_t m, bool self) const {
        const auto &z = self ? self_noise : noise;
        return value(f, index[m]) + bandwidth[f] * z[f * mc + m];
    }
};

MiDraws make_draws(const Matrix &columns_by_instance, const LeakageOptions &options) {
    if (options.mc_samples == 0) {
        throw std::invalid_argument{"mc_samples must be positive"};
    }
    std::size_t n = columns_by_instance.rows();
    if (n < 2) {
        throw std::invalid_argument{"redundancy needs at least 2 paired instances"};
    }
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), 0);
    if (options.max_mi_instances > 0 && n > options.max_mi_instances) {
        auto rng = make_stream(options.seed, tag_mi_subsample, 0);
        std::shuffle(rows.begin(), rows.end(), rng);
        rows.resize(options.max_mi_instances);
        std::sort(rows.begin(), rows.end());
        n = rows.size();
    }
    MiDraws d;
    d.n = n;
    d.features = columns_by_instance.cols();
    d.mc = options.mc_samples;
    d.values.resize(d.features * n);
    for (std::size_t f = 0; f < d.features; ++f) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) {
            col[i] = columns_by_instance(rows[i], f);
            d.values[f * n + i] = col[i];
        }
        d.bandwidth.push_back(silverman_bandwidth(robust_scale(col), n, 2, options.bandwidth_floor));
    }
    {
        auto rng = make_stream(options.seed, tag_mi_index, 0);
        std::uniform_int_distribution<std::uint32_t> pick{0, static_cast<std::uint32_t>(n - 1)};
        d.index.resize(d.mc);
        for (auto &i : d.index) {
            i = pick(rng);
        }
    }
    d.noise.resize(d.features * d.mc);
    d.self_noise.resize(d.features * d.mc);
    for (std::size_t f = 0; f < d.features; ++f) {
        auto rng = make_stream(options.seed, tag_mi_noise, f);
        auto rng_self = make_stream(options.seed, tag_mi_self_noise, f);
        std::normal_distribution<double> normal{0.0, 1.0};
        for (std::size_t m = 0; m < d.mc; ++m) {
            d.noise[f * d.mc + m] = normal(rng);
        }
        for (std::size_t m = 0; m < d.mc; ++m) {
            d.self_noise[f * d.mc + m] = normal(rng_self);
        }
    }
    return d;
}

double normalized_score(double mi, double self_a, double self_b) {
    const double denom = std::min(self_a, self_b);
    if (!(denom > 1e-9)) {
        return 0.0;
    }
    return std::clamp(mi / denom, 0.0, 1.0);
}

Matrix scores_from(const std::vector<double> &mi, const std::vector<double> &self, std::size_t nf) {
    Matrix scores{nf, nf};
    for (std::size_t a = 0; a < nf; ++a) {
        scores(a, a) = 1.0;
        for (std::size_t b = a + 1; b < nf; ++b) {
            const double s = normalized_score(mi[a * nf + b], self[a], self[b]);
            scores(a, b) = s;
            scores(b, a) = s;
        }
    }
    return scores;
}

/// kernel of feature f at draw m against every instance
void kernel_row(const MiDraws &d, std::size_t f, std::size_t m, bool self, double *out) {
    const double x = d.point(f, m, self);
    const double inv = 1.0 / d.bandwidth[f];
    for (std::size_t i = 0; i < d.n; ++i) {
        const double u = (x - d.value(f, i)) * inv;
        out[i] = std::exp(-0.5 * u * u);
    }
}

}  // namespace

Matrix redundancy_matrix_serial(const Matrix &columns_by_instance, const LeakageOptions &options) {
    const MiDraws d = make_draws(columns_by_instance, options);
    const std::size_t nf = d.features;
    const double log_n = std::log(static_cast<double>(d.n));
    std::vector<double> ka(d.n);
    std::vector<double> kb(d.n);

    // I(A;B) = E_m log( n sum_i K_A K_B / (sum_i K_A * sum_i K_B) ), nats
    auto mutual = [&](std::size_t a, bool a_self, std::size_t b, bool b_self) {
        double acc = 0.0;
        for (std::size_t m = 0; m < d.mc; ++m) {
            kernel_row(d, a, m, a_self, ka.data());
            kernel_row(d, b, m, b_self, kb.data());
            double joint = 0.0;
            double sa = 0.0;
            double sb = 0.0;
            for (std::size_t i = 0; i < d.n; ++i) {
                joint += ka[i] * kb[i];
                sa += ka[i];
                sb += kb[i];
            }
            acc += log_n + std::log(joint) - std::log(sa) - std::log(sb);
        }
        return acc / static_cast<double>(d.mc);
    };

    std::vector<double> self(nf);
    for (std::size_t f = 0; f < nf; ++f) {
        self[f] = mutual(f, false, f, true);
    }
    std::vector<double> mi(nf * nf, 0.0);
    for (std::size_t a = 0; a < nf; ++a) {
        for (std::size_t b = a + 1; b < nf; ++b) {
            mi[a * nf + b] = mutual(a, false, b, false);
        }
    }
    return scores_from(mi, self, nf);
}

Matrix redundancy_matrix(const Matrix &columns_by_instance, const LeakageOptions &options) {
    const MiDraws d = make_draws(columns_by_instance, options);
    const std::size_t nf = d.features;
    const std::size_t n = d.n;
    const double log_n = std::log(static_cast<double>(n));

    // Draws are processed in chunks; within a chunk each feature's
    // kernel rows are stored once, so a pair costs one dot product per
    // draw.  Products of up to 8 dot values are folded into one log.
    const std::size_t chunk = std::max<std::size_t>(8, std::min<std::size_t>(512, (std::size_t{1} << 24) / std::max<std::size_t>(1, nf * n)));
    std::vector<float> kernels(nf * chunk * n);
    std::vector<double> log_sums(nf, 0.0);   /// sum_m log sum_i K_f
    std::vector<double> self_acc(nf, 0.0);
    std::vector<double> pair_log(nf * nf, 0.0);

    for (std::size_t m0 = 0; m0 < d.mc; m0 += chunk) {
        const std::size_t c = std::min(chunk, d.mc - m0);

#pragma omp parallel
        {
            std::vector<double> row(n);
            std::vector<double> row_self(n);
#pragma omp for schedule(static)
            for (std::ptrdiff_t fs = 0; fs < static_cast<std::ptrdiff_t>(nf); ++fs) {
                const auto f = static_cast<std::size_t>(fs);
                for (std::size_t mm = 0; mm < c; ++mm) {
                    kernel_row(d, f, m0 + mm, false, row.data());
                    kernel_row(d, f, m0 + mm, true, row_self.data());
                    double s = 0.0;
                    double s_self = 0.0;
                    double joint = 0.0;
                    float *dst = &kernels[(f * chunk + mm) * n];
                    for (std::size_t i = 0; i < n; ++i) {
                        s += row[i];
                        s_self += row_self[i];
                        joint += row[i] * row_self[i];
                        dst[i] = static_cast<float>(row[i]);
                    }
                    log_sums[f] += std::log(s);
                    self_acc[f] += log_n + std::log(joint) - std::log(s) - std::log(s_self);
                }
            }

#pragma omp for schedule(dynamic, 1)
            for (std::ptrdiff_t as = 0; as < static_cast<std::ptrdiff_t>(nf); ++as) {
                const auto a = static_cast<std::size_t>(as);
                for (std::size_t b = a + 1; b < nf; ++b) {
                    double acc = 0.0;
                    double prod = 1.0;
                    int folded = 0;
                    for (std::size_t mm = 0; mm < c; ++mm) {
                        const float *ka = &kernels[(a * chunk + mm) * n];
                        const float *kb = &kernels[(b * chunk + mm) * n];
                        float dot = 0.0f;
#pragma omp simd reduction(+ : dot)
                        for (std::size_t i = 0; i < n; ++i) {
                            dot += ka[i] * kb[i];
                        }
                        prod *= static_cast<double>(dot);
                        if (++folded == 8) {
                            acc += std::log(prod);
                            prod = 1.0;
                            folded = 0;
                        }
                    }
                    acc += std::log(prod);
                    pair_log[a * nf + b] += acc;
                }
            }
        }
    }

    const double mc = static_cast<double>(d.mc);
    std::vector<double> self(nf);
    for (std::size_t f = 0; f < nf; ++f) {
        self[f] = self_acc[f] / mc;
    }
    std::vector<double> mi(nf * nf, 0.0);
    for (std::size_t a = 0; a < nf; ++a) {
        for (std::size_t b = a + 1; b < nf; ++b) {
            mi[a * nf + b] = log_n + (pair_log[a * nf + b] - log_sums[a] - log_sums[b]) / mc;
        }
    }
    return scores_from(mi, self, nf);
}

double pairwise_mi(std::span<const double> a, std::span<const double> b, const LeakageOptions &options) {
    if (a.size() != b.size()) {
        throw std::invalid_argument{"pairwise_mi needs paired samples of equal length"};
    }
    Matrix cols{a.size(), 2};
    for (std::size_t i = 0; i < a.size(); ++i) {
        cols(i, 0) = a[i];
        cols(i, 1) = b[i];
    }
    return redundancy_matrix(cols, options)(0, 1);
}

RedundancyResult redundancy_filter(const Matrix &scores, double threshold) {
    if (scores.rows() != scores.cols()) {
        throw std::invalid_argument{"score matrix must be square"};
    }
    RedundancyResult r;
    for (std::size_t f = 0; f < scores.rows(); ++f) {
        bool redundant = false;
        for (std::size_t k : r.kept) {
            if (scores(f, k) >= threshold) {
                r.removed.push_back({f, k, scores(f, k)});
                redundant = true;
                break;
            }
        }
        if (!redundant) {
            r.kept.push_back(f);
        }
    }
    return r;
}

FeatureClusters cluster_features(const Matrix &scores, std::span<const std::size_t> features, double threshold) {
    const std::size_t n = features.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (scores(features[i], features[j]) >= threshold) {
                const auto ri = find(i);
                const auto rj = find(j);
                if (ri != rj) {
                    parent[std::max(ri, rj)] = std::min(ri, rj);
                }
            }
        }
    }
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) {
        groups[find(i)].push_back(features[i]);
    }
    FeatureClusters out;
    for (auto &[root, members] : groups) {
        if (members.size() >= 2) {
            out.clusters.push_back(std::move(members));
        } else {
            out.independent.push_back(members[0]);
        }
    }
    std::sort(out.clusters.begin(), out.clusters.end(),
              [](const auto &x, const auto &y) { return *std::min_element(x.begin(), x.end()) < *std::min_element(y.begin(), y.end()); });
    std::sort(out.independent.begin(), out.independent.end());
    return out;
}

std::vector<std::size_t> reduce_cluster(std::span<const std::size_t> cluster, std::span<const double> leakage,
                                        std::size_t cap) {
    std::vector<std::size_t> members(cluster.begin(), cluster.end());
    std::stable_sort(members.begin(), members.end(),
                     [&](std::size_t a, std::size_t b) { return leakage[a] > leakage[b]; });
    if (members.size() > cap) {
        members.resize(cap);
    }
    std::sort(members.begin(), members.end());
    return members;
}

double joint_leakage(const LeakageDataset &data, std::span<const std::size_t> category,
                     const FeatureClusters &clusters, const LeakageOptions &options) {
    if (category.empty()) {
        throw std::invalid_argument{"joint leakage of an empty category"};
    }
    // coordinate of each category feature in the joint vector
    std::map<std::size_t, std::size_t> position;
    for (std::size_t j = 0; j < category.size(); ++j) {
        if (category[j] >= data.features()) {
            throw std::out_of_range{"category feature index out of range"};
        }
        position.emplace(category[j], position.size());
    }

    std::vector<std::vector<std::size_t>> groups;   // feature ids
    std::map<std::size_t, bool> grouped;
    for (const auto &cluster : clusters.clusters) {
        std::vector<std::size_t> members;
        for (auto f : cluster) {
            if (position.count(f) && !grouped[f]) {
                members.push_back(f);
                grouped[f] = true;
            }
        }
        if (members.size() > options.max_cluster_dims) {
            throw std::invalid_argument{"cluster of " + std::to_string(members.size()) +
                                        " features exceeds the joint density cap of " +
                                        std::to_string(options.max_cluster_dims) +
                                        "; reduce it (reduce_cluster) before joint estimation"};
        }
        if (!members.empty()) {
            groups.push_back(std::move(members));
        }
    }
    for (const auto &[f, pos] : position) {
        if (!grouped[f]) {
            groups.push_back({f});
        }
    }

    GroupLayout layout;
    layout.dims = position.size();
    for (const auto &g : groups) {
        std::vector<std::size_t> pos;
        for (auto f : g) {
            pos.push_back(position.at(f));
        }
        layout.positions.push_back(std::move(pos));
    }

    const auto by_site = rows_by_site(data);
    if (by_site.size() < 2) {
        throw std::invalid_argument{"leakage needs at least 2 sites"};
    }
    std::vector<SiteModel> sites;
    for (const auto &[site, rows] : by_site) {
        if (rows.size() < 2) {
            throw std::invalid_argument{"every site needs at least 2 samples"};
        }
        SiteModel model;
        for (const auto &g : groups) {
            std::vector<std::vector<double>> cols;
            for (auto f : g) {
                std::vector<double> col;
                for (auto r : rows) {
                    col.push_back(data.values(r, f));
                }
                cols.push_back(std::move(col));
            }
            model.groups.push_back(Kde::fit(cols, options.bandwidth_floor));
        }
        sites.push_back(std::move(model));
    }
    auto rng = make_stream(options.seed, tag_leakage, category[0]);
    return conditional_entropy_leakage(sites, layout, options.mc_samples, rng);
}

LeakageReport analyze_leakage(const LeakageDataset &data, std::span<const Category> categories,
                              const LeakageOptions &options, double redundancy_threshold, double cluster_threshold) {
    LeakageReport report;
    report.sites = rows_by_site(data).size();
    report.individual = individual_leakages(data, options);
    const Matrix scores = redundancy_matrix(data.values, options);
    report.redundancy = redundancy_filter(scores, redundancy_threshold);
    report.clusters = cluster_features(scores, report.redundancy.kept, cluster_threshold);
    std::vector<bool> usable(data.features(), false);
    for (auto f : report.redundancy.kept) {
        usable[f] = true;
    }
    for (auto &cluster : report.clusters.clusters) {
        if (cluster.size() > options.max_cluster_dims) {
            // members dropped by the cap are not modeled at all
            auto reduced = reduce_cluster(cluster, report.individual, options.max_cluster_dims);
            for (auto f : cluster) {
                usable[f] = std::find(reduced.begin(), reduced.end(), f) != reduced.end();
            }
            cluster = std::move(reduced);
        }
    }
    for (const auto &cat : categories) {
        CategoryLeakage cl{cat.name, {}, 0.0};
        for (auto f : cat.features) {
            if (f < usable.size() && usable[f]) {
                cl.features.push_back(f);
            }
        }
        if (!cl.features.empty()) {
            cl.bits = joint_leakage(data, cl.features, report.clusters, options);
        }
        report.categories.push_back(std::move(cl));
    }
    return report;
}

}  // namespace burstkit
