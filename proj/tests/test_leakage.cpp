// test_leakage.cpp

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "burstkit/leakage.hpp"
#include "oracles.hpp"

using namespace burstkit;

namespace {

LeakageOptions fast_options(std::uint64_t seed = 1) {
    LeakageOptions o;
    o.mc_samples = 2000;
    o.seed = seed;
    return o;
}

std::vector<double> normal(std::mt19937_64 &rng, std::size_t n, double mean, double sd) {
    std::normal_distribution<double> g{mean, sd};
    std::vector<double> v(n);
    for (auto &x : v) x = g(rng);
    return v;
}

/// per-site samples drawn from `draw(site, rng)`
template <typename F>
FeatureSample make_sample(std::size_t sites, std::size_t per_site, std::uint64_t seed, F draw) {
    std::mt19937_64 rng{seed};
    FeatureSample s;
    for (std::size_t w = 0; w < sites; ++w) {
        std::vector<double> v(per_site);
        for (auto &x : v) x = draw(w, rng);
        s.per_site.push_back(std::move(v));
    }
    return s;
}

/// instances x features dataset, each feature from `draw(site, feature, rng)`
template <typename F>
LeakageDataset make_dataset(int sites, int per_site, std::size_t features, std::uint64_t seed, F draw) {
    std::mt19937_64 rng{seed};
    LeakageDataset d;
    d.values = Matrix{static_cast<std::size_t>(sites * per_site), features};
    std::size_t row = 0;
    for (int s = 0; s < sites; ++s) {
        for (int i = 0; i < per_site; ++i, ++row) {
            d.sites.push_back(s);
            for (std::size_t f = 0; f < features; ++f) {
                d.values(row, f) = draw(s, f, rng);
            }
        }
    }
    return d;
}

}  // namespace

TEST_CASE("identical site distributions leak nothing") {
    const auto s = make_sample(2, 300, 1, [](std::size_t, auto &rng) {
        return std::normal_distribution<double>{0.0, 1.0}(rng);
    });
    CHECK(individual_leakage(s, fast_options()) <= 0.05);
}

TEST_CASE("disjoint sites leak log2 N") {
    for (std::size_t n : {2u, 4u, 8u}) {
        const auto s = make_sample(n, 100, 2, [](std::size_t w, auto &rng) {
            return 10.0 * w + std::uniform_real_distribution<double>{0.0, 1.0}(rng);
        });
        const double bits = individual_leakage(s, fast_options());
        CHECK(std::abs(bits - std::log2(n)) <= 0.1);
        std::vector<std::vector<double>> table(n, std::vector<double>(n, 0.0));
        for (std::size_t w = 0; w < n; ++w) table[w][w] = 1.0;
        CHECK(std::abs(bits - oracles::discrete_leakage(table)) <= 0.1);
    }
}

TEST_CASE("pairs of sites sharing a range leak one bit of two") {
    const auto s = make_sample(4, 150, 3, [](std::size_t w, auto &rng) {
        return 10.0 * (w / 2) + std::uniform_real_distribution<double>{0.0, 1.0}(rng);
    });
    const std::vector<std::vector<double>> table{{1, 0}, {1, 0}, {0, 1}, {0, 1}};
    CHECK(std::abs(individual_leakage(s, fast_options()) - oracles::discrete_leakage(table)) <= 0.1);
}

TEST_CASE("overlapping gaussians match the quadrature oracle") {
    for (double gap : {0.5, 1.0, 2.0}) {
        const std::vector<double> means{0.0, gap, 2 * gap};
        const auto s = make_sample(3, 600, 4, [&](std::size_t w, auto &rng) {
            return std::normal_distribution<double>{means[w], 1.0}(rng);
        });
        LeakageOptions o = fast_options();
        o.mc_samples = 6000;
        // kernel smoothing widens each site density, so the estimate
        // runs a few hundredths of a bit low
        const double want = oracles::gaussian_sites_leakage(means, 1.0);
        const double got = individual_leakage(s, o);
        CHECK(got <= want + 0.02);
        CHECK(got >= want - 0.1);
    }
}

TEST_CASE("estimates stay in range and are seeded") {
    std::mt19937_64 rng{5};
    std::uniform_real_distribution<double> u{0.0, 3.0};
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 2 + trial % 5;
        std::vector<double> centers(n);
        for (auto &c : centers) c = u(rng);
        const auto s = make_sample(n, 40, 100 + trial, [&](std::size_t w, auto &r) {
            return std::normal_distribution<double>{centers[w], 0.5}(r);
        });
        const double a = individual_leakage(s, fast_options(trial));
        CHECK(a >= 0.0);
        CHECK(a <= std::log2(n) + 0.05);
        CHECK(a == individual_leakage(s, fast_options(trial)));
    }
}

TEST_CASE("leakage input validation") {
    FeatureSample one_site{{{1, 2, 3}}};
    CHECK_THROWS_AS(individual_leakage(one_site), std::invalid_argument);
    FeatureSample thin{{{1, 2, 3}, {4}}};
    CHECK_THROWS_AS(individual_leakage(thin), std::invalid_argument);
    FeatureSample ok{{{1, 2, 3}, {4, 5}}};
    LeakageOptions zero;
    zero.mc_samples = 0;
    CHECK_THROWS_AS(individual_leakage(ok, zero), std::invalid_argument);
}

TEST_CASE("constant feature per site") {
    // degenerate densities: separable constants leak everything, equal constants nothing
    FeatureSample sep{{{1, 1, 1}, {2, 2, 2}}};
    CHECK(individual_leakage(sep, fast_options()) == doctest::Approx(1.0).epsilon(1e-6));
    FeatureSample same{{{1, 1, 1}, {1, 1, 1}}};
    CHECK(individual_leakage(same, fast_options()) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("dataset helpers and per-feature streams") {
    const auto d = make_dataset(3, 20, 4, 6, [](int s, std::size_t f, auto &rng) {
        return std::normal_distribution<double>{s * (f + 1) * 0.5, 1.0}(rng);
    });
    CHECK(d.features() == 4);
    CHECK(d.feature_sample(2).per_site.size() == 3);
    CHECK(d.feature_sample(2).per_site[1].size() == 20);
    CHECK(d.column(1).size() == 60);
    const auto opts = fast_options(9);
    const auto all = individual_leakages(d, opts);
    REQUIRE(all.size() == 4);
    // leakage grows with the site separation
    CHECK(all[0] < all[3]);
    FeatureClusters none;
    for (std::size_t f = 0; f < 4; ++f) {
        const std::vector<std::size_t> cat{f};
        CHECK(joint_leakage(d, cat, none, opts) == all[f]);
    }
}

TEST_CASE("redundancy: copies score one, independent features zero") {
    std::mt19937_64 rng{7};
    const auto a = normal(rng, 200, 0.0, 1.0);
    const auto b = normal(rng, 200, 0.0, 1.0);
    std::vector<double> affine(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) affine[i] = 3.0 * a[i] - 2.0;
    const auto opts = fast_options();
    CHECK(pairwise_mi(a, a, opts) >= 0.9);
    CHECK(pairwise_mi(a, affine, opts) >= 0.9);
    CHECK(pairwise_mi(a, b, opts) <= 0.1);
    CHECK_THROWS_AS(pairwise_mi(a, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST_CASE("redundancy decreases as noise is added") {
    std::mt19937_64 rng{8};
    const auto a = normal(rng, 300, 0.0, 1.0);
    const auto z = normal(rng, 300, 0.0, 1.0);
    double previous = 1.1;
    for (double sigma : {0.0, 0.3, 1.0, 3.0, 10.0}) {
        std::vector<double> b(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) b[i] = a[i] + sigma * z[i];
        const double s = pairwise_mi(a, b, fast_options());
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
        CHECK(s < previous + 0.02);
        previous = s;
    }
    CHECK(previous <= 0.15);
}

TEST_CASE("redundancy matrix shape and agreement with pairwise") {
    std::mt19937_64 rng{10};
    Matrix cols{150, 4};
    for (std::size_t i = 0; i < 150; ++i) {
        const double x = std::normal_distribution<double>{}(rng);
        cols(i, 0) = x;
        cols(i, 1) = std::normal_distribution<double>{}(rng);
        cols(i, 2) = x + 0.5 * std::normal_distribution<double>{}(rng);
        cols(i, 3) = -x;
    }
    const auto opts = fast_options();
    const Matrix s = redundancy_matrix(cols, opts);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(s(i, i) == 1.0);
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(s(i, j) == s(j, i));
        }
    }
    CHECK(s(0, 3) >= 0.9);
    CHECK(s(0, 1) <= 0.1);
    CHECK(s(0, 2) > s(0, 1));
    CHECK(s(0, 2) < s(0, 3));
    std::vector<double> c0(150);
    std::vector<double> c2(150);
    for (std::size_t i = 0; i < 150; ++i) {
        c0[i] = cols(i, 0);
        c2[i] = cols(i, 2);
    }
    Matrix pair{150, 2};
    for (std::size_t i = 0; i < 150; ++i) {
        pair(i, 0) = c0[i];
        pair(i, 1) = c2[i];
    }
    CHECK(pairwise_mi(c0, c2, opts) == redundancy_matrix(pair, opts)(0, 1));
    CHECK_THROWS_AS(redundancy_matrix(Matrix{1, 3}, opts), std::invalid_argument);
}

TEST_CASE("redundancy subsampling keeps the scores meaningful") {
    std::mt19937_64 rng{11};
    Matrix cols{600, 2};
    for (std::size_t i = 0; i < 600; ++i) {
        cols(i, 0) = std::normal_distribution<double>{}(rng);
        cols(i, 1) = 2 * cols(i, 0);
    }
    LeakageOptions o = fast_options();
    o.max_mi_instances = 100;
    CHECK(redundancy_matrix(cols, o)(0, 1) >= 0.9);
}

TEST_CASE("redundancy filter is greedy in index order") {
    Matrix s{4, 4, {1.0, 0.95, 0.2, 0.91,   //
                    0.95, 1.0, 0.93, 0.1,   //
                    0.2, 0.93, 1.0, 0.5,    //
                    0.91, 0.1, 0.5, 1.0}};
    const auto r = redundancy_filter(s);
    // 1 duplicates 0; 2 only duplicates the removed 1, so it stays; 3 duplicates 0
    CHECK(r.kept == std::vector<std::size_t>{0, 2});
    REQUIRE(r.removed.size() == 2);
    CHECK(r.removed[0].removed == 1);
    CHECK(r.removed[0].kept == 0);
    CHECK(r.removed[1].removed == 3);
    CHECK(r.removed[1].score == 0.91);
    CHECK_THROWS_AS(redundancy_filter(Matrix{2, 3}), std::invalid_argument);
}

TEST_CASE("single-linkage clustering") {
    Matrix s{5, 5};
    for (std::size_t i = 0; i < 5; ++i) s(i, i) = 1.0;
    auto link = [&](std::size_t a, std::size_t b, double v) { s(a, b) = s(b, a) = v; };
    link(0, 2, 0.5);
    link(2, 4, 0.45);   // 0 and 4 join through 2
    link(0, 4, 0.1);
    link(1, 3, 0.39);   // just below the threshold
    const std::vector<std::size_t> all{0, 1, 2, 3, 4};
    const auto c = cluster_features(s, all);
    REQUIRE(c.clusters.size() == 1);
    CHECK(c.clusters[0] == std::vector<std::size_t>{0, 2, 4});
    CHECK(c.independent == std::vector<std::size_t>{1, 3});
    const std::vector<std::size_t> subset{0, 4};
    CHECK(cluster_features(s, subset).clusters.empty());
}

TEST_CASE("reduce_cluster keeps the most leaky members") {
    const std::vector<std::size_t> cluster{1, 4, 6, 7};
    const std::vector<double> leak{0, 0.5, 0, 0, 2.0, 0, 0.1, 1.0};
    CHECK(reduce_cluster(cluster, leak, 2) == std::vector<std::size_t>{4, 7});
    CHECK(reduce_cluster(cluster, leak, 9) == cluster);
}

TEST_CASE("joint leakage of complementary partitions") {
    // feature 0 separates {0,1} from {2,3}; feature 1 separates {0,2} from {1,3}
    const auto d = make_dataset(4, 60, 2, 12, [](int s, std::size_t f, auto &rng) {
        const int bit = f == 0 ? s / 2 : s % 2;
        return 10.0 * bit + std::uniform_real_distribution<double>{0.0, 1.0}(rng);
    });
    const auto opts = fast_options();
    const auto single = individual_leakages(d, opts);
    CHECK(std::abs(single[0] - 1.0) <= 0.1);
    CHECK(std::abs(single[1] - 1.0) <= 0.1);
    const std::vector<std::size_t> both{0, 1};
    CHECK(std::abs(joint_leakage(d, both, {}, opts) - 2.0) <= 0.1);
    FeatureClusters together{{{0, 1}}, {}};
    CHECK(std::abs(joint_leakage(d, both, together, opts) - 2.0) <= 0.1);
}

TEST_CASE("joint leakage of a feature and its copy") {
    const auto d = make_dataset(4, 60, 2, 13, [](int s, std::size_t, auto &rng) {
        return 10.0 * (s / 2) + std::uniform_real_distribution<double>{0.0, 1.0}(rng);
    });
    // columns are drawn independently; overwrite the second with the first
    LeakageDataset copy = d;
    for (std::size_t i = 0; i < copy.values.rows(); ++i) copy.values(i, 1) = copy.values(i, 0);
    FeatureClusters together{{{0, 1}}, {}};
    const std::vector<std::size_t> both{0, 1};
    CHECK(std::abs(joint_leakage(copy, both, together, fast_options()) - 1.0) <= 0.1);
}

TEST_CASE("joint leakage validation") {
    const auto d = make_dataset(2, 10, 10, 14, [](int s, std::size_t f, auto &rng) {
        return s + 0.1 * f + std::normal_distribution<double>{}(rng);
    });
    LeakageOptions o = fast_options();
    o.max_cluster_dims = 3;
    FeatureClusters big{{{0, 1, 2, 3}}, {}};
    const std::vector<std::size_t> cat{0, 1, 2, 3};
    CHECK_THROWS_AS(joint_leakage(d, cat, big, o), std::invalid_argument);
    const std::vector<std::size_t> three{0, 1, 2};
    CHECK_NOTHROW(joint_leakage(d, three, big, o));
    CHECK_THROWS_AS(joint_leakage(d, std::vector<std::size_t>{}, big, o), std::invalid_argument);
    CHECK_THROWS_AS(joint_leakage(d, std::vector<std::size_t>{42}, big, o), std::out_of_range);
}

TEST_CASE("planted duplicates are removed and planted groups clustered") {
    // 24 base features, 6 exact or affine duplicates appended
    const std::size_t base = 24;
    const std::size_t dupes = 6;
    auto d = make_dataset(6, 20, base + dupes, 15, [](int s, std::size_t f, auto &rng) {
        return 0.2 * s * static_cast<double>(f % 3) + std::normal_distribution<double>{}(rng);
    });
    for (std::size_t j = 0; j < dupes; ++j) {
        const std::size_t src = 3 * j + 1;
        for (std::size_t i = 0; i < d.values.rows(); ++i) {
            d.values(i, base + j) = j % 2 ? d.values(i, src) : 0.5 * d.values(i, src) + 4.0;
        }
    }
    const auto opts = fast_options();
    const Matrix s = redundancy_matrix(d.values, opts);
    const auto r = redundancy_filter(s);
    REQUIRE(r.removed.size() == dupes);
    for (std::size_t j = 0; j < dupes; ++j) {
        CHECK(r.removed[j].removed == base + j);
        CHECK(r.removed[j].kept == 3 * j + 1);
    }
}

TEST_CASE("analyze_leakage end to end") {
    auto d = make_dataset(4, 30, 6, 16, [](int s, std::size_t f, auto &rng) {
        return (f < 3 ? 2.0 * s : 0.0) + std::normal_distribution<double>{}(rng);
    });
    for (std::size_t i = 0; i < d.values.rows(); ++i) d.values(i, 5) = d.values(i, 0);
    const std::vector<Category> cats{{"leaky", {0, 1, 2}}, {"noise", {3, 4}}, {"copy", {5}}};
    const auto report = analyze_leakage(d, cats, fast_options());
    CHECK(report.sites == 4);
    CHECK(report.individual.size() == 6);
    REQUIRE(report.categories.size() == 3);
    CHECK(report.categories[0].bits > 1.0);
    CHECK(report.categories[0].bits <= 2.0 + 1e-12);
    CHECK(report.categories[1].bits < 0.3);
    // feature 5 duplicates feature 0 and is filtered out
    CHECK(report.categories[2].features.empty());
    CHECK(report.categories[2].bits == 0.0);
    for (double b : report.individual) {
        CHECK(b >= 0.0);
        CHECK(b <= 2.0 + 0.05);
    }
}
