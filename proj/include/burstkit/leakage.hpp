// leakage.hpp
//
// Information leakage of features about the visited site.
//
// Leakage of a feature F is I(F;W) = H(W) - E_f[H(W|f)] under a
// uniform prior over the N sites, so H(W) = log2 N.  Each site's
// distribution of F is a Gaussian KDE; the expectation is a Monte Carlo
// average over points drawn from the equal-weight mixture of the site
// densities.
//
// Redundancy between two features is their mutual information, pooled
// over all instances and estimated with a 2-d product-kernel KDE,
// divided by the smaller of the two features' self-information I(A;A')
// (the information a noise-independent copy shares with A under the
// same smoothing).  Copies score ~1 and independent features ~0.
//
// Features whose redundancy with an earlier kept feature reaches the
// redundancy threshold are dropped; the rest are grouped by single
// linkage at the clustering threshold.  A category's joint leakage
// models every cluster with a multivariate KDE and every other feature
// as independent.

#ifndef BURSTKIT_LEAKAGE_HPP
#define BURSTKIT_LEAKAGE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "burstkit/matrix.hpp"

namespace burstkit {

struct LeakageOptions {
    std::size_t mc_samples = 5000;
    std::uint64_t seed = 0;
    double bandwidth_floor = 1e-6;
    std::size_t max_cluster_dims = 8;
    /// instances used for pairwise redundancy (0 = all); larger inputs
    /// are subsampled with the seed
    std::size_t max_mi_instances = 1000;
};

inline constexpr double default_redundancy_threshold = 0.90;
inline constexpr double default_cluster_threshold = 0.40;

/// one feature's values grouped by site; every site needs >= 2 values
struct FeatureSample {
    std::vector<std::vector<double>> per_site;
};

/// instances x features table with one site label per instance
struct LeakageDataset {
    std::vector<int> sites;   /// per instance
    Matrix values;            /// instances x features

    std::size_t features() const noexcept { return values.cols(); }
    FeatureSample feature_sample(std::size_t feature) const;
    std::vector<double> column(std::size_t feature) const;
};

/// bits; throws std::invalid_argument with fewer than 2 sites or a site
/// with fewer than 2 samples
double individual_leakage(const FeatureSample &sample, const LeakageOptions &options = {});

/// per-feature leakage; feature f draws from the stream (seed, f)
std::vector<double> individual_leakages(const LeakageDataset &data, const LeakageOptions &options = {});
std::vector<double> individual_leakages_serial(const LeakageDataset &data, const LeakageOptions &options = {});

/// redundancy score in [0,1] of two paired sample lists
double pairwise_mi(std::span<const double> a, std::span<const double> b, const LeakageOptions &options = {});

/// symmetric features x features redundancy scores; each column is one
/// feature's values over the same instances.  Entry (i,j) of a
/// two-column matrix equals pairwise_mi(column 0, column 1).
Matrix redundancy_matrix(const Matrix &columns_by_instance, const LeakageOptions &options = {});
Matrix redundancy_matrix_serial(const Matrix &columns_by_instance, const LeakageOptions &options = {});

struct RedundantPair {
    std::size_t removed;
    std::size_t kept;   /// the earlier kept feature it duplicates
    double score;
};

struct RedundancyResult {
    std::vector<std::size_t> kept;
    std::vector<RedundantPair> removed;
};

/// greedy in index order: a feature is removed when its score with any
/// already-kept feature is >= threshold
RedundancyResult redundancy_filter(const Matrix &scores, double threshold = default_redundancy_threshold);

struct FeatureClusters {
    std::vector<std::vector<std::size_t>> clusters;   /// size >= 2, ordered by first member
    std::vector<std::size_t> independent;
};

/// single-linkage grouping of `features` with score >= threshold
FeatureClusters cluster_features(const Matrix &scores, std::span<const std::size_t> features,
                                 double threshold = default_cluster_threshold);

/// keeps the `cap` members with the highest individual leakage
std::vector<std::size_t> reduce_cluster(std::span<const std::size_t> cluster, std::span<const double> leakage,
                                        std::size_t cap);

/// joint leakage of a feature category, capped at log2 N
///
/// Clusters are intersected with the category; a cluster contributing
/// more than options.max_cluster_dims features throws
/// std::invalid_argument (reduce it with reduce_cluster first).
double joint_leakage(const LeakageDataset &data, std::span<const std::size_t> category,
                     const FeatureClusters &clusters, const LeakageOptions &options = {});

struct CategoryLeakage {
    std::string name;
    std::vector<std::size_t> features;   /// members surviving the redundancy filter
    double bits;
};

struct LeakageReport {
    std::size_t sites = 0;
    std::vector<double> individual;   /// per feature, bits
    RedundancyResult redundancy;
    FeatureClusters clusters;
    std::vector<CategoryLeakage> categories;
};

struct Category {
    std::string name;
    std::vector<std::size_t> features;
};

/// runs the whole analysis: individual leakage, redundancy filtering,
/// clustering (clusters larger than the cap are reduced) and joint
/// leakage per category
LeakageReport analyze_leakage(const LeakageDataset &data, std::span<const Category> categories,
                              const LeakageOptions &options = {},
                              double redundancy_threshold = default_redundancy_threshold,
                              double cluster_threshold = default_cluster_threshold);

}  // namespace burstkit

#endif  // BURSTKIT_LEAKAGE_HPP
