// knn.hpp
//
// k-nearest-neighbor classification with closed-world accuracy and
// open-world precision/recall evaluation.
//
// Neighbors are ordered by (distance, training row), so selection is
// deterministic under ties.  The predicted label is the plurality among
// the k neighbors; plurality ties go to the label with the smaller
// summed neighbor distance, then to the smaller label.  Confidence is
// the plurality count divided by k.

#ifndef BURSTKIT_KNN_HPP
#define BURSTKIT_KNN_HPP

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "burstkit/matrix.hpp"
#include "burstkit/trace.hpp"

namespace burstkit {

enum class Distance { euclidean, manhattan };

std::string_view to_string(Distance d);
Distance distance_from_string(std::string_view s);

double distance(std::span<const double> a, std::span<const double> b, Distance metric);

struct Prediction {
    int label;           /// unmonitored_label when the plurality is the background class
    double confidence;   /// plurality fraction in [0,1]

    bool operator==(const Prediction &) const = default;
};

class KnnModel {
public:
    /// stores the training data; throws std::invalid_argument when k is
    /// 0 or exceeds the row count, labels mismatch the rows, or any
    /// value is not finite
    static KnnModel fit(Matrix train, std::vector<int> labels, std::size_t k, Distance metric = Distance::euclidean);

    std::size_t k() const noexcept { return k_; }
    Distance metric() const noexcept { return metric_; }
    std::size_t dimension() const noexcept { return train_.cols(); }
    const Matrix &training_matrix() const noexcept { return train_; }
    std::span<const int> labels() const noexcept { return labels_; }

    /// throws std::invalid_argument on a dimension mismatch
    Prediction predict(std::span<const double> query) const;

    int predict_closed(std::span<const double> query) const { return predict(query).label; }

    std::vector<Prediction> predict_batch(const Matrix &queries) const;
    std::vector<Prediction> predict_batch_serial(const Matrix &queries) const;

private:
    KnnModel(Matrix train, std::vector<int> labels, std::size_t k, Distance metric)
        : train_{std::move(train)}, labels_{std::move(labels)}, k_{k}, metric_{metric} {}

    Matrix train_;
    std::vector<int> labels_;
    std::size_t k_;
    Distance metric_;
};

struct ClosedWorldResult {
    double accuracy = 0.0;
    std::size_t correct = 0;
    std::size_t total = 0;
    std::vector<int> classes;                        /// sorted union of true and predicted labels
    std::vector<std::vector<std::size_t>> confusion; /// [true class][predicted class]
};

/// throws std::invalid_argument for an empty test set
ClosedWorldResult evaluate_closed(const KnnModel &model, const Matrix &test, std::span<const int> labels);
ClosedWorldResult score_closed(std::span<const Prediction> predictions, std::span<const int> labels);

/// what counts as a true positive in the open world
enum class PositiveRule {
    exact_site,   /// monitored instance predicted as its own site
    binary,       /// monitored instance predicted as any monitored site
};

struct PrPoint {
    double threshold;
    std::size_t tp;
    std::size_t fp;
    std::size_t fn;
    std::size_t tn;
    double precision;   /// 0 when nothing is flagged
    double recall;
};

struct OpenWorldResult {
    std::vector<PrPoint> curve;   /// ascending threshold
    PrPoint tuned_for_precision;  /// highest precision with tp > 0, ties to higher recall
    PrPoint tuned_for_recall;     /// highest recall, ties to higher precision
};

/// confidence thresholds 0, 1/k, ..., 1: every distinct operating
/// point of a k-NN plurality vote
std::vector<double> default_thresholds(std::size_t k);

/// an instance is flagged when its predicted label is monitored and the
/// confidence reaches the threshold.  A flagged instance is a TP when
/// it satisfies the positive rule, otherwise a FP.  Monitored instances
/// that are not TPs are FNs; unflagged unmonitored instances are TNs.
///
/// Throws std::invalid_argument when no monitored instance is present.
OpenWorldResult score_open(std::span<const Prediction> predictions, std::span<const int> labels,
                           std::span<const double> thresholds, PositiveRule rule = PositiveRule::exact_site);

OpenWorldResult evaluate_open(const KnnModel &model, const Matrix &test, std::span<const int> labels,
                              std::span<const double> thresholds, PositiveRule rule = PositiveRule::exact_site);

}  // namespace burstkit

#endif  // BURSTKIT_KNN_HPP
