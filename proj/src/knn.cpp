// knn.cpp

#include "burstkit/knn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace burstkit {

std::string_view to_string(Distance d) {
    return d == Distance::euclidean ? "euclidean" : "manhattan";
}

Distance distance_from_string(std::string_view s) {
    if (s == "euclidean") return Distance::euclidean;
    if (s == "manhattan") return Distance::manhattan;
    throw std::invalid_argument{"unknown distance '" + std::string{s} + "'"};
}

namespace {

/// squared euclidean or manhattan; monotone in the true distance
double ranking_distance(std::span<const double> a, std::span<const double> b, Distance metric) {
    double acc = 0.0;
    if (metric == Distance::euclidean) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = a[i] - b[i];
            acc += d * d;
        }
    } else {
        for (std::size_t i = 0; i < a.size(); ++i) {
            acc += std::abs(a[i] - b[i]);
        }
    }
    return acc;
}

}  // namespace

double distance(std::span<const double> a, std::span<const double> b, Distance metric) {
    if (a.size() != b.size()) {
        throw std::invalid_argument{"distance between vectors of different length"};
    }
    const double r = ranking_distance(a, b, metric);
    return metric == Distance::euclidean ? std::sqrt(r) : r;
}

KnnModel KnnModel::fit(Matrix train, std::vector<int> labels, std::size_t k, Distance metric) {
    if (k == 0) {
        throw std::invalid_argument{"k must be positive"};
    }
    if (k > train.rows()) {
        throw std::invalid_argument{"k = " + std::to_string(k) + " exceeds the " + std::to_string(train.rows()) +
                                    " training rows"};
    }
    if (labels.size() != train.rows()) {
        throw std::invalid_argument{"label count does not match training rows"};
    }
    for (double v : train.data()) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument{"training matrix contains a non-finite value"};
        }
    }
    return KnnModel{std::move(train), std::move(labels), k, metric};
}

Prediction KnnModel::predict(std::span<const double> query) const {
    if (query.size() != train_.cols()) {
        throw std::invalid_argument{"query has " + std::to_string(query.size()) + " features, model expects " +
                                    std::to_string(train_.cols())};
    }
    std::vector<std::pair<double, std::size_t>> dist(train_.rows());
    for (std::size_t i = 0; i < train_.rows(); ++i) {
        dist[i] = {ranking_distance(query, train_.row(i), metric_), i};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k_), dist.end());

    // label -> (votes, summed distance)
    std::map<int, std::pair<std::size_t, double>> votes;
    for (std::size_t j = 0; j < k_; ++j) {
        const double d = metric_ == Distance::euclidean ? std::sqrt(dist[j].first) : dist[j].first;
        auto &v = votes[labels_[dist[j].second]];
        v.first += 1;
        v.second += d;
    }
    auto best = votes.begin();
    for (auto it = std::next(votes.begin()); it != votes.end(); ++it) {
        const auto &[count, sum] = it->second;
        if (count > best->second.first || (count == best->second.first && sum < best->second.second)) {
            best = it;
        }
    }
    return {best->first, static_cast<double>(best->second.first) / static_cast<double>(k_)};
}

std::vector<Prediction> KnnModel::predict_batch_serial(const Matrix &queries) const {
    if (queries.rows() > 0 && queries.cols() != train_.cols()) {
        throw std::invalid_argument{"query matrix dimension mismatch"};
    }
    std::vector<Prediction> out;
    out.reserve(queries.rows());
    for (std::size_t i = 0; i < queries.rows(); ++i) {
        out.push_back(predict(queries.row(i)));
    }
    return out;
}

std::vector<Prediction> KnnModel::predict_batch(const Matrix &queries) const {
    if (queries.rows() > 0 && queries.cols() != train_.cols()) {
        throw std::invalid_argument{"query matrix dimension mismatch"};
    }
    std::vector<Prediction> out(queries.rows());
    const auto n = static_cast<std::ptrdiff_t>(queries.rows());
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = predict(queries.row(static_cast<std::size_t>(i)));
    }
    return out;
}

ClosedWorldResult score_closed(std::span<const Prediction> predictions, std::span<const int> labels) {
    if (predictions.empty()) {
        throw std::invalid_argument{"empty test set"};
    }
    if (predictions.size() != labels.size()) {
        throw std::invalid_argument{"prediction and label counts differ"};
    }
    ClosedWorldResult r;
    r.classes.assign(labels.begin(), labels.end());
    for (const auto &p : predictions) {
        r.classes.push_back(p.label);
    }
    std::sort(r.classes.begin(), r.classes.end());
    r.classes.erase(std::unique(r.classes.begin(), r.classes.end()), r.classes.end());
    auto pos = [&](int label) {
        return static_cast<std::size_t>(std::lower_bound(r.classes.begin(), r.classes.end(), label) - r.classes.begin());
    };
    r.confusion.assign(r.classes.size(), std::vector<std::size_t>(r.classes.size(), 0));
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        r.confusion[pos(labels[i])][pos(predictions[i].label)] += 1;
        r.correct += predictions[i].label == labels[i] ? 1 : 0;
    }
    r.total = predictions.size();
    r.accuracy = static_cast<double>(r.correct) / static_cast<double>(r.total);
    return r;
}

ClosedWorldResult evaluate_closed(const KnnModel &model, const Matrix &test, std::span<const int> labels) {
    if (test.rows() == 0) {
        throw std::invalid_argument{"empty test set"};
    }
    return score_closed(model.predict_batch(test), labels);
}

std::vector<double> default_thresholds(std::size_t k) {
    std::vector<double> t;
    for (std::size_t j = 0; j <= k; ++j) {
        t.push_back(static_cast<double>(j) / static_cast<double>(k));
    }
    return t;
}

OpenWorldResult score_open(std::span<const Prediction> predictions, std::span<const int> labels,
                           std::span<const double> thresholds, PositiveRule rule) {
    if (predictions.size() != labels.size()) {
        throw std::invalid_argument{"prediction and label counts differ"};
    }
    if (std::none_of(labels.begin(), labels.end(), [](int l) { return l != unmonitored_label; })) {
        throw std::invalid_argument{"open-world evaluation needs monitored test instances"};
    }
    if (thresholds.empty()) {
        throw std::invalid_argument{"empty threshold sweep"};
    }
    std::vector<double> sweep(thresholds.begin(), thresholds.end());
    std::sort(sweep.begin(), sweep.end());
    sweep.erase(std::unique(sweep.begin(), sweep.end()), sweep.end());

    OpenWorldResult r;
    for (double t : sweep) {
        PrPoint p{t, 0, 0, 0, 0, 0.0, 0.0};
        for (std::size_t i = 0; i < predictions.size(); ++i) {
            const bool monitored = labels[i] != unmonitored_label;
            const bool flagged = predictions[i].label != unmonitored_label && predictions[i].confidence >= t;
            const bool hit = flagged && monitored &&
                             (rule == PositiveRule::binary || predictions[i].label == labels[i]);
            if (hit) {
                ++p.tp;
            } else if (flagged) {
                ++p.fp;
            }
            if (monitored && !hit) {
                ++p.fn;
            }
            if (!monitored && !flagged) {
                ++p.tn;
            }
        }
        p.precision = p.tp + p.fp > 0 ? static_cast<double>(p.tp) / static_cast<double>(p.tp + p.fp) : 0.0;
        p.recall = static_cast<double>(p.tp) / static_cast<double>(p.tp + p.fn);
        r.curve.push_back(p);
    }

    r.tuned_for_recall = r.curve.front();
    for (const auto &p : r.curve) {
        if (p.recall > r.tuned_for_recall.recall ||
            (p.recall == r.tuned_for_recall.recall && p.precision > r.tuned_for_recall.precision)) {
            r.tuned_for_recall = p;
        }
    }
    r.tuned_for_precision = r.curve.front();
    bool found = false;
    for (const auto &p : r.curve) {
        if (p.tp == 0) {
            continue;
        }
        if (!found || p.precision > r.tuned_for_precision.precision ||
            (p.precision == r.tuned_for_precision.precision && p.recall > r.tuned_for_precision.recall)) {
            r.tuned_for_precision = p;
            found = true;
        }
    }
    return r;
}

OpenWorldResult evaluate_open(const KnnModel &model, const Matrix &test, std::span<const int> labels,
                              std::span<const double> thresholds, PositiveRule rule) {
    return score_open(model.predict_batch(test), labels, thresholds, rule);
}

}  // namespace burstkit
