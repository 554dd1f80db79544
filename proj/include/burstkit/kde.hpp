// kde.hpp
//
// Gaussian kernel density estimates with a diagonal (product-kernel)
// bandwidth chosen by Silverman's normal-reference rule.

#ifndef BURSTKIT_KDE_HPP
#define BURSTKIT_KDE_HPP

#include <cstddef>
#include <random>
#include <span>
#include <vector>

namespace burstkit {

inline constexpr double default_bandwidth_floor = 1e-6;

/// min(standard deviation, IQR/1.349); falls back to the standard
/// deviation when the IQR is zero
double robust_scale(std::span<const double> samples);

/// h = scale * (4 / ((d + 2) n))^(1 / (d + 4)), floored
double silverman_bandwidth(double scale, std::size_t n, std::size_t dims, double floor = default_bandwidth_floor);

/// d-dimensional product-kernel density over n points
///
class Kde {
public:
    /// columns[j] holds the n samples of dimension j; throws
    /// std::invalid_argument with fewer than 2 samples or ragged columns
    static Kde fit(const std::vector<std::vector<double>> &columns, double floor = default_bandwidth_floor);

    static Kde fit_1d(std::span<const double> samples, double floor = default_bandwidth_floor) {
        return fit({std::vector<double>(samples.begin(), samples.end())}, floor);
    }

    std::size_t dims() const noexcept { return bandwidth_.size(); }
    std::size_t size() const noexcept { return n_; }
    std::span<const double> bandwidths() const noexcept { return bandwidth_; }

    /// true when some dimension has no spread; that dimension is then a
    /// point mass smoothed by the bandwidth floor
    bool degenerate() const noexcept { return degenerate_; }

    double log_pdf(std::span<const double> x) const;
    double pdf(std::span<const double> x) const;
    double pdf(double x) const { return pdf(std::span<const double>{&x, 1}); }

    /// draws one point: a random sample jittered by the kernel
    void sample(std::mt19937_64 &rng, std::span<double> out) const;
    double sample(std::mt19937_64 &rng) const;

private:
    std::size_t n_ = 0;
    std::vector<double> points_;      /// n x d, row-major
    std::vector<double> bandwidth_;
    double log_norm_ = 0.0;           /// -log n - sum log(h sqrt(2 pi))
    bool degenerate_ = false;
};

}  // namespace burstkit

#endif  // BURSTKIT_KDE_HPP
