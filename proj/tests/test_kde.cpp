// test_kde.cpp

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>
#include <random>

#include "burstkit/kde.hpp"

using namespace burstkit;

namespace {

std::vector<double> normal_sample(std::size_t n, std::uint64_t seed, double mean = 0.0, double sd = 1.0) {
    std::mt19937_64 rng{seed};
    std::normal_distribution<double> g{mean, sd};
    std::vector<double> v(n);
    for (auto &x : v) x = g(rng);
    return v;
}

}  // namespace

TEST_CASE("silverman factor") {
    // 1-d: (4/3n)^(1/5)
    CHECK(silverman_bandwidth(1.0, 100, 1) == doctest::Approx(std::pow(4.0 / 300.0, 0.2)));
    // 2-d: n^(-1/6)
    CHECK(silverman_bandwidth(2.0, 64, 2) == doctest::Approx(2.0 / 2.0));
    CHECK(silverman_bandwidth(0.0, 100, 1) == default_bandwidth_floor);
    CHECK(silverman_bandwidth(0.0, 100, 1, 0.5) == 0.5);
}

TEST_CASE("robust scale") {
    const std::vector<double> v{1, 2, 3, 4, 100};
    // sd is inflated by the outlier; IQR = 4 - 2
    CHECK(robust_scale(v) == doctest::Approx(2.0 / 1.349));
    CHECK(robust_scale(std::vector<double>{5, 5, 5}) == 0.0);
    CHECK(robust_scale(std::vector<double>{1}) == 0.0);
    // IQR zero but spread present: falls back to sd
    const std::vector<double> w{0, 1, 1, 1, 1, 1, 1, 2};
    CHECK(robust_scale(w) == doctest::Approx(std::sqrt(2.0 / 7.0)));
}

TEST_CASE("standard normal density") {
    const auto kde = Kde::fit_1d(normal_sample(1000, 1));
    const double peak = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    CHECK(kde.pdf(0.0) == doctest::Approx(peak).epsilon(0.2));
    CHECK_FALSE(kde.degenerate());
    double integral = 0.0;
    const double step = 0.01;
    for (double x = -8.0; x <= 8.0; x += step) {
        integral += kde.pdf(x) * step;
    }
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("2-d density integrates to one") {
    const auto a = normal_sample(300, 2);
    const auto b = normal_sample(300, 3, 5.0, 0.5);
    const auto kde = Kde::fit({a, b});
    CHECK(kde.dims() == 2);
    CHECK(kde.size() == 300);
    double integral = 0.0;
    const double step = 0.05;
    for (double x = -6.0; x <= 6.0; x += step) {
        for (double y = 2.0; y <= 8.0; y += step) {
            const std::vector<double> p{x, y};
            integral += kde.pdf(p) * step * step;
        }
    }
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("log_pdf is stable far from the data") {
    const auto kde = Kde::fit_1d(normal_sample(100, 4));
    const std::vector<double> far{1e3};
    const double lp = kde.log_pdf(far);
    CHECK(std::isfinite(lp));
    CHECK(lp < -1e4);
    CHECK(kde.pdf(1e3) == 0.0);
}

TEST_CASE("constant column is degenerate but usable") {
    const auto kde = Kde::fit_1d(std::vector<double>{2.0, 2.0, 2.0});
    CHECK(kde.degenerate());
    CHECK(kde.bandwidths()[0] == default_bandwidth_floor);
    CHECK(std::isfinite(kde.log_pdf(std::vector<double>{2.0})));
    std::mt19937_64 rng{1};
    CHECK(std::abs(kde.sample(rng) - 2.0) < 1e-4);
}

TEST_CASE("sampling follows the density") {
    const auto kde = Kde::fit_1d(normal_sample(500, 5, 3.0, 2.0));
    std::mt19937_64 rng{6};
    double sum = 0.0;
    double ss = 0.0;
    const int m = 20000;
    for (int i = 0; i < m; ++i) {
        const double x = kde.sample(rng);
        sum += x;
        ss += x * x;
    }
    const double mean = sum / m;
    const double var = ss / m - mean * mean;
    CHECK(mean == doctest::Approx(3.0).epsilon(0.05));
    CHECK(std::sqrt(var) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("fit errors") {
    CHECK_THROWS_AS(Kde::fit({}), std::invalid_argument);
    CHECK_THROWS_AS(Kde::fit_1d(std::vector<double>{1.0}), std::invalid_argument);
    CHECK_THROWS_AS(Kde::fit({{1, 2, 3}, {1, 2}}), std::invalid_argument);
    const auto kde = Kde::fit_1d(std::vector<double>{1, 2, 3});
    CHECK_THROWS_AS(kde.log_pdf(std::vector<double>{1, 2}), std::invalid_argument);
}
