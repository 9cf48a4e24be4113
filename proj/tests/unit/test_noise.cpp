#include <cmath>
#include <numbers>

#include "doctest.h"
#include "phi4/fft.hpp"
#include "phi4/noise.hpp"

using namespace phi4;

namespace {

// Independent oracle: Monte Carlo mean of |c_k|^2 with its standard error.
struct Moment {
    double mean;
    double se;
};

Moment mode_power(const std::vector<Field>& fields, std::size_t idx) {
    double s = 0.0, s2 = 0.0;
    for (const auto& f : fields) {
        const double p = std::norm(f.spectral()[idx]);
        s += p;
        s2 += p * p;
    }
    const double n = static_cast<double>(fields.size());
    const double m = s / n;
    return {m, std::sqrt((s2 / n - m * m) / (n - 1.0))};
}

double expected_variance(const Grid& g, std::size_t idx, double r) {
    const double lambda = 1.0 + std::pow(g.base_frequency(), 2) * static_cast<double>(g.integer_k2(idx));
    return std::exp(-2.0 * r * lambda) / (lambda * std::pow(g.period(), g.dim()));
}

}  // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
    auto w = philox4x32({0, 0, 0, 0}, {0, 0});
    CHECK(w[0] == 0x6627e8d5u);
    CHECK(w[1] == 0xe169c58du);
    CHECK(w[2] == 0xbc57ac4cu);
    CHECK(w[3] == 0x9b00dbd8u);
    w = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
    CHECK(w[0] == 0x408f276du);
    CHECK(w[1] == 0x41c83b0eu);
    CHECK(w[2] == 0xa20bc7c6u);
    CHECK(w[3] == 0x6d5451fdu);
    w = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
    CHECK(w[0] == 0xd16cfe09u);
    CHECK(w[1] == 0x94fdccebu);
    CHECK(w[2] == 0x5001e420u);
    CHECK(w[3] == 0x24126ea1u);
}

TEST_CASE("draws are addressed, reproducible and stream-separated") {
    const Grid g(3, 8);
    const NoiseStream a(42, 0), b(42, 0), c(42, 1);
    const Field fa = sample_stationary(g, 0.01, a);
    const Field fb = sample_stationary(g, 0.01, b);
    const Field fc = sample_stationary(g, 0.01, c);
    CHECK(fa.physical() == fb.physical());
    CHECK(max_abs_difference(fa, fc) > 0.1);

    NoiseStream s1(7, 3), s2(7, 3);
    Field x1 = fa, x2 = fa;
    for (int i = 0; i < 3; ++i) {
        x1 = ou_exact_step(x1, 0.05, 0.01, s1);
        x2 = ou_exact_step_at(x2, 0.05, 0.01, s2, static_cast<std::uint64_t>(i));
    }
    CHECK(x1.physical() == x2.physical());
    CHECK(s1.step() == 3);
}

TEST_CASE("sampled coefficients are Hermitian and avoid Nyquist planes") {
    for (int d = 1; d <= 3; ++d) {
        const Grid g(d, 8);
        const Field f = sample_stationary(g, 0.0, NoiseStream(1, 2));
        const auto& c = f.spectral();
        // A Hermitian array survives c2r followed by r2c unchanged.
        const auto again = fft::forward(g, fft::inverse(g, c));
        double err = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) err = std::max(err, std::abs(again[i] - c[i]));
        CHECK(err < 1e-14);
        bool nyquist_empty = true;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (g.is_nyquist(i)) nyquist_empty = nyquist_empty && c[i] == Complex(0.0, 0.0);
        }
        CHECK(nyquist_empty);
        CHECK(std::abs(c[0].imag()) == 0.0);
    }
}

TEST_CASE("stationary mode variances match the closed form") {
    const Grid g(2, 8);
    const double r = 0.02;
    const NoiseStream s(2024, 0);
    std::vector<Field> draws;
    for (std::uint64_t i = 0; i < 10000; ++i) draws.push_back(sample_stationary(g, r, s, i));
    for (std::size_t idx : {std::size_t{0}, std::size_t{1}, std::size_t{5 * 5 + 2}, std::size_t{7 * 5 + 3}}) {
        const auto m = mode_power(draws, idx);
        CHECK(std::abs(m.mean - expected_variance(g, idx, r)) < 3.0 * m.se);
    }
    SUBCASE("zero mode at r = 0 has unit variance in orthonormal units") {
        std::vector<Field> z;
        for (std::uint64_t i = 0; i < 10000; ++i) z.push_back(sample_stationary(g, 0.0, s, i));
        const auto m = mode_power(z, 0);
        const double vol = g.volume();
        CHECK(std::abs(m.mean * vol - 1.0) < 3.0 * m.se * vol);
    }
}

TEST_CASE("strong regularization leaves only the zero mode") {
    const Grid g(3, 8);
    const Field f = sample_stationary(g, 10.0, NoiseStream(3, 0));
    const double c0 = std::abs(f.mean());
    CHECK(c0 > 0.0);
    double rest = 0.0;
    for (double v : f.physical()) rest = std::max(rest, std::abs(v - f.mean()));
    // each non-zero mode is suppressed relative to k = 0 by at least e^{-r(lambda_1 - lambda_0)} = e^{-10}
    CHECK(rest < 1e-3 * c0);
}

TEST_CASE("OU transition: long step, stationarity and time covariance") {
    const Grid g(1, 16);
    const double r = 0.01;
    const std::size_t idx = 2;  // k = 2, lambda = 5
    const double var = expected_variance(g, idx, r);
    const int samples = 8000;

    std::vector<Field> long_step, one_step;
    double cov = 0.0, cov2 = 0.0;
    const double tau = 0.15;
    for (int i = 0; i < samples; ++i) {
        const NoiseStream s(99, static_cast<std::uint32_t>(i));
        const Field x0 = sample_stationary(g, r, s);
        long_step.push_back(ou_exact_step_at(Field(g), 50.0, r, s, 0));
        const Field x1 = ou_exact_step_at(x0, tau, r, s, 1);
        one_step.push_back(x1);
        const double c = std::real(x1.spectral()[idx] * std::conj(x0.spectral()[idx]));
        cov += c;
        cov2 += c * c;
    }
    const auto m_long = mode_power(long_step, idx);
    CHECK(std::abs(m_long.mean - var) < 3.0 * m_long.se);
    const auto m_one = mode_power(one_step, idx);
    CHECK(std::abs(m_one.mean - var) < 3.0 * m_one.se);

    cov /= samples;
    const double se = std::sqrt((cov2 / samples - cov * cov) / (samples - 1));
    CHECK(std::abs(cov - std::exp(-tau * 5.0) * var) < 3.0 * se);

    CHECK_THROWS_AS(ou_exact_step_at(Field(g), 0.0, r, NoiseStream(1, 1), 0), std::invalid_argument);
}

TEST_CASE("pointwise variance of X matches the direct mode sum") {
    const Grid g(3, 8);
    const double r = 0.05;
    double oracle = 0.0;  // sum over the Galerkin cube |k_i| <= 3
    for (int a = -3; a <= 3; ++a)
        for (int b = -3; b <= 3; ++b)
            for (int c = -3; c <= 3; ++c) {
                const double lambda = 1.0 + a * a + b * b + c * c;
                oracle += std::exp(-2.0 * r * lambda) / lambda;
            }
    oracle /= std::pow(2.0 * std::numbers::pi, 3);

    double s = 0.0, s2 = 0.0;
    const int n = 2000;
    NoiseStream stream(5, 0);
    Field x(g);
    for (int i = 0; i < 20; ++i) x = ou_exact_step(x, 0.5, r, stream);  // burn-in
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < 4; ++j) x = ou_exact_step(x, 0.5, r, stream);
        double m = 0.0;
        for (double v : x.physical()) m += v * v;
        m /= static_cast<double>(g.size());
        s += m;
        s2 += m * m;
    }
    const double mean = s / n;
    const double se = std::sqrt((s2 / n - mean * mean) / (n - 1));
    CHECK(std::abs(mean - oracle) < 3.0 * se);
}
