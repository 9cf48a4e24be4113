#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "phi4/renorm.hpp"

using namespace phi4;
using std::numbers::pi;

namespace {

double brute_mode_sum(int d, int n, double period, double r) {
    const int m = n / 2 - 1;
    const double w2 = std::pow(2.0 * pi / period, 2);
    double s = 0.0;
    const int m1 = d >= 2 ? m : 0;
    const int m2 = d >= 3 ? m : 0;
    for (int a = -m; a <= m; ++a)
        for (int b = -m1; b <= m1; ++b)
            for (int c = -m2; c <= m2; ++c) {
                const double lambda = 1.0 + w2 * (a * a + b * b + c * c);
                s += std::exp(-2.0 * r * lambda) / lambda;
            }
    return s / std::pow(period, d);
}

// Closed form of the sunset integrand over [1, U]^2 by inclusion-exclusion of the strips.
double truncated_sunset_oracle(double u) {
    const double strip = 4.0 * (pi / 2.0 - std::atan(std::sqrt(1.0 + 2.0 * u)));
    const double corner = 4.0 * (pi / 2.0 - std::atan(std::sqrt(u * u + 2.0 * u)));
    return 2.0 * pi / 3.0 - 2.0 * strip + corner;
}

// Triple integral without the analytic inner reduction; s_i = c + t/(1-t).
double b_oracle(double r) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    auto over_a = [r](double a) {
        const double c = a + 2.0 * r;
        return GK::integrate(
            [&](double t1) {
                const double s1 = c + t1 / (1.0 - t1);
                const double j1 = 1.0 / ((1.0 - t1) * (1.0 - t1));
                return j1 * GK::integrate(
                                [&](double t2) {
                                    const double s2 = c + t2 / (1.0 - t2);
                                    const double j2 = 1.0 / ((1.0 - t2) * (1.0 - t2));
                                    return j2 * std::pow(s2 * a + s1 * a + s1 * s2, -1.5);
                                },
                                0.0, 1.0, 12, 1e-9);
            },
            0.0, 1.0, 12, 1e-9);
    };
    return GK::integrate(over_a, 0.0, 1.0, 12, 1e-8) / std::pow(4.0 * pi, 3);
}

}  // namespace

TEST_CASE("closed-form constants") {
    CHECK(a_closed(0.01) == doctest::Approx(0.31747).epsilon(1e-4));
    CHECK(b_closed(std::exp(-2.0)) == doctest::Approx(2.0 / (32.0 * pi * pi)).epsilon(1e-14));
    CHECK(b_closed(std::exp(-2.0)) == doctest::Approx(0.0063326).epsilon(1e-4));
    CHECK(b_closed(1.0) == 0.0);
    CHECK_THROWS_AS(a_closed(0.0), std::invalid_argument);
    CHECK_THROWS_AS(b_closed(-1.0), std::invalid_argument);
    const auto c = closed_constants(0.01);
    CHECK(c.source == RenormConstants::Source::ClosedForm);
    CHECK(c.a == a_closed(0.01));
}

TEST_CASE("mode sum equals the direct sum over the Galerkin cube") {
    CHECK(galerkin_mode_sum(Grid(3, 16), 0.01) == doctest::Approx(brute_mode_sum(3, 16, 2 * pi, 0.01)).epsilon(1e-11));
    CHECK(galerkin_mode_sum(Grid(2, 32, 4 * pi), 0.003) ==
          doctest::Approx(brute_mode_sum(2, 32, 4 * pi, 0.003)).epsilon(1e-11));
    CHECK(galerkin_mode_sum(Grid(1, 64, 3.0), 0.0) == doctest::Approx(brute_mode_sum(1, 64, 3.0, 0.0)).epsilon(1e-11));
}

TEST_CASE("a_numeric refuses under-resolved grids and names the needed N") {
    CHECK(minimal_resolution(3, 2 * pi, 1e-4) == 1024);
    try {
        (void)a_numeric(Grid(3, 32), 1e-4);
        FAIL("expected refusal");
    } catch (const CutoffTooCoarse& e) {
        CHECK(e.minimal_n() == 1024);
        CHECK(std::string(e.what()).find("N >= 1024") != std::string::npos);
    }
    CHECK_THROWS_AS(a_numeric(Grid(3, 32), 0.0), std::invalid_argument);
}

TEST_CASE("a_numeric limits") {
    // Large r keeps the zero mode only.
    CHECK(a_numeric(Grid(3, 8), 10.0) == doctest::Approx(std::exp(-20.0) / std::pow(2 * pi, 3)).epsilon(1e-7));
    // d = 1 converges to (1/2pi) sum_k 1/(1 + k^2) = coth(pi)/2; the deficit
    // (1/2pi) int (1 - e^{-2 r k^2}) / k^2 dk = sqrt(2r/pi) to leading order.
    const double limit = 0.5 / std::tanh(pi);
    double prev = 1.0;
    for (double r : {1e-2, 1e-4, 1e-6}) {
        const double v = a_numeric(Grid(1, minimal_resolution(1, 2 * pi, r)), r);
        const double err = std::abs(v - limit);
        CHECK(err < prev);
        CHECK(err == doctest::Approx(std::sqrt(2.0 * r / pi)).epsilon(0.01));
        prev = err;
    }
}

TEST_CASE("three-dimensional singular part is the universal constant") {
    auto resolved = [](double r, double period) {
        return a_numeric(Grid(3, minimal_resolution(3, period, r), period), r);
    };
    // The regular remainder cancels in a difference at two small r.
    const double r1 = 1e-4, r2 = 4e-4;
    const double coeff = (resolved(r1, 2 * pi) - resolved(r2, 2 * pi)) / (1 / std::sqrt(r1) - 1 / std::sqrt(r2));
    CHECK(coeff == doctest::Approx(1.0 / (4.0 * std::sqrt(2.0) * std::pow(pi, 1.5))).epsilon(0.02));

    // a_numeric - a_closed settles as r -> 0.
    std::vector<double> diff;
    for (double r : {1e-2, 1e-3, 1e-4}) diff.push_back(resolved(r, 2 * pi) - a_closed(r));
    CHECK(std::abs(diff[2] - diff[1]) < std::abs(diff[1] - diff[0]));
    CHECK(std::abs(diff[2]) < 0.2);

    // Doubling the box changes only the regular part.
    const double shift3 = resolved(1e-3, 4 * pi) - resolved(1e-3, 2 * pi);
    const double shift4 = resolved(1e-4, 4 * pi) - resolved(1e-4, 2 * pi);
    CHECK(std::abs(shift4 - shift3) < 2e-3);
}

TEST_CASE("sunset integral") {
    const double s = sunset_constant();
    CHECK(std::abs(s - 2.0 * pi / 3.0) < 1e-5);
    CHECK(s / std::pow(4.0 * pi, 3) == doctest::Approx(1.0 / (96.0 * pi * pi)).epsilon(1e-6));
    for (double u : {2.0, 10.0, 100.0}) CHECK(std::abs(sunset_truncated(u) - truncated_sunset_oracle(u)) < 1e-9);
    // The tail decays like U^{-1/2}, so [1, 10]^2 misses more than half of the value.
    CHECK(s - sunset_truncated(10.0) > 1.3);
}

TEST_CASE("b_numeric") {
    CHECK(b_numeric(1e-2) == doctest::Approx(b_oracle(1e-2)).epsilon(1e-6));
    std::vector<double> x, y;
    double prev = 0.0;
    for (double r : {1e-5, 1e-4, 1e-3, 1e-2}) {
        const double b = b_numeric(r);
        if (!x.empty()) CHECK(b < prev);
        prev = b;
        x.push_back(std::abs(std::log(r)));
        y.push_back(b);
        CHECK(std::abs(b - b_closed(r) / 3.0) < 0.01);
    }
    const double slope = (y.back() - y.front()) / (x.back() - x.front());
    CHECK(slope == doctest::Approx(1.0 / (96.0 * pi * pi)).epsilon(0.03));
}
