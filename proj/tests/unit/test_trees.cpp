#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "phi4/field_io.hpp"
#include "phi4/paraproduct.hpp"
#include "phi4/renorm.hpp"
#include "phi4/spectral.hpp"
#include "phi4/trees.hpp"

using namespace phi4;

namespace {

struct Stats {
    double mean;
    double se;
};

Stats stats(const std::vector<double>& v) {
    double s = 0, s2 = 0;
    for (double x : v) s += x, s2 += x * x;
    const double n = static_cast<double>(v.size());
    const double m = s / n;
    return {m, std::sqrt(std::max(0.0, s2 / n - m * m) / (n - 1.0))};
}

TreeOptions quick(double r) {
    TreeOptions o;
    o.r = r;
    o.dt = 0.01;
    o.burn_in_dt = 0.05;
    return o;
}

}  // namespace

TEST_CASE("subtraction table") {
    const auto& t = subtraction_table();
    REQUIRE(t.size() == 6);
    auto find = [&](std::string name) {
        for (const auto& s : t)
            if (name == s.component) return s;
        FAIL("missing " << name);
        return t.front();
    };
    CHECK(find("W2").a_coefficient == 1.0);
    CHECK(find("W3").a_coefficient == 3.0);
    CHECK(find("W3").multiplies_x);
    CHECK(find("R2").b_coefficient == doctest::Approx(1.0 / 3.0));
    CHECK(find("R3").b_coefficient == doctest::Approx(1.0 / 3.0));
    CHECK(find("R4").b_coefficient == 1.0);
    CHECK(find("R4").multiplies_x);
    CHECK(equation_counterterm(2.0, 0.5) == 4.5);
}

TEST_CASE("tree construction refuses r = 0 and short burn-in") {
    const Grid g(3, 8);
    TreeOptions o = quick(0.0);
    CHECK_THROWS_AS(TreeBuilder(g, NoiseStream(1, 0), o), TreeRefused);
    o.r = 0.01;
    o.burn_in = 4.0;
    CHECK_THROWS_AS(TreeBuilder(g, NoiseStream(1, 0), o), TreeRefused);
}

TEST_CASE("components follow their defining formulas") {
    const Grid g(3, 16);
    SUBCASE("raw trees") {
        TreeOptions o = quick(0.02);
        o.renormalize = false;
        const auto e = build_enhanced_noise(NoiseStream(5, 0), g, o, 1, 0.0).front();
        CHECK(e.a == 0.0);
        CHECK(e.b == 0.0);
        CHECK(max_abs_difference(e.W2, square(e.X)) < 1e-12);
        CHECK(max_abs_difference(e.W3, cubic(e.X)) < 1e-12);
        CHECK(max_abs_difference(e.R1, resonant(e.I3, e.X)) < 1e-12);
        CHECK(max_abs_difference(e.R2, resonant(e.I2, e.W2)) < 1e-12);
        CHECK(max_abs_difference(e.R3, gradient_dot(e.I2, e.I2)) < 1e-12);
        CHECK(max_abs_difference(e.R4, resonant(e.I3, e.W2)) < 1e-12);
    }
    SUBCASE("renormalized trees") {
        const double r = 0.02;
        const auto e = build_enhanced_noise(NoiseStream(5, 0), g, quick(r), 1, 0.0).front();
        CHECK(e.a == a_closed(r));
        CHECK(e.b == b_closed(r));
        CHECK(max_abs_difference(e.W2, square(e.X) + (-e.a)) < 1e-12);
        CHECK(max_abs_difference(e.W3, axpy(cubic(e.X), -3.0 * e.a, e.X)) < 1e-11);
        CHECK(max_abs_difference(e.R2, resonant(e.I2, e.W2) + (-e.b / 3.0)) < 1e-12);
        CHECK(max_abs_difference(e.R3, gradient_dot(e.I2, e.I2) + (-e.b / 3.0)) < 1e-12);
        CHECK(max_abs_difference(e.R4, axpy(resonant(e.I3, e.W2), -e.b, e.X)) < 1e-12);
    }
}

TEST_CASE("by-parts estimator of R3 differs by half the Laplacian of I2 squared") {
    const Grid g(3, 16);
    const auto e = build_enhanced_noise(NoiseStream(9, 0), g, quick(0.02), 1, 0.0).front();
    const Field alt = r3_by_parts(e.I2, e.b);
    const Field half_lap = 0.5 * apply_multiplier(square(e.I2), Multiplier::laplacian());
    CHECK(max_abs_difference(e.R3 - alt, half_lap) < 1e-10 * std::max(1.0, e.R3.max_abs()));
    CHECK(std::abs(e.R3.mean() - alt.mean()) < 1e-12 * std::max(1.0, std::abs(e.R3.mean())));
}

TEST_CASE("counterterms are seed independent constants") {
    const Grid g(3, 8);
    const TreeBuilder a(g, NoiseStream(1, 0), quick(0.01));
    const TreeBuilder b(g, NoiseStream(2, 7), quick(0.01));
    CHECK(a.a() == b.a());
    CHECK(a.b() == b.b());
    CHECK(max_abs_difference(a.X(), b.X()) > 0.0);
}

TEST_CASE("means of the trees against mode-sum oracles") {
    const Grid g(3, 16);
    const double r = 0.02;
    // Stride 2 keeps the zero mode of I2 (correlation time 1) close to independent.
    const auto snaps = build_enhanced_noise(NoiseStream(21, 0), g, quick(r), 40, 2.0);
    std::vector<double> w2, w3, i2, cross;
    for (const auto& e : snaps) {
        w2.push_back(e.W2.mean());
        w3.push_back(e.W3.mean());
        i2.push_back(e.I2.mean());
        cross.push_back(product(e.W2, e.W3).mean());
    }
    // E[W2] = E[X^2] - a is the grid mode sum minus the closed form; the zero
    // mode of I2 integrates that constant with P^{-1} = 1.
    const double expected = galerkin_mode_sum(g, r) - a_closed(r);
    const auto sw2 = stats(w2);
    CHECK(std::abs(sw2.mean - expected) < 4.0 * sw2.se);
    const auto si2 = stats(i2);
    CHECK(std::abs(si2.mean - expected) < 4.0 * si2.se);
    // odd chaoses average out
    const auto sw3 = stats(w3);
    CHECK(std::abs(sw3.mean) < 4.0 * sw3.se);
    const auto sc = stats(cross);
    CHECK(std::abs(sc.mean) < 4.0 * sc.se);
}

TEST_CASE("snapshots round-trip through the field format with tags") {
    const Grid g(2, 8);
    const auto e = build_enhanced_noise(NoiseStream(3, 3), g, quick(0.05), 1, 0.0).front();
    const auto dir = std::filesystem::temp_directory_path() / "phi4_tree_snapshot_test";
    const auto paths = save_snapshot(e, dir.string(), "t0");
    REQUIRE(paths.size() == 9);
    const auto rec = load_field(paths[4]);
    CHECK(rec.tag == "I3");
    CHECK(max_abs_difference(rec.field, e.I3) == 0.0);
    std::filesystem::remove_all(dir);
}

TEST_CASE("time-Hoelder exponent of a linear path is one") {
    const Grid g(1, 8);
    const Field base = Field::from_function(g, [](const std::array<double, 3>& x) { return std::sin(x[0]); });
    std::vector<Field> slices;
    for (int i = 0; i < 10; ++i) slices.push_back((0.1 * i) * base);
    CHECK(time_holder_exponent(slices, 0.1, 4) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(time_holder_exponent(slices, 0.1, 10), std::invalid_argument);
}

TEST_CASE("divergence report refuses thin sweeps") {
    const Grid g(3, 8);
    SweepOptions o;
    o.trees = quick(0.1);
    CHECK_THROWS_AS(tree_divergence_report(g, NoiseStream(1, 0), {0.1, 0.05, 0.02}, o), TreeRefused);
    CHECK_THROWS_AS(tree_divergence_report(g, NoiseStream(1, 0), {0.1, 0.05, 0.02, 0.01}, o), TreeRefused);
}
