#include <cmath>
#include <numbers>

#include "doctest.h"
#include "phi4/dynamics.hpp"
#include "phi4/paraproduct.hpp"
#include "phi4/renorm.hpp"
#include "phi4/spectral.hpp"

using namespace phi4;

namespace {

SimConfig deterministic(int dim, int n) {
    SimConfig c;
    c.dim = dim;
    c.n = n;
    c.noise = false;
    c.mass_term = c.log_term = false;
    return c;
}

Field run(const SimConfig& cfg, Field u, double horizon) {
    const int steps = static_cast<int>(std::lround(horizon / cfg.dt));
    NoiseStream s(1, 0);
    for (int i = 0; i < steps; ++i) u = step_u(u, cfg, s, i * cfg.dt);
    return u;
}

// Exact solution of u' = -u - u^3.
double cubic_decay(double u0, double t) {
    const double e = std::exp(-2.0 * t);
    return std::sqrt(u0 * u0 * e / (1.0 + u0 * u0 * (1.0 - e)));
}

TreeOptions tree_options(double r, double dt) {
    TreeOptions o;
    o.r = r;
    o.dt = dt;
    o.burn_in_dt = 0.05;
    o.track_v_ref = true;
    return o;
}

}  // namespace

TEST_CASE("configuration validation names the offending field") {
    SimConfig c;
    c.n = 24;
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("power of two"), std::invalid_argument);
    c = SimConfig{};
    c.r = 0.0;
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("r must be positive"), std::invalid_argument);
    c = SimConfig{};
    c.coupling = -1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = SimConfig{};
    c.initial.kind = InitialCondition::Kind::Given;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    CHECK_NOTHROW(SimConfig{}.validate());
}

TEST_CASE("heat equation with zero coupling is integrated exactly") {
    SimConfig c = deterministic(3, 16);
    c.coupling = 0.0;
    c.dt = 0.05;
    const Grid g = c.grid();
    const Field u0 = Field::from_function(g, [](const auto& x) { return std::cos(x[0]) + 0.5 * std::sin(2.0 * x[1]); });
    const Field u = run(c, u0, 0.5);
    const Field expected = Field::from_function(g, [](const auto& x) {
        return std::exp(-2.0 * 0.5) * std::cos(x[0]) + 0.5 * std::exp(-5.0 * 0.5) * std::sin(2.0 * x[1]);
    });
    CHECK(max_abs_difference(u, expected) < 1e-12);
}

TEST_CASE("spatially constant data follows u' = -u - u^3 at first order") {
    SimConfig c = deterministic(1, 8);
    const Grid g = c.grid();
    const double u0 = 2.0, t = 0.5;
    double err[2];
    const double dts[2] = {1e-3, 5e-4};
    for (int i = 0; i < 2; ++i) {
        c.dt = dts[i];
        const Field u = run(c, Field::constant(g, u0), t);
        err[i] = std::abs(u.mean() - cubic_decay(u0, t));
        CHECK(max_abs_difference(u, Field::constant(g, u.mean())) < 1e-12);
    }
    CHECK(err[0] < 1e-3);
    CHECK(err[0] / err[1] == doctest::Approx(2.0).epsilon(0.1));

    SUBCASE("split cubic integrator converges to the same solution") {
        c.integrator = Integrator::SplitCubic;
        c.dt = 1e-3;
        const Field u = run(c, Field::constant(g, u0), t);
        CHECK(std::abs(u.mean() - cubic_decay(u0, t)) < 2e-3);
    }
}

TEST_CASE("counterterm field is 3 lambda a - 3 lambda^2 b pointwise") {
    SimConfig c;
    c.dim = 2;
    c.n = 16;
    c.r = 0.01;
    const Grid g = c.grid();
    c.coupling_field = Field::from_function(g, [](const auto& x) { return 1.0 + 0.5 * std::cos(x[0]); });
    const Field ct = counterterm_field(c, g);
    const double a = a_closed(c.r), b = b_closed(c.r);
    const auto& l = c.coupling_field->physical();
    double err = 0.0;
    for (std::size_t i = 0; i < l.size(); ++i) {
        err = std::max(err, std::abs(ct.physical()[i] - (3.0 * l[i] * a - 3.0 * l[i] * l[i] * b)));
    }
    CHECK(err < 1e-13);
    c.log_term = false;
    CHECK(counterterm_field(c, g).physical()[3] == doctest::Approx(3.0 * l[3] * a));
}

TEST_CASE("L2 norm does not increase without noise") {
    SimConfig c = deterministic(2, 32);
    c.dt = 0.01;
    c.initial.kind = InitialCondition::Kind::ScaledRandom;
    c.initial.size = 3.0;
    const Grid g = c.grid();
    Field u = initial_field(c, g);
    NoiseStream s(1, 0);
    double prev = lp_norm_of(u, 2.0);
    bool monotone = true;
    for (int i = 0; i < 100; ++i) {
        u = step_u(u, c, s, i * c.dt);
        const double now = lp_norm_of(u, 2.0);
        monotone = monotone && now <= prev * (1.0 + 1e-12);
        prev = now;
    }
    CHECK(monotone);
    CHECK(prev < 3.0);
}

TEST_CASE("scaled random initial data hits the requested Besov size") {
    SimConfig c;
    c.n = 16;
    c.initial.kind = InitialCondition::Kind::ScaledRandom;
    c.initial.size = 42.0;
    const Field u = initial_field(c, c.grid());
    CHECK(besov_norm(u, -0.55, kInfinity, kInfinity) == doctest::Approx(42.0).epsilon(1e-12));
}

TEST_CASE("constant data comes down like (2t)^{-1/2}") {
    SimConfig c = deterministic(3, 8);
    c.integrator = Integrator::SplitCubic;
    c.dt = 0.01;
    c.horizon = 1.0;
    c.snapshot_stride = 0.05;
    c.initial.kind = InitialCondition::Kind::Given;
    c.initial.field = Field::constant(c.grid(), 1e4);
    const Trajectory tr = simulate(c);
    REQUIRE(tr.times.size() == 21);
    bool below = true;
    for (std::size_t i = 1; i < tr.times.size(); ++i) {
        below = below && tr.snapshots[i].max_abs() <= 1.0 / std::sqrt(2.0 * tr.times[i]) * (1.0 + 1e-12);
    }
    CHECK(below);
    CHECK(tr.diagnostics_csv().rfind("t,l2,l8,besov_m1/2\n", 0) == 0);
}

TEST_CASE("explicit stepping of huge data reports blow-up") {
    SimConfig c = deterministic(1, 8);
    c.dt = 0.1;
    c.initial.kind = InitialCondition::Kind::Given;
    c.initial.field = Field::constant(c.grid(), 1e3);
    c.horizon = 1.0;
    try {
        simulate(c);
        FAIL("expected blow-up");
    } catch (const BlowUp& e) {
        CHECK(e.time() == doctest::Approx(0.1));
    }
}

TEST_CASE("frozen noise composes across step sizes") {
    const Grid g(2, 16);
    const FrozenNoise noise(g, 0.05, NoiseStream(3, 1), 0.01, 7);
    const Field two = noise.increment(4, 2);
    const Field composed = apply_multiplier(noise.increment(4, 1), Multiplier::heat(0.01)) + noise.increment(5, 1);
    CHECK(max_abs_difference(two, composed) < 1e-14);
    CHECK(max_abs_difference(noise.increment(4, 1), noise.increment(4, 1)) == 0.0);
}

TEST_CASE("tree path at the builder's step reproduces the builder") {
    const Grid g(3, 8);
    const double dt = 0.01;
    const TreeBuilder start(g, NoiseStream(11, 0), tree_options(0.05, dt));
    TreeBuilder reference = start;
    const FrozenNoise noise(g, 0.05, start.stream(), dt, start.stream().step());
    TreePath path(start, noise, 1);
    for (int i = 0; i < 5; ++i) path.step();
    reference.advance(5 * dt);
    CHECK(max_abs_difference(path.slice().X, reference.X()) < 1e-12);
    CHECK(max_abs_difference(path.slice().I2, reference.I2()) < 1e-12);
    CHECK(max_abs_difference(path.slice().I3, reference.I3()) < 1e-12);
    CHECK(max_abs_difference(path.slice().v_ref, reference.v_ref()) < 1e-12);
    CHECK(max_abs_difference(path.slice().W2, reference.W2()) < 1e-12);
}

TEST_CASE("Cole-Hopf maps") {
    const Grid g(3, 8);
    const TreeBuilder trees(g, NoiseStream(5, 0), tree_options(0.05, 0.01));
    const FrozenNoise noise(g, 0.05, trees.stream(), 0.01, trees.stream().step());
    TreePath path(trees, noise, 1);
    path.step();
    const Field u = Field::from_function(g, [](const auto& x) { return std::sin(x[0]) * std::cos(x[2]) + 0.3; });

    CHECK(max_abs_difference(cole_hopf_backward(cole_hopf_forward(u, path.slice()), path.slice()), u) < 1e-10);
    const TreeSlice zero = TreeSlice::zero(g);
    CHECK(max_abs_difference(cole_hopf_forward(u, zero), u) < 1e-15);

    SUBCASE("with zero trees the v-step is the u-step") {
        SimConfig c = deterministic(3, 8);
        const Field v = step_v(u, zero, 0.01);
        const Field w = step_u(u, c, Field(g), 0.01);
        CHECK(max_abs_difference(v, w) < 1e-13);
        const ZCoefficients z = assemble_z(zero);
        CHECK(z.z2.max_abs() == 0.0);
        CHECK(z.z1.max_abs() == 0.0);
        CHECK(z.z0.max_abs() == 0.0);
    }
}

TEST_CASE("v drift matches the closed-form expression for smooth trees") {
    const Grid g(2, 64);
    TreeSlice s = TreeSlice::zero(g);
    const double eps = 0.1;
    s.I2 = Field::from_function(g, [&](const auto& x) { return eps * std::cos(x[0]); });
    const Field v = Field::from_function(g, [](const auto& x) { return std::sin(2.0 * x[1]) + 0.3 * std::cos(x[0]); });
    const Field drift = v_drift(v, s, assemble_z(s));
    const Field oracle = Field::from_function(g, [&](const auto& x) {
        const double i2 = eps * std::cos(x[0]);
        const double di2 = -eps * std::sin(x[0]);
        const double vv = std::sin(2.0 * x[1]) + 0.3 * std::cos(x[0]);
        const double dv = -0.3 * std::sin(x[0]);
        return -6.0 * di2 * dv - std::exp(-6.0 * i2) * vv * vv * vv + (-3.0 * i2 + 9.0 * di2 * di2) * vv;
    });
    CHECK(max_abs_difference(drift, oracle) < 1e-9);
}

TEST_CASE("u and v runs agree to first order in the step") {
    const Grid g(3, 16);
    const double r = 0.2, fine = 0.00125;
    const TreeBuilder trees(g, NoiseStream(17, 0), tree_options(r, 0.01));
    const FrozenNoise noise(g, r, trees.stream(), fine, trees.stream().step());
    const Field u0 = Field::from_function(g, [](const auto& x) { return 0.5 * std::cos(x[0]) + 0.2; });
    std::vector<double> gaps;
    for (int m : {8, 4, 2}) {
        const auto cv = cole_hopf_cross_validation(trees, noise, m, u0, 0.2, 2);
        CHECK(cv.dt == doctest::Approx(m * fine));
        gaps.push_back(cv.terminal_gap);
    }
    CHECK(std::log2(gaps[0] / gaps[1]) > 0.9);
    CHECK(std::log2(gaps[1] / gaps[2]) > 0.9);
}

TEST_CASE("comparison test oracles") {
    SUBCASE("F = u^2 for u' = -u^3 satisfies the hypothesis with c = 1/2") {
        std::vector<double> t, f;
        for (int i = 0; i <= 20000; ++i) {
            t.push_back(i * 1e-4);
            f.push_back(1.0 / (2.0 * t.back() + 0.01));
        }
        const auto res = comparison_test(t, f, 2.0, 0.5);
        CHECK(res.holds);
        CHECK(res.partition.front() == 0.0);
        CHECK(res.partition.back() == 2.0);
        CHECK(res.values.size() + 1 == res.partition.size());
        bool increasing = true;
        for (std::size_t i = 1; i < res.partition.size(); ++i) increasing = increasing && res.partition[i] > res.partition[i - 1];
        CHECK(increasing);
    }
    SUBCASE("F = 1/t with c = 1") {
        std::vector<double> t, f;
        for (int i = 0; i <= 990; ++i) {
            t.push_back(0.01 + i * 1e-3);
            f.push_back(1.0 / t.back());
        }
        CHECK(comparison_test(t, f, 2.0, 1.0).holds);
    }
    SUBCASE("large constant violates the hypothesis") {
        const std::vector<double> t{0.0, 0.5, 1.0}, f{10.0, 10.0, 10.0};
        try {
            comparison_test(t, f, 2.0, 1e-3);
            FAIL("expected refusal");
        } catch (const ComparisonRefused& e) {
            CHECK(e.s() == 0.0);
            CHECK(e.t() == 1.0);
        }
    }
    SUBCASE("zero function needs a single interval") {
        const std::vector<double> t{0.0, 0.5, 1.0}, f{0.0, 0.0, 0.0};
        const auto res = comparison_test(t, f, 2.0, 1.0);
        CHECK(res.partition == std::vector<double>{0.0, 1.0});
        CHECK(res.holds);
    }
    CHECK_THROWS_AS(comparison_test({0.0, 1.0}, {1.0, 1.0}, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("weighted norm of a linear path") {
    const Grid g(1, 16);
    const Field shape = Field::from_function(g, [](const auto& x) { return std::cos(x[0]); });
    std::vector<double> times{0.0, 0.25, 0.5, 1.0};
    std::vector<Field> fields;
    for (double t : times) fields.push_back(t * shape);
    // alpha = 0, beta = 1: the time part is max |t - s|^{1/2} = 1, the space part max t ||cos||_{C^1}.
    const double space = besov_norm(shape, 1.0, kInfinity, kInfinity);
    CHECK(weighted_norm(times, fields, 0.0, 1.0) == doctest::Approx(std::max(1.0, space)).epsilon(1e-12));
}

TEST_CASE("coming-down experiment on a small grid") {
    SimConfig c;
    c.n = 8;
    c.r = 0.05;
    c.dt = 0.01;
    c.horizon = 1.0;
    const auto rep = coming_down_experiment(c, {1.0, 100.0});
    REQUIRE(rep.runs.size() == 2);
    CHECK_FALSE(rep.runs[0].blew_up);
    CHECK_FALSE(rep.runs[1].blew_up);
    CHECK(rep.times.size() == 20);
    CHECK(rep.spread_at_one < 2.0);
    CHECK(rep.csv().rfind("t,size_1,size_100\n", 0) == 0);
}
