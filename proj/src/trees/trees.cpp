#include <cmath>
#include <filesystem>

#include "phi4/field_io.hpp"
#include "phi4/renorm.hpp"
#include "phi4/spectral.hpp"
#include "phi4/paraproduct.hpp"
#include "phi4/trees.hpp"

namespace phi4 {
namespace {

struct Powers {
    Field w2;
    Field w3;
};

// Wick square and cube of X from one padded evaluation.
Powers wick_powers(const Field& x, double a) {
    auto v = to_padded(x);
    RealArray sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double t = v[i];
        sq[i] = t * t - a;
        v[i] = t * t * t - 3.0 * a * t;
    }
    return {from_padded(x.grid(), sq), from_padded(x.grid(), v)};
}

}  // namespace

const std::vector<Subtraction>& subtraction_table() {
    static const std::vector<Subtraction> table{
        {"W2", "X^2", "a", 1.0, 0.0, false},
        {"W3", "X^3", "3 a X", 3.0, 0.0, true},
        {"R2", "I2 (.) W2", "b/3", 0.0, 1.0 / 3.0, false},
        {"R3", "|grad I2|^2", "b/3", 0.0, 1.0 / 3.0, false},
        {"R4", "I3 (.) W2", "b X", 0.0, 1.0, true},
        {"equation", "drift", "-3 (a - b) u", -3.0, 3.0, false},
    };
    return table;
}

double equation_counterterm(double a, double b) { return 3.0 * (a - b); }

Field v_ref_forcing(const Field& x, const Field& w2, const Field& i2, const Field& i3, double b) {
    const Field e3 = map_pointwise(i2, [](double t) { return std::exp(3.0 * t); });
    const Field inner = axpy(product(i3, w2), -b, x + i3);
    return 3.0 * product(e3, inner);
}

std::vector<std::pair<std::string, const Field*>> EnhancedNoise::components() const {
    return {{"X", &X},   {"W2", &W2}, {"W3", &W3}, {"I2", &I2}, {"I3", &I3},
            {"R1", &R1}, {"R2", &R2}, {"R3", &R3}, {"R4", &R4}};
}

TreeBuilder::TreeBuilder(const Grid& grid, NoiseStream stream, TreeOptions options)
    : grid_(grid), stream_(stream), opt_(options), x_(grid), w2_(grid), w3_(grid), i2_(grid), i3_(grid), v_ref_(grid) {
    if (!(opt_.r > 0.0)) throw TreeRefused("enhanced noise needs r > 0; probe the limit with an r sweep");
    if (!(opt_.burn_in >= 5.0)) throw TreeRefused("burn-in must be at least 5 relaxation times");
    if (!(opt_.dt > 0.0)) throw std::invalid_argument("tree dt must be positive");
    if (opt_.burn_in_dt < 0.0 || opt_.settle < 0.0 || opt_.settle > opt_.burn_in)
        throw std::invalid_argument("tree burn-in schedule is inconsistent");

    a_ = opt_.renormalize ? a_closed(opt_.r) : 0.0;
    b_ = opt_.renormalize ? b_closed(opt_.r) : 0.0;

    x_ = sample_stationary(grid_, opt_.r, stream_);
    auto p = wick_powers(x_, a_);
    w2_ = std::move(p.w2);
    w3_ = std::move(p.w3);

    const double coarse = opt_.burn_in_dt > 0.0 ? opt_.burn_in_dt : opt_.dt;
    const int coarse_steps = static_cast<int>(std::ceil((opt_.burn_in - opt_.settle) / coarse - 1e-9));
    if (coarse_steps > 0) {
        const double h = (opt_.burn_in - opt_.settle) / coarse_steps;
        for (int i = 0; i < coarse_steps; ++i) step(h);
    }
    advance(opt_.settle);
    time_ = 0.0;
}

void TreeBuilder::step(double h) {
    if (opt_.track_v_ref) v_ref_ = duhamel_step(v_ref_, v_ref_forcing(x_, w2_, i2_, i3_, b_), h);
    i2_ = duhamel_step(i2_, w2_, h);
    i3_ = duhamel_step(i3_, w3_, h);
    x_ = ou_exact_step(x_, h, opt_.r, stream_);
    auto p = wick_powers(x_, a_);
    w2_ = std::move(p.w2);
    w3_ = std::move(p.w3);
    time_ += h;
}

void TreeBuilder::advance(double duration) {
    if (duration <= 0.0) return;
    const int n = static_cast<int>(std::ceil(duration / opt_.dt - 1e-9));
    const double h = duration / n;
    for (int i = 0; i < n; ++i) step(h);
}

EnhancedNoise TreeBuilder::snapshot() const {
    EnhancedNoise e(grid_);
    e.r = opt_.r;
    e.time = time_;
    e.a = a_;
    e.b = b_;
    e.X = x_;
    e.W2 = w2_;
    e.W3 = w3_;
    e.I2 = i2_;
    e.I3 = i3_;
    e.R1 = resonant(i3_, x_);
    e.R2 = resonant(i2_, w2_) + (-b_ / 3.0);
    e.R3 = gradient_dot(i2_, i2_) + (-b_ / 3.0);
    e.R4 = axpy(resonant(i3_, w2_), -b_, x_);
    return e;
}

std::vector<EnhancedNoise> build_enhanced_noise(const NoiseStream& stream, const Grid& grid,
                                                const TreeOptions& options, int snapshots, double stride) {
    if (snapshots < 1) throw std::invalid_argument("build_enhanced_noise: need at least one snapshot");
    TreeBuilder builder(grid, stream, options);
    std::vector<EnhancedNoise> out;
    out.reserve(static_cast<std::size_t>(snapshots));
    for (int s = 0; s < snapshots; ++s) {
        if (s > 0) builder.advance(stride);
        out.push_back(builder.snapshot());
    }
    return out;
}

Field r3_by_parts(const Field& i2, double b) {
    const Field lap = apply_multiplier(i2, Multiplier::laplacian());
    return (-1.0) * product(i2, lap) + (-b / 3.0);
}

std::vector<std::string> save_snapshot(const EnhancedNoise& e, const std::string& directory,
                                       const std::string& prefix) {
    std::filesystem::create_directories(directory);
    std::vector<std::string> paths;
    for (const auto& [tag, f] : e.components()) {
        const auto path = (std::filesystem::path(directory) / (prefix + "_" + tag + ".phi4")).string();
        save_field(path, *f, tag);
        paths.push_back(path);
    }
    return paths;
}

double time_holder_exponent(const std::vector<Field>& slices, double stride, int max_lag) {
    if (max_lag < 2 || static_cast<int>(slices.size()) <= max_lag)
        throw std::invalid_argument("time_holder_exponent: need more slices than lags, and at least 2 lags");
    std::vector<double> lx, ly;
    for (int m = 1; m <= max_lag; ++m) {
        double acc = 0.0;
        int count = 0;
        for (std::size_t i = 0; i + m < slices.size(); ++i) {
            const Field d = slices[i + m] - slices[i];
            double s = 0.0;
            for (double v : d.physical()) s += v * v;
            acc += s / static_cast<double>(d.physical().size());
            ++count;
        }
        lx.push_back(std::log(m * stride));
        ly.push_back(std::log(acc / count));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
    mx /= lx.size();
    my /= ly.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) sxy += (lx[i] - mx) * (ly[i] - my), sxx += (lx[i] - mx) * (lx[i] - mx);
    return 0.5 * sxy / sxx;
}

}  // namespace phi4
