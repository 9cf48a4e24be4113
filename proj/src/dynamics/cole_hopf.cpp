#include <cmath>

#include "phi4/dynamics.hpp"
#include "phi4/renorm.hpp"
#include "phi4/spectral.hpp"

namespace phi4 {
namespace {

Field pointwise(const Field& a, const Field& b, double (*op)(double, double)) {
    const auto& x = a.physical();
    const auto& y = b.physical();
    RealArray out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = op(x[i], y[i]);
    return Field::from_physical(a.grid(), std::move(out));
}

// Everything the drift needs, evaluated on the padded grid.
struct PaddedTrees {
    RealArray i2, x, i3, v_ref;
    std::vector<RealArray> grad_i2, grad_v_ref;
};

PaddedTrees pad(const TreeSlice& s) {
    PaddedTrees p{to_padded(s.I2), to_padded(s.X), to_padded(s.I3), to_padded(s.v_ref), {}, {}};
    for (const auto& d : gradient(s.I2)) p.grad_i2.push_back(to_padded(d));
    for (const auto& d : gradient(s.v_ref)) p.grad_v_ref.push_back(to_padded(d));
    return p;
}

struct PointZ {
    double z2, z1, z0, e6, grad_i2_sq;
};

// Z coefficients at one padded point; `i` indexes PaddedTrees arrays.
PointZ z_at(const PaddedTrees& p, std::size_t i, double b) {
    const double i2 = p.i2[i], x = p.x[i], i3 = p.i3[i], w = p.v_ref[i];
    double g2 = 0.0, gg = 0.0;
    for (std::size_t a = 0; a < p.grad_i2.size(); ++a) {
        g2 += p.grad_i2[a][i] * p.grad_i2[a][i];
        gg += p.grad_i2[a][i] * p.grad_v_ref[a][i];
    }
    const double e3 = std::exp(3.0 * i2);
    const double em3 = 1.0 / e3;
    const double e6 = em3 * em3;
    const double z2p = -3.0 * em3 * (x - i3);
    const double z1p = -3.0 * i2 + 9.0 * g2 - 3.0 * b + 6.0 * x * i3 - 3.0 * i3 * i3;
    // Z0' - V with the W2 I3 products cancelled analytically.
    const double z0p_minus_v = e3 * (i3 * i3 * i3 - 3.0 * x * i3 * i3 + 6.0 * b * i3);
    PointZ z;
    z.e6 = e6;
    z.grad_i2_sq = g2;
    z.z2 = z2p - 3.0 * e6 * w;
    z.z1 = z1p + 2.0 * z2p * w - 3.0 * e6 * w * w;
    z.z0 = z0p_minus_v - 6.0 * gg - e6 * w * w * w + z2p * w * w + z1p * w;
    return z;
}

Field drift_impl(const Field& v, const TreeSlice& s, bool include_cubic) {
    const PaddedTrees p = pad(s);
    const RealArray vp = to_padded(v);
    std::vector<RealArray> gv;
    for (const auto& d : gradient(v)) gv.push_back(to_padded(d));
    RealArray out(vp.size());
    for (std::size_t i = 0; i < vp.size(); ++i) {
        const PointZ z = z_at(p, i, s.b);
        double transport = 0.0;
        for (std::size_t a = 0; a < gv.size(); ++a) transport += p.grad_i2[a][i] * gv[a][i];
        const double vi = vp[i];
        double f = -6.0 * transport + z.z2 * vi * vi + z.z1 * vi + z.z0;
        if (include_cubic) f -= z.e6 * vi * vi * vi;
        out[i] = f;
    }
    return from_padded(v.grid(), out);
}

void check(const Field& f, double threshold, double time) {
    if (!f.all_finite()) throw BlowUp("step_v: non-finite values", time);
    if (f.max_abs() > threshold) throw BlowUp("step_v: sup norm above threshold", time);
}

}  // namespace

FrozenNoise::FrozenNoise(const Grid& grid, double r, NoiseStream stream, double fine_dt, std::uint64_t first_step)
    : grid_(grid), r_(r), stream_(stream), fine_dt_(fine_dt), first_(first_step) {
    if (!(fine_dt > 0.0)) throw std::invalid_argument("FrozenNoise: fine_dt must be positive");
    if (!(r > 0.0)) throw std::invalid_argument("FrozenNoise: r must be positive");
}

Field FrozenNoise::increment(std::uint64_t begin, int m) const {
    Field acc(grid_);
    for (int i = 0; i < m; ++i) acc = ou_exact_step_at(acc, fine_dt_, r_, stream_, first_ + begin + i);
    return acc;
}

Field cole_hopf_forward(const Field& u, const TreeSlice& s) {
    const Field w = u - s.X + s.I3;
    return pointwise(s.I2, w, [](double i2, double x) { return std::exp(3.0 * i2) * x; }) - s.v_ref;
}

Field cole_hopf_backward(const Field& v, const TreeSlice& s) {
    const Field z = v + s.v_ref;
    return s.X - s.I3 + pointwise(s.I2, z, [](double i2, double x) { return std::exp(-3.0 * i2) * x; });
}

ZCoefficients assemble_z(const TreeSlice& s) {
    const PaddedTrees p = pad(s);
    RealArray z2(p.i2.size()), z1(p.i2.size()), z0(p.i2.size());
    for (std::size_t i = 0; i < p.i2.size(); ++i) {
        const PointZ z = z_at(p, i, s.b);
        z2[i] = z.z2;
        z1[i] = z.z1;
        z0[i] = z.z0;
    }
    const Grid& g = s.X.grid();
    return {from_padded(g, z2), from_padded(g, z1), from_padded(g, z0)};
}

Field v_drift(const Field& v, const TreeSlice& s, const ZCoefficients&) { return drift_impl(v, s, true); }

Field step_v(const Field& v, const TreeSlice& s, double h, Integrator integrator, double blowup_threshold,
             double time) {
    require_same_grid(v, s.X, "step_v");
    Field next(v.grid());
    if (integrator == Integrator::SplitCubic) {
        const Field e6 = map_pointwise(s.I2, [](double t) { return std::exp(-6.0 * t); });
        const auto& vv = v.physical();
        const auto& cv = e6.physical();
        RealArray w(vv.size());
        for (std::size_t i = 0; i < vv.size(); ++i) w[i] = vv[i] / std::sqrt(1.0 + 2.0 * cv[i] * h * vv[i] * vv[i]);
        const Field flowed = truncate_nyquist(Field::from_physical(v.grid(), std::move(w)));
        next = duhamel_step(flowed, drift_impl(flowed, s, false), h);
    } else {
        next = duhamel_step(v, drift_impl(v, s, true), h);
    }
    check(next, blowup_threshold, time + h);
    return next;
}

TreePath::TreePath(const TreeBuilder& burned_in, const FrozenNoise& noise, int fine_per_step)
    : noise_(noise), m_(fine_per_step), h_(fine_per_step * noise.fine_dt()), r_(burned_in.options().r),
      slice_(burned_in.X().grid()), increment_(burned_in.X().grid()) {
    if (fine_per_step < 1) throw std::invalid_argument("TreePath: fine_per_step must be >= 1");
    if (!burned_in.options().renormalize) throw std::invalid_argument("TreePath: the v-equation needs renormalized trees");
    slice_.X = burned_in.X();
    slice_.W2 = burned_in.W2();
    slice_.W3 = burned_in.W3();
    slice_.I2 = burned_in.I2();
    slice_.I3 = burned_in.I3();
    slice_.v_ref = burned_in.v_ref();
    slice_.a = burned_in.a();
    slice_.b = burned_in.b();
}

void TreePath::refresh_powers() {
    auto v = to_padded(slice_.X);
    RealArray sq(v.size());
    const double a = slice_.a;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double t = v[i];
        sq[i] = t * t - a;
        v[i] = t * t * t - 3.0 * a * t;
    }
    slice_.W2 = from_padded(slice_.X.grid(), sq);
    slice_.W3 = from_padded(slice_.X.grid(), v);
}

void TreePath::step() {
    increment_ = noise_.increment(fine_index_, m_);
    fine_index_ += static_cast<std::uint64_t>(m_);
    slice_.v_ref = duhamel_step(slice_.v_ref, v_ref_forcing(slice_.X, slice_.W2, slice_.I2, slice_.I3, slice_.b), h_);
    slice_.I2 = duhamel_step(slice_.I2, slice_.W2, h_);
    slice_.I3 = duhamel_step(slice_.I3, slice_.W3, h_);
    slice_.X = apply_multiplier(slice_.X, Multiplier::heat(h_)) + increment_;
    refresh_powers();
    time_ += h_;
}

CrossValidation cole_hopf_cross_validation(const TreeBuilder& burned_in, const FrozenNoise& noise, int fine_per_step,
                                           const Field& u0, double horizon, int checkpoints) {
    TreePath path(burned_in, noise, fine_per_step);
    const double h = path.step_size();
    const int steps = static_cast<int>(std::lround(horizon / h));
    if (std::abs(steps * h - horizon) > 1e-9 * horizon) {
        throw std::invalid_argument("cross validation: horizon is not a multiple of the step");
    }
    if (checkpoints < 1 || steps % checkpoints != 0) {
        throw std::invalid_argument("cross validation: checkpoints must divide the step count");
    }

    SimConfig cfg;
    cfg.dim = u0.grid().dim();
    cfg.n = u0.grid().n();
    cfg.period = u0.grid().period();
    cfg.r = burned_in.options().r;
    cfg.coupling = 1.0;
    cfg.mass_term = cfg.log_term = true;
    cfg.blowup_threshold = 1e8;

    CrossValidation out{h, {}, {}, 0.0};
    Field u = u0;
    Field v = cole_hopf_forward(u0, path.slice());
    for (int n = 0; n < steps; ++n) {
        const double t = n * h;
        v = step_v(v, path.slice(), h, Integrator::ExponentialEuler, 1e8, t);
        path.step();
        u = step_u(u, cfg, path.last_increment(), h, t);
        if ((n + 1) % (steps / checkpoints) == 0) {
            const Field d = v - cole_hopf_forward(u, path.slice());
            double s = 0.0;
            for (double x : d.physical()) s += x * x;
            out.times.push_back((n + 1) * h);
            out.gaps.push_back(std::sqrt(s / static_cast<double>(d.physical().size())));
        }
    }
    out.terminal_gap = out.gaps.back();
    return out;
}

}  // namespace phi4
