#include <cmath>
#include <sstream>
#include <stdexcept>

#include "phi4/fft.hpp"
#include "phi4/spectral.hpp"

namespace phi4 {

Multiplier Multiplier::identity() { return {"id", [](double) { return 1.0; }}; }
Multiplier Multiplier::operator_p() { return {"P", [](double l) { return l; }}; }
Multiplier Multiplier::inverse_p() { return {"P^-1", [](double l) { return 1.0 / l; }}; }
Multiplier Multiplier::heat(double t) {
    return {"exp(-" + std::to_string(t) + "P)", [t](double l) { return t == 0.0 ? 1.0 : std::exp(-t * l); }};
}
Multiplier Multiplier::laplacian() { return {"Laplacian", [](double l) { return 1.0 - l; }}; }

Multiplier operator*(const Multiplier& a, const Multiplier& b) {
    return {a.name_ + "*" + b.name_, [sa = a.symbol_, sb = b.symbol_](double l) { return sa(l) * sb(l); }};
}

namespace {

// Symbol values indexed by the integer |k|^2, which is all a radial
// multiplier depends on.
std::vector<double> tabulate(const Grid& g, const std::function<double(double)>& fn) {
    const long half = g.n() / 2;
    const long max_k2 = static_cast<long>(g.dim()) * half * half;
    std::vector<double> table(static_cast<std::size_t>(max_k2 + 1));
    const double w2 = g.base_frequency() * g.base_frequency();
    for (long k2 = 0; k2 <= max_k2; ++k2) table[static_cast<std::size_t>(k2)] = fn(1.0 + w2 * static_cast<double>(k2));
    return table;
}

}  // namespace

Field apply_multiplier(const Field& f, const Multiplier& m) {
    const auto& g = f.grid();
    const auto table = tabulate(g, [&](double l) { return m(l); });
    bool trivial = true;
    for (double w : table) trivial = trivial && w == 1.0;
    if (trivial) return f;
    SpectralArray out(f.spectral());
    for_each_mode(g, [&](std::size_t i, long k2, bool) {
        const double w = table[static_cast<std::size_t>(k2)];
        if (!std::isfinite(w)) {
            std::ostringstream msg;
            msg << "multiplier " << m.name() << " is not finite at |k|^2 = " << k2;
            throw std::domain_error(msg.str());
        }
        out[i] *= w;
    });
    return Field::from_spectral(g, std::move(out));
}

Field duhamel_step(const Field& u, const Field& nonlinearity, double dt) {
    require_same_grid(u, nonlinearity, "duhamel_step");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("duhamel_step: dt must be positive");
    const auto& g = u.grid();
    const auto decay = tabulate(g, [dt](double l) { return std::exp(-dt * l); });
    const auto gain = tabulate(g, [dt](double l) { return -std::expm1(-dt * l) / l; });
    const auto& a = u.spectral();
    const auto& b = nonlinearity.spectral();
    SpectralArray out(a.size());
    for_each_mode(g, [&](std::size_t i, long k2, bool) {
        const auto k = static_cast<std::size_t>(k2);
        out[i] = decay[k] * a[i] + gain[k] * b[i];
    });
    return Field::from_spectral(g, std::move(out));
}

Field spectral_sum(const std::vector<std::pair<double, const Field*>>& terms) {
    if (terms.empty()) throw std::invalid_argument("spectral_sum: no terms");
    const Grid& g = terms.front().second->grid();
    SpectralArray out(g.spectral_size(), Complex(0.0, 0.0));
    for (const auto& [w, f] : terms) {
        require_same_grid(*terms.front().second, *f, "spectral_sum");
        const auto& c = f->spectral();
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * c[i];
    }
    return Field::from_spectral(g, std::move(out));
}

RealArray to_padded(const Field& f) {
    const Grid pg = f.grid().resized(padded_points(f.grid()));
    return fft::inverse(pg, fft::resample(f.grid(), f.spectral(), pg));
}

Field from_padded(const Grid& grid, const RealArray& padded_values) {
    const Grid pg = grid.resized(padded_points(grid));
    return Field::from_spectral(grid, fft::resample(pg, fft::forward(pg, padded_values), grid));
}

Field cubic(const Field& f) {
    auto v = to_padded(f);
    for (auto& x : v) x = x * x * x;
    return from_padded(f.grid(), v);
}

Field square(const Field& f) {
    auto v = to_padded(f);
    for (auto& x : v) x = x * x;
    return from_padded(f.grid(), v);
}

Field product(const Field& a, const Field& b) {
    require_same_grid(a, b, "product");
    auto va = to_padded(a);
    const auto vb = to_padded(b);
    for (std::size_t i = 0; i < va.size(); ++i) va[i] *= vb[i];
    return from_padded(a.grid(), va);
}

Field derivative(const Field& f, int axis) {
    const auto& g = f.grid();
    if (axis < 0 || axis >= g.dim()) throw std::invalid_argument("derivative: axis out of range");
    const double w = g.base_frequency();
    SpectralArray out(f.spectral());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto k = g.wavevector(i);
        // The Nyquist derivative of a real field is not real; drop it.
        out[i] = g.is_nyquist(i) ? Complex(0.0, 0.0) : out[i] * Complex(0.0, w * k[axis]);
    }
    return Field::from_spectral(g, std::move(out));
}

std::vector<Field> gradient(const Field& f) {
    std::vector<Field> out;
    for (int a = 0; a < f.grid().dim(); ++a) out.push_back(derivative(f, a));
    return out;
}

Field gradient_dot(const Field& f, const Field& g) {
    require_same_grid(f, g, "gradient_dot");
    const Grid pg = f.grid().resized(padded_points(f.grid()));
    RealArray acc(pg.size(), 0.0);
    for (int a = 0; a < f.grid().dim(); ++a) {
        const auto da = to_padded(derivative(f, a));
        const auto db = to_padded(derivative(g, a));
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += da[i] * db[i];
    }
    return from_padded(f.grid(), acc);
}

Field truncate_nyquist(const Field& f) {
    SpectralArray out(f.spectral());
    for_each_mode(f.grid(), [&](std::size_t i, long, bool nyq) {
        if (nyq) out[i] = Complex(0.0, 0.0);
    });
    return Field::from_spectral(f.grid(), std::move(out));
}

}  // namespace phi4
