#include <cmath>
#include <numbers>
#include <stdexcept>

#include "phi4/noise.hpp"

namespace phi4 {
namespace {

double unit_open(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

std::vector<double> table_by_k2(const Grid& g, const std::function<double(double)>& fn) {
    const long half = g.n() / 2;
    const long max_k2 = static_cast<long>(g.dim()) * half * half;
    std::vector<double> t(static_cast<std::size_t>(max_k2 + 1));
    const double w2 = g.base_frequency() * g.base_frequency();
    for (long k2 = 0; k2 <= max_k2; ++k2) t[static_cast<std::size_t>(k2)] = fn(1.0 + w2 * static_cast<double>(k2));
    return t;
}

}  // namespace

Complex NoiseStream::complex_gaussian(std::uint64_t step, std::uint32_t mode, std::uint32_t purpose) const {
    const std::array<std::uint32_t, 4> ctr{mode, static_cast<std::uint32_t>(step),
                                           static_cast<std::uint32_t>(step >> 32) ^ (purpose << 24), stream_};
    const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
    const auto w = philox4x32(ctr, key);
    const double u1 = unit_open(w[0], w[1]);
    const double u2 = unit_open(w[2], w[3]);
    const double rad = std::sqrt(-std::log(u1));  // Box-Muller with the 1/sqrt(2) folded in
    const double ang = 2.0 * std::numbers::pi * u2;
    return {rad * std::cos(ang), rad * std::sin(ang)};
}

double stationary_mode_variance(const Grid& grid, double lambda, double r) {
    return std::exp(-2.0 * r * lambda) / (lambda * grid.volume());
}

Field gaussian_field(const Grid& g, const NoiseStream& stream, std::uint64_t step, NoisePurpose purpose,
                     const std::function<double(double)>& variance) {
    const auto var = table_by_k2(g, variance);
    const int n = g.n();
    const int h = g.last_extent();
    const int ny = n / 2;
    const auto tag = static_cast<std::uint32_t>(purpose);
    SpectralArray out(g.spectral_size(), Complex(0.0, 0.0));
    const int outer0 = g.dim() >= 3 ? n : 1;
    const int outer1 = g.dim() >= 2 ? n : 1;
    auto wn = [&](int i) { return i <= ny ? i : i - n; };
    for (int i0 = 0; i0 < outer0; ++i0) {
        if (g.dim() >= 3 && i0 == ny) continue;
        for (int i1 = 0; i1 < outer1; ++i1) {
            if (g.dim() >= 2 && i1 == ny) continue;
            const long k0 = g.dim() >= 3 ? wn(i0) : 0;
            const long k1 = g.dim() >= 2 ? wn(i1) : 0;
            const std::size_t row = (static_cast<std::size_t>(i0) * static_cast<std::size_t>(outer1) + i1) * h;
            for (int j = 0; j < ny; ++j) {
                const std::size_t idx = row + static_cast<std::size_t>(j);
                const long k2 = k0 * k0 + k1 * k1 + static_cast<long>(j) * j;
                const double sigma = std::sqrt(var[static_cast<std::size_t>(k2)]);
                if (j > 0) {
                    out[idx] = sigma * stream.complex_gaussian(step, static_cast<std::uint32_t>(idx), tag);
                    continue;
                }
                // j == 0: the conjugate partner lives in the same half-spectrum.
                const int p0 = g.dim() >= 3 ? (n - i0) % n : 0;
                const int p1 = g.dim() >= 2 ? (n - i1) % n : 0;
                const std::size_t partner = (static_cast<std::size_t>(p0) * static_cast<std::size_t>(outer1) + p1) * h;
                if (partner == idx) {
                    const Complex z = stream.complex_gaussian(step, static_cast<std::uint32_t>(idx), tag);
                    out[idx] = sigma * std::sqrt(2.0) * z.real();
                } else if (idx < partner) {
                    const Complex z = sigma * stream.complex_gaussian(step, static_cast<std::uint32_t>(idx), tag);
                    out[idx] = z;
                    out[partner] = std::conj(z);
                }
            }
        }
    }
    return Field::from_spectral(g, std::move(out));
}

Field ou_exact_step_at(const Field& x, double dt, double r, const NoiseStream& stream, std::uint64_t step) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("ou_exact_step: dt must be positive");
    if (!(r >= 0.0)) throw std::invalid_argument("ou_exact_step: r must be non-negative");
    const Grid& g = x.grid();
    const double vol = g.volume();
    const Field kick = gaussian_field(g, stream, step, NoisePurpose::OuIncrement, [&](double l) {
        return std::exp(-2.0 * r * l) * (-std::expm1(-2.0 * dt * l)) / (l * vol);
    });
    const auto decay = table_by_k2(g, [dt](double l) { return std::exp(-dt * l); });
    SpectralArray out(kick.spectral());
    const auto& c = x.spectral();
    for_each_mode(g, [&](std::size_t i, long k2, bool nyq) {
        out[i] += nyq ? Complex(0.0, 0.0) : decay[static_cast<std::size_t>(k2)] * c[i];
    });
    return Field::from_spectral(g, std::move(out));
}

Field ou_exact_step(const Field& x, double dt, double r, NoiseStream& stream) {
    const auto step = stream.advance();
    return ou_exact_step_at(x, dt, r, stream, step);
}

Field sample_stationary(const Grid& grid, double r, const NoiseStream& stream, std::uint64_t draw) {
    if (!(r >= 0.0)) throw std::invalid_argument("sample_stationary: r must be non-negative");
    return gaussian_field(grid, stream, draw, NoisePurpose::Stationary,
                          [&](double l) { return stationary_mode_variance(grid, l, r); });
}

}  // namespace phi4
