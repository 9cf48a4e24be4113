#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "phi4/paraproduct.hpp"

namespace phi4 {
namespace {

// Level of every integer |k|^2 present on the grid, Nyquist planes included.
std::vector<int> levels_by_k2(const Grid& g) {
    const long half = g.n() / 2;
    const long max_k2 = static_cast<long>(g.dim()) * half * half;
    const double w2 = g.base_frequency() * g.base_frequency();
    std::vector<int> t(static_cast<std::size_t>(max_k2 + 1));
    for (long k2 = 0; k2 <= max_k2; ++k2) t[static_cast<std::size_t>(k2)] = block_level(w2 * static_cast<double>(k2));
    return t;
}

}  // namespace

int block_level(double xi_squared) {
    if (!(xi_squared >= 0.0) || !std::isfinite(xi_squared)) throw std::invalid_argument("block_level: bad frequency");
    // Boundaries are closed above; the slack keeps |xi| = 2^j in A_j under rounding.
    constexpr double slack = 1.0 + 1e-12;
    if (xi_squared <= 0.25 * slack) return -1;
    int j = 0;
    double upper2 = 1.0;
    while (xi_squared > upper2 * slack) {
        ++j;
        upper2 *= 4.0;
    }
    return j;
}

std::vector<int> nonempty_levels(const Grid& grid) {
    auto t = levels_by_k2(grid);
    std::vector<int> present;
    for_each_mode(grid, [&](std::size_t, long k2, bool) { present.push_back(t[static_cast<std::size_t>(k2)]); });
    std::sort(present.begin(), present.end());
    present.erase(std::unique(present.begin(), present.end()), present.end());
    return present;
}

int max_level(const Grid& grid) { return nonempty_levels(grid).back(); }

Field lp_block(const Field& f, int level) {
    if (level < -1) throw std::invalid_argument("lp_block: level must be >= -1");
    const auto t = levels_by_k2(f.grid());
    SpectralArray out(f.spectral());
    for_each_mode(f.grid(), [&](std::size_t i, long k2, bool) {
        if (t[static_cast<std::size_t>(k2)] != level) out[i] = Complex(0.0, 0.0);
    });
    return Field::from_spectral(f.grid(), std::move(out));
}

double lp_norm_of(const Field& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm_of: p must be in [1, inf]");
    const auto& v = f.physical();
    if (std::isinf(p)) return f.max_abs();
    double s = 0.0;
    if (p == 2.0) {
        for (double x : v) s += x * x;
    } else {
        for (double x : v) s += std::pow(std::abs(x), p);
    }
    return std::pow(s * f.grid().cell_volume(), 1.0 / p);
}

double besov_norm(const Field& f, double gamma, double p, double q) {
    if (!(p >= 1.0) || !(q >= 1.0)) throw std::invalid_argument("besov_norm: p and q must be in [1, inf]");
    double acc = 0.0;
    for (int j : nonempty_levels(f.grid())) {
        const double term = std::exp2(j * gamma) * lp_norm_of(lp_block(f, j), p);
        if (std::isinf(q)) {
            acc = std::max(acc, term);
        } else {
            acc += std::pow(term, q);
        }
    }
    return std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
}

}  // namespace phi4
