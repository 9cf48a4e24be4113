#include "phi4/grid.hpp"

#include <stdexcept>
#include <string>

namespace phi4 {

Grid::Grid(int dim, int n, double period) : dim_(dim), n_(n), period_(period) {
    if (dim < 1 || dim > 3) {
        throw std::invalid_argument("grid dimension must be 1, 2 or 3, got " + std::to_string(dim));
    }
    if (n < 4 || (n & (n - 1)) != 0) {
        throw std::invalid_argument("points per axis must be a power of two >= 4, got " +
                                    std::to_string(n));
    }
    if (!(period > 0.0) || !std::isfinite(period)) {
        throw std::invalid_argument("period must be positive and finite");
    }
    size_ = 1;
    for (int a = 0; a < dim; ++a) size_ *= static_cast<std::size_t>(n);
    spectral_size_ = size_ / static_cast<std::size_t>(n) * static_cast<std::size_t>(last_extent());
}

std::array<int, 3> Grid::wavevector(std::size_t idx) const {
    std::array<int, 3> k{0, 0, 0};
    const auto h = static_cast<std::size_t>(last_extent());
    const auto nn = static_cast<std::size_t>(n_);
    k[dim_ - 1] = static_cast<int>(idx % h);
    idx /= h;
    for (int a = dim_ - 2; a >= 0; --a) {
        k[a] = wavenumber(static_cast<int>(idx % nn));
        idx /= nn;
    }
    return k;
}

long Grid::integer_k2(std::size_t idx) const {
    const auto k = wavevector(idx);
    long s = 0;
    for (int a = 0; a < dim_; ++a) s += static_cast<long>(k[a]) * k[a];
    return s;
}

bool Grid::is_nyquist(std::size_t idx) const {
    const auto k = wavevector(idx);
    for (int a = 0; a < dim_; ++a) {
        if (k[a] == n_ / 2 || k[a] == -n_ / 2) return true;
    }
    return false;
}

int Grid::multiplicity(std::size_t idx) const {
    const int kl = static_cast<int>(idx % static_cast<std::size_t>(last_extent()));
    return (kl == 0 || kl == n_ / 2) ? 1 : 2;
}

}  // namespace phi4
