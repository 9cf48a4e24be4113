#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>

namespace phi4 {

// Periodic cube [0, L)^d sampled with n points per axis.
//
// Spectral data uses the FFTW real-to-complex layout: the last axis keeps
// indices 0..n/2, the others run over 0..n-1 with wrap-around. Modes with a
// component equal to n/2 (the Nyquist planes) survive FFT round trips and
// multipliers, but products and padding discard them and the noise never
// excites them, so dynamical fields live on |k_i| <= n/2 - 1.
class Grid {
public:
    Grid(int dim, int n, double period = 2.0 * std::numbers::pi);

    int dim() const { return dim_; }
    int n() const { return n_; }
    double period() const { return period_; }

    std::size_t size() const { return size_; }
    std::size_t spectral_size() const { return spectral_size_; }
    int last_extent() const { return n_ / 2 + 1; }

    double cell_volume() const { return std::pow(period_ / n_, dim_); }
    double volume() const { return std::pow(period_, dim_); }

    // 2*pi/L, the physical frequency of integer wavenumber 1.
    double base_frequency() const { return 2.0 * std::numbers::pi / period_; }

    // Signed integer wavenumber for index i along a wrapped axis.
    int wavenumber(int i) const { return i <= n_ / 2 ? i : i - n_; }

    // Integer wavevector of a spectral index; unused trailing entries are 0.
    std::array<int, 3> wavevector(std::size_t spectral_index) const;

    // |k|^2 in integer units and the physical eigenvalue 1 + (2 pi/L)^2 |k|^2.
    long integer_k2(std::size_t spectral_index) const;
    double eigenvalue(std::size_t spectral_index) const {
        const double w = base_frequency();
        return 1.0 + w * w * static_cast<double>(integer_k2(spectral_index));
    }

    // True if the mode lies on a Nyquist plane and is therefore excluded.
    bool is_nyquist(std::size_t spectral_index) const;

    // Number of complex coefficients the half-spectrum entry stands for in a
    // full sum over Z^d: 1 for self-conjugate modes, 2 otherwise.
    int multiplicity(std::size_t spectral_index) const;

    // Grid with the same period and dimension but m points per axis.
    Grid resized(int m) const { return Grid(dim_, m, period_); }

    bool operator==(const Grid& other) const {
        return dim_ == other.dim_ && n_ == other.n_ && period_ == other.period_;
    }

private:
    int dim_;
    int n_;
    double period_;
    std::size_t size_;
    std::size_t spectral_size_;
};

// Visits every half-spectrum entry in storage order as
// fn(index, integer |k|^2, nyquist flag) without per-entry divisions.
template <class Fn>
void for_each_mode(const Grid& g, Fn&& fn) {
    const int n = g.n();
    const int h = g.last_extent();
    const int ny = n / 2;
    std::size_t idx = 0;
    auto wn = [&](int i) { return i <= ny ? i : i - n; };
    const int outer0 = g.dim() >= 3 ? n : 1;
    const int outer1 = g.dim() >= 2 ? n : 1;
    for (int i0 = 0; i0 < outer0; ++i0) {
        const int k0 = g.dim() >= 3 ? wn(i0) : 0;
        for (int i1 = 0; i1 < outer1; ++i1) {
            const int k1 = g.dim() >= 2 ? wn(i1) : 0;
            const bool outer_nyq = (g.dim() >= 3 && i0 == ny) || (g.dim() >= 2 && i1 == ny);
            const long base = static_cast<long>(k0) * k0 + static_cast<long>(k1) * k1;
            for (int j = 0; j < h; ++j, ++idx) {
                fn(idx, base + static_cast<long>(j) * j, outer_nyq || j == ny);
            }
        }
    }
}

}  // namespace phi4
