#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "phi4/grid.hpp"

namespace phi4 {

using Complex = std::complex<double>;
using RealArray = std::vector<double>;
using SpectralArray = std::vector<Complex>;

// Real scalar field on a Grid. Immutable once constructed; the physical and
// spectral representations are produced on demand and cached. Spectral
// coefficients are Fourier-series coefficients, f(x) = sum_k c_k e^{i 2pi k.x/L},
// so the spatial mean of f^2 is the sum of |c_k|^2 over all of Z^d.
class Field {
public:
    explicit Field(const Grid& grid);  // zero field

    static Field from_physical(const Grid& grid, RealArray values);
    static Field from_spectral(const Grid& grid, SpectralArray coefficients);
    static Field constant(const Grid& grid, double value);
    // Samples fn(x) at the collocation points x_i = i L / n.
    static Field from_function(const Grid& grid,
                               const std::function<double(const std::array<double, 3>&)>& fn);

    const Grid& grid() const { return grid_; }
    const RealArray& physical() const;
    const SpectralArray& spectral() const;

    double mean() const;
    double max_abs() const;
    bool all_finite() const;

private:
    struct State;
    Field(const Grid& grid, std::shared_ptr<State> state);

    Grid grid_;
    std::shared_ptr<State> state_;
};

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator-(const Field& a);
Field operator*(double s, const Field& a);
Field operator+(const Field& a, double c);

// a + s*b
Field axpy(const Field& a, double s, const Field& b);

// Pointwise map at the collocation points (no dealiasing).
Field map_pointwise(const Field& f, const std::function<double(double)>& fn);

// Largest |a - b| over collocation points.
double max_abs_difference(const Field& a, const Field& b);

void require_same_grid(const Field& a, const Field& b, const char* where);

}  // namespace phi4
