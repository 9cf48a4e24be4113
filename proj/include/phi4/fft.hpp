#pragma once

#include "phi4/field.hpp"

namespace phi4::fft {

// Physical values -> Fourier-series coefficients (divided by n^d).
SpectralArray forward(const Grid& grid, const RealArray& values);

// Fourier-series coefficients -> physical values.
RealArray inverse(const Grid& grid, const SpectralArray& coefficients);

// Copies coefficients between grids of the same dimension and period,
// keeping the modes both grids represent and dropping Nyquist planes.
SpectralArray resample(const Grid& from, const SpectralArray& coefficients, const Grid& to);

}  // namespace phi4::fft
