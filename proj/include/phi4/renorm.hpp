#pragma once

#include <stdexcept>
#include <string>

#include "phi4/grid.hpp"

namespace phi4 {

// Wick constant a_r and second-order constant b_r of the cubic equation,
// with r the heat-flow time of the noise regularization e^{-rP}.
struct RenormConstants {
    enum class Source { ClosedForm, Numeric };
    double r;
    double a;
    double b;
    Source source;
};

// r^{-1/2} / (4 sqrt(2) pi^{3/2}), the leading small-r part of the Wick constant.
double a_closed(double r);
// |log r| / (32 pi^2).
double b_closed(double r);

RenormConstants closed_constants(double r);

class CutoffTooCoarse : public std::runtime_error {
public:
    CutoffTooCoarse(const std::string& what, int minimal_n) : std::runtime_error(what), minimal_n_(minimal_n) {}
    int minimal_n() const { return minimal_n_; }

private:
    int minimal_n_;
};

// (1/L^d) sum over the Galerkin cube |k_i| <= n/2 - 1 of e^{-2 r lambda_k} / lambda_k.
// This is E[X_r(x)^2] for the discretized stationary field at any resolution.
double galerkin_mode_sum(const Grid& grid, double r);

// Smallest power-of-two n for which e^{-2 r lambda} < 1e-12 on the edge of the cube.
int minimal_resolution(int dim, double period, double r);

// The same mode sum, refused unless the grid resolves the regularized spectrum.
double a_numeric(const Grid& grid, double r);

// int_1^inf int_1^inf (x + y + xy)^{-3/2} dx dy, equal to 2 pi / 3.
double sunset_constant();
// The same integrand on [1, upper]^2.
double sunset_truncated(double upper);

// (4 pi)^{-3} int_0^1 da int int_{[a + 2r, inf)^2} (s2 a + s1 a + s1 s2)^{-3/2};
// behaves like |log r| / (96 pi^2) + O(1).
double b_numeric(double r);

}  // namespace phi4
