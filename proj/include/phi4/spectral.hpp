#pragma once

#include <functional>
#include <string>
#include <vector>

#include "phi4/field.hpp"

namespace phi4 {

// Fourier multiplier given by a symbol of the eigenvalue lambda_k of
// P = 1 - Laplacian. Symbols compose pointwise.
class Multiplier {
public:
    using Symbol = std::function<double(double)>;

    Multiplier(std::string name, Symbol symbol) : name_(std::move(name)), symbol_(std::move(symbol)) {}

    double operator()(double lambda) const { return symbol_(lambda); }
    const std::string& name() const { return name_; }

    static Multiplier identity();
    static Multiplier operator_p();          // lambda
    static Multiplier inverse_p();           // 1 / lambda
    static Multiplier heat(double t);        // exp(-t lambda)
    static Multiplier laplacian();           // 1 - lambda

    friend Multiplier operator*(const Multiplier& a, const Multiplier& b);

private:
    std::string name_;
    Symbol symbol_;
};

// Scales every spectral coefficient by m(lambda_k). Throws std::domain_error if
// m is not finite at an eigenvalue present on the grid.
Field apply_multiplier(const Field& f, const Multiplier& m);

// One exponential-Euler step: e^{-dt P} u + P^{-1}(1 - e^{-dt P}) nonlinearity.
Field duhamel_step(const Field& u, const Field& nonlinearity, double dt);

// Spectral linear combination sum_i w_i f_i, avoiding physical round trips.
Field spectral_sum(const std::vector<std::pair<double, const Field*>>& terms);

// Points per axis of the grid used for alias-free quadratic and cubic products.
inline int padded_points(const Grid& g) { return 2 * g.n(); }

// Trigonometric interpolation of f onto the 2x padded grid.
RealArray to_padded(const Field& f);

// Projects padded physical values back onto f's grid (Nyquist planes dropped).
Field from_padded(const Grid& grid, const RealArray& padded_values);

// Alias-free products, truncated back to the Galerkin space.
Field cubic(const Field& f);
Field square(const Field& f);
Field product(const Field& a, const Field& b);

// Spectral partial derivative along axis a (physical units).
Field derivative(const Field& f, int axis);
std::vector<Field> gradient(const Field& f);

// sum_a (d_a f)(d_a g), computed alias-free.
Field gradient_dot(const Field& f, const Field& g);

// Galerkin projection: drops the Nyquist planes.
Field truncate_nyquist(const Field& f);

}  // namespace phi4
