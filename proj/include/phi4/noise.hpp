#pragma once

#include <array>
#include <cstdint>

#include "phi4/field.hpp"

namespace phi4 {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Source of Gaussian draws addressed by (seed, stream, step). Identical
// addresses give identical draws; there is no hidden generator state apart
// from the step counter used by the convenience overloads.
class NoiseStream {
public:
    NoiseStream(std::uint64_t seed, std::uint32_t stream) : seed_(seed), stream_(stream) {}

    std::uint64_t seed() const { return seed_; }
    std::uint32_t stream() const { return stream_; }
    std::uint64_t step() const { return step_; }
    void set_step(std::uint64_t s) { step_ = s; }
    std::uint64_t advance() { return step_++; }

    // Standard complex Gaussian (E|g|^2 = 1) for spectral slot `mode` at `step`.
    // `purpose` separates independent uses of the same (step, mode) address.
    Complex complex_gaussian(std::uint64_t step, std::uint32_t mode, std::uint32_t purpose = 0) const;

private:
    std::uint64_t seed_;
    std::uint32_t stream_;
    std::uint64_t step_ = 0;
};

enum class NoisePurpose : std::uint32_t { OuIncrement = 0, Stationary = 1, InitialCondition = 2 };

// Per-mode variance of the stationary solution of (d_t + P)X = sqrt(2) e^{-rP} xi,
// with white noise normalized against L^2 of the torus: e^{-2 r lambda}/(lambda L^d).
double stationary_mode_variance(const Grid& grid, double lambda, double r);

// Hermitian-symmetric Gaussian field whose coefficient c_k has E|c_k|^2 = variance(lambda_k),
// with Nyquist planes left empty. Draws are addressed by (stream, step, purpose).
Field gaussian_field(const Grid& grid, const NoiseStream& stream, std::uint64_t step, NoisePurpose purpose,
                     const std::function<double(double)>& variance);

// Exact transition of (d_t + P)X = sqrt(2) xi_r over dt, mode by mode.
// Uses the stream's current step and advances it.
Field ou_exact_step(const Field& x, double dt, double r, NoiseStream& stream);

// Same transition with the draw addressed by an explicit step index.
Field ou_exact_step_at(const Field& x, double dt, double r, const NoiseStream& stream, std::uint64_t step);

// One draw from the stationary law of X_r (cold start without burn-in).
Field sample_stationary(const Grid& grid, double r, const NoiseStream& stream, std::uint64_t draw = 0);

}  // namespace phi4
