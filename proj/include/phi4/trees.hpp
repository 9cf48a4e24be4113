#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "phi4/field.hpp"
#include "phi4/noise.hpp"

namespace phi4 {

// Counterterm bookkeeping for every component that carries a subtraction.
// Each entry states what is subtracted from the raw expression, in units of
// the constants a_r and b_r.
struct Subtraction {
    const char* component;
    const char* raw_expression;
    const char* subtracted;  // human-readable, e.g. "3 a X"
    double a_coefficient;    // constant part: a_coefficient * a + b_coefficient * b
    double b_coefficient;
    bool multiplies_x;       // true when the constant multiplies the field X
};

// W2: a | W3: 3aX | R2: b/3 | R3: b/3 | R4: bX; the equation gains +3(a - b) u.
const std::vector<Subtraction>& subtraction_table();

// Coefficient of u added to the drift of the renormalized equation.
double equation_counterterm(double a, double b);

struct TreeOptions {
    double r = 0.0;
    double dt = 0.005;         // step used in the settle window and between snapshots
    double burn_in = 5.0;      // in units of 1/lambda_0 = 1
    double burn_in_dt = 0.0;   // step for the first burn_in - settle units; 0 uses dt
    double settle = 0.5;       // final part of the burn-in run at dt
    bool renormalize = true;   // false gives raw powers and products (a = b = 0)
    bool track_v_ref = false;  // also integrate the Cole-Hopf reference field
};

// Forcing of the Cole-Hopf reference field, (d_t + P) v_ref = V with
// V = 3 e^{3 I2} (I3 W2 - b (X + I3)).
Field v_ref_forcing(const Field& x, const Field& w2, const Field& i2, const Field& i3, double b);

// One time slice of the enhanced noise.
struct EnhancedNoise {
    double r = 0.0;
    double time = 0.0;
    double a = 0.0;  // constants actually subtracted
    double b = 0.0;
    Field X, W2, W3, I2, I3, R1, R2, R3, R4;

    explicit EnhancedNoise(const Grid& g) : X(g), W2(g), W3(g), I2(g), I3(g), R1(g), R2(g), R3(g), R4(g) {}

    // Components in a fixed order with their file tags.
    std::vector<std::pair<std::string, const Field*>> components() const;
};

class TreeRefused : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Stationary-in-time trees: X is seeded from its exact stationary law and
// advanced by exact OU transitions; I2 and I3 solve (d_t + P) I = W from a
// zero start through the burn-in with exponential Euler steps.
class TreeBuilder {
public:
    TreeBuilder(const Grid& grid, NoiseStream stream, TreeOptions options);

    void advance(double duration);
    EnhancedNoise snapshot() const;

    double time() const { return time_; }
    const Field& X() const { return x_; }
    const Field& I2() const { return i2_; }
    const Field& I3() const { return i3_; }
    const Field& W2() const { return w2_; }
    const Field& W3() const { return w3_; }
    const Field& v_ref() const { return v_ref_; }  // zero unless tracked
    const NoiseStream& stream() const { return stream_; }
    const TreeOptions& options() const { return opt_; }
    double a() const { return a_; }
    double b() const { return b_; }

private:
    void step(double h);

    Grid grid_;
    NoiseStream stream_;
    TreeOptions opt_;
    double a_;
    double b_;
    double time_ = 0.0;
    Field x_, w2_, w3_, i2_, i3_, v_ref_;
};

// Snapshots at stride `stride` after the burn-in.
std::vector<EnhancedNoise> build_enhanced_noise(const NoiseStream& stream, const Grid& grid,
                                                const TreeOptions& options, int snapshots, double stride);

// Alternative estimator of |grad I2|^2 - b/3 after integrating by parts:
// -I2 Lap(I2) - b/3. It differs from R3 by Lap(I2^2)/2, a total derivative.
Field r3_by_parts(const Field& i2, double b);

// Writes one file per component into `directory` as <prefix>_<tag>.phi4.
std::vector<std::string> save_snapshot(const EnhancedNoise& e, const std::string& directory,
                                       const std::string& prefix);

// Time-Hoelder exponent from mean-square increments at lags m * stride,
// m = 1..max_lag, fitted as E|f(t + tau) - f(t)|^2 ~ tau^{2 alpha}.
double time_holder_exponent(const std::vector<Field>& slices, double stride, int max_lag);

// --- r-sweep diagnostics ---------------------------------------------------

struct DivergenceRow {
    std::string component;
    double r;
    double renormalized_mean;  // spatial and snapshot mean
    double raw_mean;           // same with this component's own subtraction removed
    double besov;              // C^{-1-kappa}-type norm of the renormalized component (B^{-1.1}_{inf,inf})
};

struct DivergenceFit {
    std::string component;
    double renormalized_log_slope;  // d mean / d log r of the renormalized component
    double raw_log_slope;           // d raw mean / d |log r|
    double raw_power_slope;         // d log raw mean / d log r (W2 only, NaN otherwise)
};

struct DivergenceReport {
    std::vector<DivergenceRow> rows;
    std::vector<DivergenceFit> fits;
    std::string csv() const;       // one line per (component, r)
    std::string fits_csv() const;  // one line per component
};

struct SweepOptions {
    TreeOptions trees;      // r is overwritten per sweep point
    int snapshots = 4;
    double stride = 0.2;
    bool scale_dt_with_r = true;  // dt = min(trees.dt, r / 4)
};

// Requires at least 4 values of r spanning at least 1.5 decades.
DivergenceReport tree_divergence_report(const Grid& grid, const NoiseStream& stream, const std::vector<double>& r_sweep,
                                        const SweepOptions& options);

}  // namespace phi4
