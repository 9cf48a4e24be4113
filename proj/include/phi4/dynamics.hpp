#pragma once

#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "phi4/field.hpp"
#include "phi4/noise.hpp"
#include "phi4/trees.hpp"

namespace phi4 {

enum class Integrator {
    ExponentialEuler,  // e^{-hP} u + P^{-1}(1 - e^{-hP}) N(u_n), cubic alias-free
    SplitCubic,        // exact pointwise flow of the cubic term, then exponential Euler on the rest
};

struct InitialCondition {
    enum class Kind { Zero, Given, ScaledRandom };
    Kind kind = Kind::Zero;
    std::optional<Field> field;  // Kind::Given
    double size = 1.0;           // Kind::ScaledRandom: target B^{-1/2-eps}_{inf,inf} norm
    double epsilon = 0.05;
};

struct SimConfig {
    int dim = 3;
    int n = 32;
    double period = 2.0 * std::numbers::pi;
    double r = 0.05;
    double dt = 0.005;
    double horizon = 1.0;
    double coupling = 1.0;
    std::optional<Field> coupling_field;  // overrides `coupling` when set
    bool mass_term = true;                // 3 lambda a_r u
    bool log_term = true;                 // -3 lambda^2 b_r u
    bool noise = true;
    std::uint64_t seed = 1;
    std::uint32_t stream = 0;
    InitialCondition initial;
    double blowup_threshold = 1e6;
    double snapshot_stride = 0.1;
    Integrator integrator = Integrator::ExponentialEuler;

    Grid grid() const { return Grid(dim, n, period); }
    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

class BlowUp : public std::runtime_error {
public:
    BlowUp(const std::string& what, double time) : std::runtime_error(what), time_(time) {}
    double time() const { return time_; }

private:
    double time_;
};

// lambda(x) on the grid.
Field coupling_on(const SimConfig& cfg, const Grid& grid);

// 3 lambda a_r - 3 lambda^2 b_r with the toggled terms, pointwise.
Field counterterm_field(const SimConfig& cfg, const Grid& grid);

// Initial field from the configuration; random draws use the InitialCondition noise purpose.
Field initial_field(const SimConfig& cfg, const Grid& grid);

// One step of (d_t + P) u = sqrt(2) xi_r - lambda u^3 + (3 lambda a - 3 lambda^2 b) u
// with an explicit stochastic-convolution increment. Throws BlowUp.
Field step_u(const Field& u, const SimConfig& cfg, const Field& noise_increment, double h, double time = 0.0);

// Same, drawing the increment from the exact OU transition at the stream's next step.
Field step_u(const Field& u, const SimConfig& cfg, NoiseStream& stream, double time = 0.0);

struct DiagnosticRow {
    double t;
    double l2;
    double l8;
    double besov;  // B^{-1/2-eps}_{inf,inf}
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Field> snapshots;
    std::vector<DiagnosticRow> diagnostics;
    std::string diagnostics_csv() const;
};

// Runs the u-equation from the configured initial condition to the horizon.
Trajectory simulate(const SimConfig& cfg);

// --- frozen noise ----------------------------------------------------------

// Ornstein-Uhlenbeck kicks on a fine time grid, addressed by step index, so
// runs at any multiple of the fine step see the same noise path.
class FrozenNoise {
public:
    FrozenNoise(const Grid& grid, double r, NoiseStream stream, double fine_dt, std::uint64_t first_step = 0);

    double fine_dt() const { return fine_dt_; }
    // X(t + m h) - e^{-m h P} X(t) for the m fine steps starting at fine index `begin`.
    Field increment(std::uint64_t begin, int m) const;

private:
    Grid grid_;
    double r_;
    NoiseStream stream_;
    double fine_dt_;
    std::uint64_t first_;
};

// --- Cole-Hopf formulation -------------------------------------------------

// Trees needed by the v-equation at one time.
struct TreeSlice {
    Field X, W2, W3, I2, I3, v_ref;
    double a = 0.0;
    double b = 0.0;
    explicit TreeSlice(const Grid& g) : X(g), W2(g), W3(g), I2(g), I3(g), v_ref(g) {}
    static TreeSlice zero(const Grid& g) { return TreeSlice(g); }
};

// v = e^{3 I2}(u - X + I3) - v_ref and its inverse.
Field cole_hopf_forward(const Field& u, const TreeSlice& s);
Field cole_hopf_backward(const Field& v, const TreeSlice& s);

struct ZCoefficients {
    Field z2, z1, z0;
};

// Coefficients of (d_t + P) v = -6 grad I2 . grad v - e^{-6 I2} v^3 + Z2 v^2 + Z1 v + Z0,
// valid for lambda = 1 with both counterterms on.
ZCoefficients assemble_z(const TreeSlice& s);

// Right-hand side above without the P term, for a given v.
Field v_drift(const Field& v, const TreeSlice& s, const ZCoefficients& z);

Field step_v(const Field& v, const TreeSlice& s, double h, Integrator integrator = Integrator::ExponentialEuler,
             double blowup_threshold = 1e6, double time = 0.0);

// Advances X, I2, I3 and v_ref along a frozen noise path with step m * fine_dt.
class TreePath {
public:
    TreePath(const TreeBuilder& burned_in, const FrozenNoise& noise, int fine_per_step);

    const TreeSlice& slice() const { return slice_; }
    const Field& last_increment() const { return increment_; }
    double time() const { return time_; }
    double step_size() const { return h_; }
    void step();

private:
    void refresh_powers();

    const FrozenNoise& noise_;
    int m_;
    double h_;
    double r_;
    std::uint64_t fine_index_ = 0;
    double time_ = 0.0;
    TreeSlice slice_;
    Field increment_;
};

struct CrossValidation {
    double dt;
    std::vector<double> times;
    std::vector<double> gaps;  // RMS of v_direct - forward(u) at each checkpoint
    double terminal_gap;
};

// Runs u and v side by side on the same trees and noise and compares them.
CrossValidation cole_hopf_cross_validation(const TreeBuilder& burned_in, const FrozenNoise& noise, int fine_per_step,
                                           const Field& u0, double horizon, int checkpoints);

// --- coming down from infinity ---------------------------------------------

struct ComingDownRun {
    double initial_size;       // B^{-1/2-eps}_{inf,inf} norm of the u initial condition
    std::vector<double> lp;    // ||v(t)||_{L^p} at the report times
    double fitted_constant;    // max over t in [t_min, horizon] of ||v(t)||_p / max(t^{-1/2}, 1)
    bool blew_up = false;
    double blow_up_time = 0.0;
};

struct ComingDownReport {
    double p;
    std::vector<double> times;
    std::vector<ComingDownRun> runs;
    double spread_at_half;  // max / min of ||v(0.5)||_p across runs
    double spread_at_one;   // max / min of ||v(1)||_p across runs
    double constant_spread; // max / min fitted constant
    std::string csv() const;
};

struct ComingDownOptions {
    double p = 8.0;
    double t_min = 0.05;
    double report_stride = 0.05;
    double tree_dt = 0.0;  // 0 uses cfg.dt
};

// Runs the v-equation for each initial size on one shared noise realization.
ComingDownReport coming_down_experiment(const SimConfig& cfg, const std::vector<double>& initial_sizes,
                                        const ComingDownOptions& options = {});

// --- comparison test -------------------------------------------------------

struct ComparisonResult {
    std::vector<double> partition;       // t_0 < t_1 < ... < t_N
    std::vector<double> values;          // F(t_n)
    std::vector<double> bounds;          // 1 + K t_{n+1}^{-1/(lambda-1)}
    double worst_margin;                 // min over n of bound - F(t_n)
    bool holds;
};

class ComparisonRefused : public std::invalid_argument {
public:
    ComparisonRefused(const std::string& what, double s, double t) : std::invalid_argument(what), s_(s), t_(t) {}
    double s() const { return s_; }
    double t() const { return t_; }

private:
    double s_, t_;
};

// Samples F on an increasing time grid; checks int_s^t F^lambda <= c (F(s) + 1)
// on every sampled pair, then builds the partition of the comparison argument.
ComparisonResult comparison_test(const std::vector<double>& times, const std::vector<double>& values,
                                 double lambda, double c);

// --- weighted norms --------------------------------------------------------

// max{ sup_t t^alpha ||v(t)||_{C^beta}, sup_{s != t} ||t^alpha v(t) - s^alpha v(s)||_inf / |t - s|^{beta/2} }
double weighted_norm(const std::vector<double>& times, const std::vector<Field>& fields, double alpha, double beta);

}  // namespace phi4
