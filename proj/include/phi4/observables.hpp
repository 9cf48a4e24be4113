#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phi4/dynamics.hpp"
#include "phi4/field.hpp"

namespace phi4 {

// (integral |f|^p)^{1/p} with cell weight (L/n)^d; p = infinity gives max |f|.
double lp_norm(const Field& f, double p);

struct SampleOptions {
    double burn_in = 5.0;  // >= 5 relaxation times of the slowest mode (rate 1)
    double stride = 1.0;   // >= 5 dt
    int count = 200;
};

struct SampleSet {
    SimConfig cfg;
    SampleOptions options;
    std::vector<double> times;
    std::vector<Field> fields;
    std::vector<double> spatial_integrals;  // integral of u over the torus per sample
    double lag_one_correlation = 0.0;       // of the spatial integrals at lag `stride`
    double correlation_time = 0.0;          // -stride / log(lag-one correlation), 0 if uncorrelated
    bool stride_too_short = false;          // stride below the estimated correlation time
    bool blew_up = false;                   // sampling stopped early; `fields` is partial
    double blow_up_time = 0.0;
};

// Runs the u-equation from the configured initial condition and records
// `count` snapshots every `stride` after `burn_in`.
SampleSet birkhoff_sample(const SimConfig& cfg, const SampleOptions& options);

struct CumulantEstimate {
    double r_probe;
    double second_moment;  // E[w^2]
    double c4;             // E[w^4] - 3 E[w^2]^2
    double stderr_;        // jackknife over samples
};

struct CumulantSweep {
    std::vector<CumulantEstimate> points;
    double log_slope = 0.0;     // d log |C4| / d log r_probe
    double log_slope_err = 0.0;
    double linear_slope = 0.0;  // d C4 / d log r_probe, for samples where C4 may vanish
    double linear_slope_err = 0.0;
    std::string csv() const;
};

constexpr int kMinCumulantSamples = 200;

// w = (e^{-r_probe P} u)(x), averaged over every grid point x. Error bars come
// from a jackknife over consecutive blocks of `block` samples.
CumulantEstimate fourth_cumulant(const std::vector<Field>& samples, double r_probe, int block = 1);
CumulantSweep cumulant_sweep(const std::vector<Field>& samples, const std::vector<double>& r_probes, int block = 1);

}  // namespace phi4
