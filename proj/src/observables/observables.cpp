#include <algorithm>
#include <cmath>
#include <sstream>

#include "phi4/observables.hpp"
#include "phi4/paraproduct.hpp"
#include "phi4/spectral.hpp"

namespace phi4 {
namespace {

struct Moments {
    std::vector<double> m2, m4;  // per-sample spatial means of w^2 and w^4
};

Moments moments(const std::vector<Field>& samples, double r_probe, int block) {
    Moments m;
    for (const auto& u : samples) {
        const Field w = apply_multiplier(u, Multiplier::heat(r_probe));
        double s2 = 0.0, s4 = 0.0;
        for (double x : w.physical()) {
            const double x2 = x * x;
            s2 += x2;
            s4 += x2 * x2;
        }
        const double n = static_cast<double>(w.physical().size());
        m.m2.push_back(s2 / n);
        m.m4.push_back(s4 / n);
    }
    if (block <= 1) return m;
    // Full blocks only; a trailing partial block is dropped.
    Moments b;
    const std::size_t k = static_cast<std::size_t>(block);
    for (std::size_t i = 0; i + k <= m.m2.size(); i += k) {
        double s2 = 0.0, s4 = 0.0;
        for (std::size_t j = i; j < i + k; ++j) s2 += m.m2[j], s4 += m.m4[j];
        b.m2.push_back(s2 / static_cast<double>(k));
        b.m4.push_back(s4 / static_cast<double>(k));
    }
    return b;
}

double c4_of(double mean2, double mean4) { return mean4 - 3.0 * mean2 * mean2; }

// Leave-one-out cumulants: entry i omits sample i.
std::vector<double> jackknife_c4(const Moments& m) {
    const double n = static_cast<double>(m.m2.size());
    double t2 = 0.0, t4 = 0.0;
    for (std::size_t i = 0; i < m.m2.size(); ++i) t2 += m.m2[i], t4 += m.m4[i];
    std::vector<double> out;
    for (std::size_t i = 0; i < m.m2.size(); ++i) out.push_back(c4_of((t2 - m.m2[i]) / (n - 1), (t4 - m.m4[i]) / (n - 1)));
    return out;
}

double jackknife_error(const std::vector<double>& loo) {
    const double n = static_cast<double>(loo.size());
    double mean = 0.0;
    for (double x : loo) mean += x;
    mean /= n;
    double s = 0.0;
    for (double x : loo) s += (x - mean) * (x - mean);
    return std::sqrt((n - 1.0) / n * s);
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
    return sxy / sxx;
}

void require_samples(const std::vector<Field>& samples, int block) {
    if (static_cast<int>(samples.size()) < kMinCumulantSamples) {
        throw std::invalid_argument("fourth cumulant: need at least " + std::to_string(kMinCumulantSamples) +
                                    " samples, got " + std::to_string(samples.size()));
    }
    if (block < 1 || static_cast<int>(samples.size()) / block < 10) {
        throw std::invalid_argument("fourth cumulant: block size must leave at least 10 blocks");
    }
}

}  // namespace

double lp_norm(const Field& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    return lp_norm_of(f, p);
}

SampleSet birkhoff_sample(const SimConfig& cfg, const SampleOptions& options) {
    cfg.validate();
    if (options.stride < 5.0 * cfg.dt) throw std::invalid_argument("birkhoff_sample: stride must be at least 5 dt");
    if (options.burn_in < 5.0) throw std::invalid_argument("birkhoff_sample: burn-in must be at least 5 relaxation times");
    if (options.count < 2) throw std::invalid_argument("birkhoff_sample: need at least two samples");

    SampleSet set;
    set.cfg = cfg;
    set.options = options;
    const Grid g = cfg.grid();
    const int burn_steps = static_cast<int>(std::ceil(options.burn_in / cfg.dt - 1e-9));
    const int stride_steps = static_cast<int>(std::lround(options.stride / cfg.dt));
    NoiseStream stream(cfg.seed, cfg.stream);
    Field u = initial_field(cfg, g);
    double t = 0.0;
    try {
        for (int i = 0; i < burn_steps; ++i, t += cfg.dt) u = step_u(u, cfg, stream, t);
        for (int k = 0; k < options.count; ++k) {
            for (int i = 0; i < stride_steps; ++i, t += cfg.dt) u = step_u(u, cfg, stream, t);
            set.times.push_back(t);
            set.fields.push_back(u);
            set.spatial_integrals.push_back(u.mean() * g.volume());
        }
    } catch (const BlowUp& e) {
        set.blew_up = true;
        set.blow_up_time = e.time();
    }

    const auto& s = set.spatial_integrals;
    if (s.size() >= 3) {
        double mean = 0.0;
        for (double x : s) mean += x;
        mean /= static_cast<double>(s.size());
        double c0 = 0.0, c1 = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            c0 += (s[i] - mean) * (s[i] - mean);
            if (i + 1 < s.size()) c1 += (s[i] - mean) * (s[i + 1] - mean);
        }
        set.lag_one_correlation = c0 > 0.0 ? c1 / c0 : 0.0;
        set.correlation_time = set.lag_one_correlation > 0.0 ? -options.stride / std::log(set.lag_one_correlation) : 0.0;
        set.stride_too_short = set.correlation_time > options.stride;
    }
    return set;
}

CumulantEstimate fourth_cumulant(const std::vector<Field>& samples, double r_probe, int block) {
    require_samples(samples, block);
    if (!(r_probe >= 0.0)) throw std::invalid_argument("fourth cumulant: r_probe must be >= 0");
    const Moments m = moments(samples, r_probe, block);
    const double n = static_cast<double>(m.m2.size());
    double t2 = 0.0, t4 = 0.0;
    for (std::size_t i = 0; i < m.m2.size(); ++i) t2 += m.m2[i], t4 += m.m4[i];
    return {r_probe, t2 / n, c4_of(t2 / n, t4 / n), jackknife_error(jackknife_c4(m))};
}

CumulantSweep cumulant_sweep(const std::vector<Field>& samples, const std::vector<double>& r_probes, int block) {
    require_samples(samples, block);
    if (r_probes.size() < 2) throw std::invalid_argument("cumulant sweep: need at least two probe scales");
    CumulantSweep out;
    std::vector<double> logs;
    std::vector<std::vector<double>> loo;  // [probe][omitted sample]
    std::vector<double> full;
    for (double r : r_probes) {
        const Moments m = moments(samples, r, block);
        const double n = static_cast<double>(m.m2.size());
        double t2 = 0.0, t4 = 0.0;
        for (std::size_t i = 0; i < m.m2.size(); ++i) t2 += m.m2[i], t4 += m.m4[i];
        loo.push_back(jackknife_c4(m));
        full.push_back(c4_of(t2 / n, t4 / n));
        out.points.push_back({r, t2 / n, full.back(), jackknife_error(loo.back())});
        logs.push_back(std::log(r));
    }
    auto log_abs = [](const std::vector<double>& c) {
        std::vector<double> y;
        for (double v : c) y.push_back(std::log(std::max(std::abs(v), 1e-300)));
        return y;
    };
    out.log_slope = fit_slope(logs, log_abs(full));
    out.linear_slope = fit_slope(logs, full);
    std::vector<double> loo_log, loo_lin;
    for (std::size_t i = 0; i < loo.front().size(); ++i) {
        std::vector<double> c;
        for (const auto& per_probe : loo) c.push_back(per_probe[i]);
        loo_log.push_back(fit_slope(logs, log_abs(c)));
        loo_lin.push_back(fit_slope(logs, c));
    }
    out.log_slope_err = jackknife_error(loo_log);
    out.linear_slope_err = jackknife_error(loo_lin);
    return out;
}

std::string CumulantSweep::csv() const {
    std::ostringstream os;
    os.precision(10);
    os << "r_probe,second_moment,c4,c4_stderr\n";
    for (const auto& p : points) os << p.r_probe << ',' << p.second_moment << ',' << p.c4 << ',' << p.stderr_ << '\n';
    os << "# log_slope," << log_slope << ',' << log_slope_err << '\n';
    os << "# linear_slope," << linear_slope << ',' << linear_slope_err << '\n';
    return os.str();
}

}  // namespace phi4
