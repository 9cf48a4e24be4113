#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "phi4/paraproduct.hpp"
#include "phi4/trees.hpp"

namespace phi4 {
namespace {

constexpr double kBesovExponent = -1.1;

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
    return sxy / sxx;
}

// Renormalized field and the constant (or multiple of X) this component subtracts.
struct Probe {
    const char* name;
    const Field* field;
    double offset;  // raw = renormalized + offset (+ offset_x * X)
    double offset_x;
};

}  // namespace

DivergenceReport tree_divergence_report(const Grid& grid, const NoiseStream& stream, const std::vector<double>& r_sweep,
                                        const SweepOptions& options) {
    if (r_sweep.size() < 4) throw TreeRefused("divergence report needs at least 4 values of r");
    const auto [lo, hi] = std::minmax_element(r_sweep.begin(), r_sweep.end());
    if (!(*lo > 0.0)) throw TreeRefused("divergence report needs r > 0");
    if (std::log10(*hi / *lo) < 1.5 - 1e-12) throw TreeRefused("divergence report needs r to span 1.5 decades");
    if (!options.trees.renormalize) throw std::invalid_argument("divergence report compares against renormalized trees");

    DivergenceReport rep;
    for (double r : r_sweep) {
        TreeOptions t = options.trees;
        t.r = r;
        if (options.scale_dt_with_r) t.dt = std::min(t.dt, r / 4.0);
        const auto snaps = build_enhanced_noise(stream, grid, t, options.snapshots, options.stride);
        const std::vector<const char*> names{"W2", "R1", "R2", "R3", "R4"};
        std::vector<double> ren(names.size(), 0.0), raw(names.size(), 0.0), bes(names.size(), 0.0);
        for (const auto& e : snaps) {
            const std::vector<Probe> probes{{"W2", &e.W2, e.a, 0.0},
                                            {"R1", &e.R1, 0.0, 0.0},
                                            {"R2", &e.R2, e.b / 3.0, 0.0},
                                            {"R3", &e.R3, e.b / 3.0, 0.0},
                                            {"R4", &e.R4, 0.0, e.b}};
            for (std::size_t i = 0; i < probes.size(); ++i) {
                const double m = probes[i].field->mean();
                ren[i] += m;
                raw[i] += m + probes[i].offset + probes[i].offset_x * e.X.mean();
                bes[i] += besov_norm(*probes[i].field, kBesovExponent, kInfinity, kInfinity);
            }
        }
        const double n = static_cast<double>(snaps.size());
        for (std::size_t i = 0; i < names.size(); ++i) rep.rows.push_back({names[i], r, ren[i] / n, raw[i] / n, bes[i] / n});
    }

    for (const char* name : {"W2", "R1", "R2", "R3", "R4"}) {
        std::vector<double> logr, abslog, ren, raw, lograw;
        bool positive = true;
        for (const auto& row : rep.rows) {
            if (row.component != name) continue;
            logr.push_back(std::log(row.r));
            abslog.push_back(std::abs(std::log(row.r)));
            ren.push_back(row.renormalized_mean);
            raw.push_back(row.raw_mean);
            positive = positive && row.raw_mean > 0.0;
            lograw.push_back(positive ? std::log(row.raw_mean) : 0.0);
        }
        const double power = (std::string(name) == "W2" && positive) ? slope(logr, lograw)
                                                                      : std::numeric_limits<double>::quiet_NaN();
        rep.fits.push_back({name, slope(logr, ren), slope(abslog, raw), power});
    }
    return rep;
}

std::string DivergenceReport::csv() const {
    std::ostringstream os;
    os << std::setprecision(10) << "component,r,renormalized_mean,raw_mean,besov_m1.1\n";
    for (const auto& row : rows)
        os << row.component << ',' << row.r << ',' << row.renormalized_mean << ',' << row.raw_mean << ',' << row.besov
           << '\n';
    return os.str();
}

std::string DivergenceReport::fits_csv() const {
    std::ostringstream os;
    os << std::setprecision(10) << "component,renormalized_log_slope,raw_abslog_slope,raw_power_slope\n";
    for (const auto& f : fits)
        os << f.component << ',' << f.renormalized_log_slope << ',' << f.raw_log_slope << ',' << f.raw_power_slope
           << '\n';
    return os.str();
}

}  // namespace phi4
