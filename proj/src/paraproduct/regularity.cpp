#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include "phi4/paraproduct.hpp"

namespace phi4 {
namespace {

constexpr std::size_t kMinSamples = 16;
constexpr std::size_t kMinUsableLevels = 4;
constexpr std::size_t kMinFitPoints = 3;
constexpr double kEnergyFloor = 1e-24;  // relative to the largest level

// Spatial mean of (D_j u)^2 for every level, via Parseval on the half spectrum.
std::map<int, double> level_energies(const Field& u) {
    const Grid& g = u.grid();
    const double w2 = g.base_frequency() * g.base_frequency();
    const auto& c = u.spectral();
    std::map<int, double> e;
    for (int j : nonempty_levels(g)) e[j] = 0.0;
    for_each_mode(g, [&](std::size_t i, long k2, bool) {
        e[block_level(w2 * static_cast<double>(k2))] += g.multiplicity(i) * std::norm(c[i]);
    });
    return e;
}

double ols_slope(const std::vector<int>& x, const std::vector<double>& y) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

double fitted_slope(const std::vector<int>& window, const std::vector<double>& sums, double count) {
    std::vector<double> y;
    for (double s : sums) y.push_back(std::log2(s / count));
    return ols_slope(window, y);
}

}  // namespace

RegularityEstimate estimate_regularity(const std::vector<Field>& samples) {
    if (samples.size() < kMinSamples) {
        throw RegularityRefused("estimate_regularity: need at least 16 samples, got " +
                                std::to_string(samples.size()));
    }
    const Grid& g = samples.front().grid();
    std::vector<std::map<int, double>> per_sample;
    per_sample.reserve(samples.size());
    for (const auto& s : samples) {
        require_same_grid(s, samples.front(), "estimate_regularity");
        per_sample.push_back(level_energies(s));
    }

    RegularityEstimate est{};
    double peak = 0.0;
    for (int j : nonempty_levels(g)) {
        double m = 0.0;
        for (const auto& e : per_sample) m += e.at(j);
        m /= static_cast<double>(samples.size());
        est.levels.push_back({j, m});
        peak = std::max(peak, m);
    }

    const int j_max = est.levels.back().level;
    est.fit_min = 2;
    est.fit_max = j_max - 2;
    std::size_t usable = 0;
    std::vector<int> window;
    for (const auto& lv : est.levels) {
        if (!(lv.mean_square > kEnergyFloor * peak)) continue;
        ++usable;
        if (lv.level >= est.fit_min && lv.level <= est.fit_max) window.push_back(lv.level);
    }
    if (usable < kMinUsableLevels) {
        throw RegularityRefused("estimate_regularity: only " + std::to_string(usable) +
                                " levels carry energy, need at least 4");
    }
    if (window.size() < kMinFitPoints) {
        throw RegularityRefused("estimate_regularity: fit window [2, " + std::to_string(est.fit_max) + "] holds " +
                                std::to_string(window.size()) + " usable levels, need at least 3");
    }

    const double n = static_cast<double>(samples.size());
    std::vector<double> sums(window.size(), 0.0);
    for (const auto& e : per_sample)
        for (std::size_t w = 0; w < window.size(); ++w) sums[w] += e.at(window[w]);
    est.slope = fitted_slope(window, sums, n);
    est.gamma_hat = -est.slope / 2.0;

    // Leave-one-out jackknife over samples.
    std::vector<double> loo;
    loo.reserve(samples.size());
    for (const auto& e : per_sample) {
        std::vector<double> s = sums;
        for (std::size_t w = 0; w < window.size(); ++w) s[w] -= e.at(window[w]);
        loo.push_back(-fitted_slope(window, s, n - 1.0) / 2.0);
    }
    double mean = 0.0;
    for (double v : loo) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : loo) ss += (v - mean) * (v - mean);
    est.stderr_ = std::sqrt((n - 1.0) / n * ss);
    return est;
}

std::string regularity_csv(const RegularityEstimate& e) {
    std::ostringstream os;
    os << std::setprecision(12);
    os << "level,mean_square,slope,gamma_hat,stderr\n";
    for (const auto& lv : e.levels)
        os << lv.level << ',' << lv.mean_square << ',' << e.slope << ',' << e.gamma_hat << ',' << e.stderr_ << '\n';
    return os.str();
}

}  // namespace phi4
