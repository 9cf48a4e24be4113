#include <algorithm>
#include <cmath>
#include <sstream>

#include "phi4/dynamics.hpp"
#include "phi4/paraproduct.hpp"

namespace phi4 {
namespace {

double ratio(const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    if (*lo <= 0.0) return std::numeric_limits<double>::infinity();
    return *hi / *lo;
}

double value_at(const ComingDownReport& rep, const ComingDownRun& run, double t) {
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
        if (std::abs(rep.times[i] - t) < 1e-9 && i < run.lp.size()) return run.lp[i];
    }
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::string ComingDownReport::csv() const {
    std::ostringstream os;
    os.precision(10);
    os << "t";
    for (const auto& run : runs) os << ",size_" << run.initial_size;
    os << "\n";
    for (std::size_t i = 0; i < times.size(); ++i) {
        os << times[i];
        for (const auto& run : runs) {
            os << ",";
            if (i < run.lp.size()) os << run.lp[i];
        }
        os << "\n";
    }
    return os.str();
}

ComingDownReport coming_down_experiment(const SimConfig& cfg, const std::vector<double>& initial_sizes,
                                        const ComingDownOptions& options) {
    cfg.validate();
    if (initial_sizes.empty()) throw std::invalid_argument("coming down: no initial sizes");
    const Grid g = cfg.grid();
    const double h = options.tree_dt > 0.0 ? options.tree_dt : cfg.dt;
    const int stride = std::max(1, static_cast<int>(std::lround(options.report_stride / h)));
    const int steps = static_cast<int>(std::ceil(cfg.horizon / h - 1e-9));

    TreeOptions topt;
    topt.r = cfg.r;
    topt.dt = h;
    topt.burn_in_dt = std::max(h, 0.05);
    topt.track_v_ref = true;
    const TreeBuilder trees(g, NoiseStream(cfg.seed, cfg.stream), topt);
    const FrozenNoise noise(g, cfg.r, trees.stream(), h, trees.stream().step());
    TreePath path(trees, noise, 1);

    ComingDownReport rep;
    rep.p = options.p;
    std::vector<Field> v;
    for (double size : initial_sizes) {
        SimConfig c = cfg;
        c.initial.kind = InitialCondition::Kind::ScaledRandom;
        c.initial.size = size;
        v.push_back(cole_hopf_forward(initial_field(c, g), path.slice()));
        rep.runs.push_back({size, {}, 0.0, false, 0.0});
    }

    for (int n = 1; n <= steps; ++n) {
        const double t = (n - 1) * h;
        for (std::size_t k = 0; k < v.size(); ++k) {
            auto& run = rep.runs[k];
            if (run.blew_up) continue;
            try {
                v[k] = step_v(v[k], path.slice(), h, Integrator::SplitCubic, cfg.blowup_threshold, t);
            } catch (const BlowUp& e) {
                run.blew_up = true;
                run.blow_up_time = e.time();
            }
        }
        path.step();
        if (n % stride == 0) {
            const double now = n * h;
            rep.times.push_back(now);
            for (std::size_t k = 0; k < v.size(); ++k) {
                auto& run = rep.runs[k];
                if (run.blew_up) continue;
                const double lp = lp_norm_of(v[k], options.p);
                run.lp.push_back(lp);
                if (now >= options.t_min - 1e-12) {
                    run.fitted_constant = std::max(run.fitted_constant, lp / std::max(1.0 / std::sqrt(now), 1.0));
                }
            }
        }
    }

    std::vector<double> half, one, consts;
    for (const auto& run : rep.runs) {
        half.push_back(value_at(rep, run, 0.5));
        one.push_back(value_at(rep, run, 1.0));
        consts.push_back(run.fitted_constant);
    }
    const auto spread = [](const std::vector<double>& xs) {
        for (double x : xs)
            if (!std::isfinite(x)) return std::numeric_limits<double>::quiet_NaN();
        return ratio(xs);
    };
    rep.spread_at_half = spread(half);
    rep.spread_at_one = spread(one);
    rep.constant_spread = spread(consts);
    return rep;
}

}  // namespace phi4
