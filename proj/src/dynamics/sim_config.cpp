#include <cmath>

#include "phi4/dynamics.hpp"
#include "phi4/paraproduct.hpp"
#include "phi4/renorm.hpp"

namespace phi4 {
namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument("SimConfig: " + what);
}

}  // namespace

void SimConfig::validate() const {
    require(dim >= 1 && dim <= 3, "dim must be 1, 2 or 3");
    require(n >= 4 && (n & (n - 1)) == 0, "n must be a power of two >= 4");
    require(period > 0.0 && std::isfinite(period), "period must be positive");
    require(r > 0.0 && std::isfinite(r), "r must be positive");
    require(dt > 0.0 && std::isfinite(dt), "dt must be positive");
    require(horizon > 0.0 && std::isfinite(horizon), "horizon must be positive");
    require(blowup_threshold > 0.0, "blow-up threshold must be positive");
    require(snapshot_stride > 0.0, "snapshot stride must be positive");
    if (coupling_field) {
        require(coupling_field->grid() == grid(), "coupling field lives on a different grid");
        for (double v : coupling_field->physical()) require(v >= 0.0 && std::isfinite(v), "coupling must be >= 0");
    } else {
        require(coupling >= 0.0 && std::isfinite(coupling), "coupling must be >= 0");
    }
    if (initial.kind == InitialCondition::Kind::Given) {
        require(initial.field.has_value(), "given initial condition without a field");
        require(initial.field->grid() == grid(), "initial field lives on a different grid");
    }
    if (initial.kind == InitialCondition::Kind::ScaledRandom) {
        require(initial.size >= 0.0, "initial size must be >= 0");
        require(initial.epsilon > 0.0, "initial epsilon must be positive");
    }
}

Field coupling_on(const SimConfig& cfg, const Grid& grid) {
    if (cfg.coupling_field) return *cfg.coupling_field;
    return Field::constant(grid, cfg.coupling);
}

Field counterterm_field(const SimConfig& cfg, const Grid& grid) {
    const double a = cfg.mass_term ? a_closed(cfg.r) : 0.0;
    const double b = cfg.log_term ? b_closed(cfg.r) : 0.0;
    return map_pointwise(coupling_on(cfg, grid), [a, b](double l) { return 3.0 * l * a - 3.0 * l * l * b; });
}

Field initial_field(const SimConfig& cfg, const Grid& grid) {
    switch (cfg.initial.kind) {
        case InitialCondition::Kind::Zero:
            return Field(grid);
        case InitialCondition::Kind::Given:
            return *cfg.initial.field;
        case InitialCondition::Kind::ScaledRandom: {
            const NoiseStream s(cfg.seed, cfg.stream);
            const double r = cfg.r;
            const Field shape = gaussian_field(grid, s, 0, NoisePurpose::InitialCondition,
                                               [&](double l) { return stationary_mode_variance(grid, l, r); });
            const double norm = besov_norm(shape, -0.5 - cfg.initial.epsilon, kInfinity, kInfinity);
            return (cfg.initial.size / norm) * shape;
        }
    }
    throw std::logic_error("initial_field: unknown kind");
}

}  // namespace phi4
